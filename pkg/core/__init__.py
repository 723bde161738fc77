"""
Initialization module for the transport lab.

This module imports the operations on one-dimensional measures, the exact transport
distances between them, and the experiments built on top: shift-superposition rates,
Cantor constructions, porosity profiles and measure fields over atomic bases.

Imports:
    - **measure1d**: cdf, quantile, pushforward_affine, mixture, restrict, moment, integrate.
    - **transport**: wasserstein, transport_cost, monotone_plan, dual_lower_bound_w1, c_transform, coarse_porous_set, submeasure_distance_bound.
    - **rates**: shift_superpose, rate_quotient, rate_scan, p_ordering_check, cdf_second_difference.
    - **cantor**: generation, cantor_measure, layer_fn, lebesgue_mass, critical_h_sequences, cdf_at.
    - **porosity**: porosity_index, porosity_profile, class_A_diagnostic, distance_potential.
    - **tangent_field**: exp_map, barycenter, center, w_mu, inner, limsup_condition_check, removebary_check.
"""



from .settings import VERSION as __version__
from .measure1d import cdf, integrate, mixture, moment, pushforward_affine, quantile, restrict
from .transport import (
    c_transform,
    coarse_porous_set,
    dual_lower_bound_w1,
    monotone_plan,
    submeasure_distance_bound,
    transport_cost,
    wasserstein)
from .rates import cdf_second_difference, p_ordering_check, rate_quotient, rate_scan, shift_superpose
from .cantor import cantor_measure, cdf_at, critical_h_sequences, generation, layer_fn, lebesgue_mass
from .porosity import class_A_diagnostic, distance_potential, porosity_index, porosity_profile
from .tangent_field import barycenter, center, exp_map, inner, limsup_condition_check, removebary_check, w_mu

__all__ = [
    "barycenter",
    "c_transform",
    "cantor_measure",
    "cdf",
    "cdf_at",
    "cdf_second_difference",
    "center",
    "class_A_diagnostic",
    "coarse_porous_set",
    "critical_h_sequences",
    "distance_potential",
    "dual_lower_bound_w1",
    "exp_map",
    "generation",
    "inner",
    "integrate",
    "layer_fn",
    "lebesgue_mass",
    "limsup_condition_check",
    "mixture",
    "moment",
    "monotone_plan",
    "p_ordering_check",
    "porosity_index",
    "porosity_profile",
    "pushforward_affine",
    "quantile",
    "rate_quotient",
    "rate_scan",
    "removebary_check",
    "restrict",
    "shift_superpose",
    "submeasure_distance_bound",
    "transport_cost",
    "w_mu",
    "wasserstein",
]
