import numpy as np
import pytest

from hypothesis import given, strategies as st

import core.transport

from conftest import measures
from core.cantor import cantor_measure, generation
from core.errors import GridTooNarrowError, LipschitzError, MassMismatchError, SubmeasureError
from core.models import CantorSpec, GridPotential, Measure1D, PiecewiseLinear
from core.porosity import distance_potential
from core.rates import shift_superpose
from core.transport import (
    c_transform,
    coarse_porous_set,
    double_c_transform,
    dual_lower_bound_w1,
    kappa,
    monotone_plan,
    separation_certificate,
    submeasure_distance_bound,
    transport_cost,
    w1_cdf,
    wasserstein)
from core.utils import SeedUtils
from core.utils.sampling import Sampling



@pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 3.0])
def test_distance_between_diracs(p):
    assert wasserstein(Measure1D.dirac(0.0), Measure1D.dirac(1.0), p) == pytest.approx(1.0, abs=1e-15)


def test_translated_uniforms():
    assert wasserstein(Measure1D.uniform(0.0, 1.0), Measure1D.uniform(1.0, 2.0), 2.0) == pytest.approx(1.0, rel=1e-14)


def test_two_atoms_against_their_midpoint():
    two = Measure1D.from_atoms([0.0, 1.0], [0.5, 0.5])

    assert transport_cost(two, Measure1D.dirac(0.5), 2.0) == pytest.approx(0.25, abs=1e-15)
    assert wasserstein(two, Measure1D.dirac(0.5), 2.0) == pytest.approx(0.5, abs=1e-15)


def test_mass_convention_for_heavier_measures():
    m, n = Measure1D.dirac(0.0, 2.0), Measure1D.dirac(1.0, 2.0)

    assert transport_cost(m, n, 2.0) == pytest.approx(2.0)
    assert wasserstein(m, n, 2.0) == pytest.approx(2.0)


def test_different_masses_are_rejected():
    with pytest.raises(MassMismatchError):
        wasserstein(Measure1D.dirac(0.0), Measure1D.dirac(0.0, 2.0))


@given(measures(), measures())
def test_w1_routes_agree(m, n):
    assert wasserstein(m, n, 1.0) == pytest.approx(w1_cdf(m, n), rel=1e-9, abs=1e-12)


@given(measures(), measures(), st.sampled_from([1.5, 2.5, 3.0]))
def test_closed_form_matches_quadrature(m, n, p):
    closed = transport_cost(m, n, p, method="closed")
    quad = transport_cost(m, n, p, method="quad")

    assert closed == pytest.approx(quad, rel=1e-8, abs=1e-12)
    assert transport_cost(m, n, p) == quad


def test_integer_exponents_default_to_the_closed_form(monkeypatch):
    monkeypatch.setattr(core.transport, "_power_integral_quad", lambda *args: pytest.fail("quadrature used"))
    m, n = Measure1D.uniform(0.0, 1.0), Measure1D.dirac(0.25)

    assert transport_cost(m, n, 1.0) == pytest.approx(0.25 ** 2 / 2 + 0.75 ** 2 / 2)
    assert transport_cost(m, n, 2.0) == pytest.approx(0.25 ** 3 / 3 + 0.75 ** 3 / 3)


@given(measures(), measures(), measures())
def test_triangle_inequality(a, b, c):
    for p in (1.0, 2.0):
        assert wasserstein(a, c, p) <= wasserstein(a, b, p) + wasserstein(b, c, p) + 1e-9


def test_monotone_plan_pairs_quantiles():
    plan = monotone_plan(Measure1D.uniform(0.0, 1.0), Measure1D.dirac(0.0), [0.5, 0.25])

    assert plan.rs.tolist() == [0.25, 0.5]
    assert plan.xs == pytest.approx([0.25, 0.5])
    assert plan.ys.tolist() == [0.0, 0.0]


def test_dual_bound_with_distance_potential():
    psi = PiecewiseLinear.from_points([0.0], [0.0], left_slope=-1.0, right_slope=1.0)

    assert dual_lower_bound_w1(Measure1D.dirac(0.0), Measure1D.dirac(1.0), psi) == pytest.approx(1.0)


def test_dual_bound_rejects_steep_potentials():
    psi = PiecewiseLinear.from_points([0.0, 1.0], [0.0, 2.0])

    with pytest.raises(LipschitzError):
        dual_lower_bound_w1(Measure1D.dirac(0.0), Measure1D.dirac(1.0), psi)


def test_dual_bound_on_a_cantor_approximant():
    spec = CantorSpec.constant(1 / 3, depth=6)
    mu = cantor_measure(spec, 3)
    h = spec.delta(3) / 6
    shifted = shift_superpose(mu, h)

    bound = dual_lower_bound_w1(mu, shifted, distance_potential(generation(spec, 3)))

    assert bound == pytest.approx(h / 12, rel=1e-9)
    assert bound <= wasserstein(mu, shifted, 1.0) + 1e-12


@pytest.mark.parametrize("p", [1.0, 2.0])
def test_fast_c_transform_matches_reference(p):
    rng = SeedUtils.seed_rng("c-transform", 0)
    for _ in range(100):
        phi = Sampling.random_potential(rng, size=int(rng.integers(5, 300)), p=p)

        fast = c_transform(phi, method="fast").values
        reference = c_transform(phi, method="reference").values

        assert np.array_equal(fast, reference)


def test_c_transform_general_exponent_uses_reference():
    phi = GridPotential(0.0, 0.1, [0.0, 1.0, 0.0], p=1.5)

    assert c_transform(phi).values == pytest.approx([0.0, 0.1 ** 1.5, 0.0])


def test_double_c_transform_lies_below():
    rng = SeedUtils.seed_rng("double-c", 0)
    phi = Sampling.random_potential(rng, size=101, p=2.0)

    assert np.all(double_c_transform(phi).values <= phi.values + 1e-12)


def test_double_c_transform_for_p1_is_a_lipschitz_fixed_point():
    rng = SeedUtils.seed_rng("double-c-linear", 0)
    for _ in range(20):
        phi = Sampling.random_potential(rng, size=int(rng.integers(5, 300)), p=1.0)
        dd = double_c_transform(phi)

        assert np.all(np.abs(np.diff(dd.values)) / dd.step <= 1 + 1e-9)
        assert np.allclose(c_transform(dd).values, dd.values, rtol=0, atol=1e-9)
        assert np.all(dd.values <= phi.values + 1e-12)


@pytest.mark.parametrize("gamma", [0.6, 0.9])
def test_corner_potential_has_a_single_porous_point(gamma):
    phi = GridPotential.from_function(np.abs, -1.0, 1.0, 0.05)
    S = coarse_porous_set(phi, gamma, 0.1)

    assert S.size == 1
    assert S[0] == pytest.approx(0.0, abs=1e-12)


def test_coarse_porous_set_needs_room():
    phi = GridPotential.from_function(np.abs, -1.0, 1.0, 0.05)

    with pytest.raises(GridTooNarrowError):
        coarse_porous_set(phi, 0.6, 0.01)
    with pytest.raises(GridTooNarrowError):
        coarse_porous_set(phi, 0.6, 1.5)


def test_separation_certificate():
    s, tau = separation_certificate(0.6, 0.1, 1.0)

    assert kappa(0.6, 1.0) == pytest.approx(0.2)
    assert s == pytest.approx(0.12)
    assert tau == pytest.approx(0.8 / 1.2)


def test_submeasure_bound_on_uniform():
    mu = Measure1D.uniform(0.0, 1.0)
    alpha = Measure1D.uniform(0.0, 0.95, mass=0.95)
    beta = Measure1D.uniform(0.05, 1.0, mass=0.95)

    w, bound = submeasure_distance_bound(mu, alpha, beta, 1.0)

    assert w == pytest.approx(0.0475, rel=1e-12)
    assert bound == pytest.approx(0.05, rel=1e-12)


def test_submeasure_must_lie_below():
    mu = Measure1D.uniform(0.0, 1.0)
    alpha = Measure1D.uniform(0.0, 0.5, mass=0.9)

    with pytest.raises(SubmeasureError):
        submeasure_distance_bound(mu, alpha, alpha, 1.0)


def test_random_submeasures_respect_the_bound():
    rng = SeedUtils.seed_rng("submeasures", 0)
    for _ in range(30):
        mu, alpha, beta = Sampling.random_submeasures(rng)
        for p in (1.0, 2.0):
            w, bound = submeasure_distance_bound(mu, alpha, beta, p)
            assert w <= bound + 1e-9


def test_submeasures_must_carry_equal_mass():
    mu = Measure1D.uniform(0.0, 1.0)
    alpha = Measure1D.uniform(0.0, 0.5, mass=0.5)
    beta = Measure1D.uniform(0.0, 0.25, mass=0.25)

    with pytest.raises(MassMismatchError):
        submeasure_distance_bound(mu, alpha, beta, 1.0)
