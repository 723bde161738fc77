"""
Initialization module for the lab's domain types.

This module imports the value types shared by all operations: measures and the functions
derived from them, interval sets and Cantor rules, measure fields, and the records that
experiments produce.

Imports:
    - **Measure1D**: Atoms plus uniform segments on the real line.
    - **PiecewiseLinear** / **MonotoneFn**: Piecewise-linear functions with jumps; distribution and quantile functions.
    - **IntervalSet**: A finite union of disjoint closed intervals.
    - **AlphaKind** / **CantorSpec**: Gap-ratio rules of centered Cantor constructions.
    - **MeasureField**: Velocity distributions over an atomic base.
    - **PlanSample**, **GridPotential**, **RateSample**, **PorosityProfile**, **Verdict**: Experiment values.
    - **ExperimentConfig**: Validated command configuration.
"""

from .monotone_fn import MonotoneFn, PiecewiseLinear
from .measure import Measure1D
from .interval_set import IntervalSet
from .cantor_spec import AlphaKind, CantorSpec
from .measure_field import MeasureField
from .samples import (
    CriterionResult,
    FieldRateRow,
    GridPotential,
    PlanSample,
    POrderingReport,
    POrderingRow,
    PorosityProfile,
    RateSample,
    RemoveBaryRow,
    Verdict)
from .config import ExperimentConfig

__all__ = [
    'AlphaKind',
    'CantorSpec',
    'CriterionResult',
    'ExperimentConfig',
    'FieldRateRow',
    'GridPotential',
    'IntervalSet',
    'Measure1D',
    'MeasureField',
    'MonotoneFn',
    'PiecewiseLinear',
    'PlanSample',
    'POrderingReport',
    'POrderingRow',
    'PorosityProfile',
    'RateSample',
    'RemoveBaryRow',
    'Verdict',
]
