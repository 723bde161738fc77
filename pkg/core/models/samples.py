"""
This module defines the value types returned by experiments: plan samples, grid
potentials, rate samples, porosity profiles and the small report records built from them.
"""



from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Optional

import numpy as np

from ..errors import BoundViolationError, InputError



RATE_TOL = 1e-9


def _frozen(values):
    array = np.array(values, dtype=float).ravel()
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class PlanSample:
    """Samples (r, x, y) of the monotone plan support, x = Q_m(r), y = Q_n(r).

    Attributes:
        rs (np.ndarray): Strictly increasing levels in (0, total mass].
        xs (np.ndarray): Source quantiles, nondecreasing.
        ys (np.ndarray): Target quantiles, nondecreasing.
    """
    rs: np.ndarray
    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        for name in ("rs", "xs", "ys"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        if not (self.rs.size == self.xs.size == self.ys.size):
            raise InputError("Plan sample arrays differ in length")
        if np.any(np.diff(self.rs) <= 0):
            raise InputError("Plan levels must be strictly increasing")
        if np.any(np.diff(self.xs) < 0) or np.any(np.diff(self.ys) < 0):
            raise InputError("Monotone plan samples must be nondecreasing")

    def __iter__(self):
        return iter(zip(self.rs.tolist(), self.xs.tolist(), self.ys.tolist()))

    def __len__(self):
        return int(self.rs.size)

    @property
    def displacement(self):
        """|y - x| per sample."""
        return np.abs(self.ys - self.xs)


@dataclass(frozen=True, eq=False)
class GridPotential:
    """A potential sampled on the uniform grid x_i = start + i * step.

    Attributes:
        start (float): The first grid point.
        step (float): Grid step, positive.
        values (np.ndarray): Potential value per grid point, finite.
        p (float): Cost exponent of the c-transform, p >= 1.
    """
    start: float
    step: float
    values: np.ndarray
    p: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values))
        object.__setattr__(self, "start", float(self.start))
        object.__setattr__(self, "step", float(self.step))
        object.__setattr__(self, "p", float(self.p))

        if not (np.isfinite(self.step) and self.step > 0):
            raise InputError(f"Grid step must be positive, got {self.step}")
        if not np.isfinite(self.start):
            raise InputError("Grid start must be finite")
        if self.values.size == 0 or not np.all(np.isfinite(self.values)):
            raise InputError("A grid potential needs finite values")
        if not self.p >= 1:
            raise InputError(f"Cost exponent must be >= 1, got {self.p}")

    @classmethod
    def from_function(cls, f, lo: float, hi: float, step: float, p: float=1.0):
        """Samples `f` on the grid covering [lo, hi] with the given step."""
        count = int(round((hi - lo) / step)) + 1
        grid = lo + step * np.arange(count)
        return cls(start=lo, step=step, values=f(grid), p=p)

    @property
    def grid(self):
        return self.start + self.step * np.arange(self.values.size)

    def __len__(self):
        return int(self.values.size)

    def with_values(self, values):
        return GridPotential(self.start, self.step, values, self.p)


@dataclass(frozen=True)
class RateSample:
    """One rate measurement W_p(m, m_h) / h.

    Attributes:
        h (float): The perturbation scale.
        p (float): The transport exponent.
        distance (float): W_p(m, m_h).
        quotient (float): distance / h.
        truncation_error_bound (float): Distance error bound when m stands in for a limit measure.
    """
    h: float
    p: float
    distance: float
    quotient: float
    truncation_error_bound: float = 0.0

    def __post_init__(self):
        if not self.h > 0:
            raise InputError(f"Scale h must be positive, got {self.h}")
        if self.distance < 0 or self.truncation_error_bound < 0:
            raise InputError("Distances and bounds must be nonnegative")
        if self.quotient > 1 + self.truncation_error_bound / self.h + RATE_TOL:
            raise BoundViolationError(
                f"Rate quotient {self.quotient!r} exceeds the coupling bound at h={self.h!r}, p={self.p!r}")

    def to_row(self):
        """Returns the CSV row of this sample."""
        return {
            "h": self.h,
            "p": self.p,
            "distance": self.distance,
            "quotient": self.quotient,
            "trunc_bound": self.truncation_error_bound}


@dataclass(frozen=True, eq=False)
class PorosityProfile:
    """Porosity indices tau(s) at strictly decreasing scales s.

    Attributes:
        scales (np.ndarray): Strictly decreasing positive scales.
        taus (np.ndarray): Porosity index per scale, in [0, 1].
    """
    scales: np.ndarray
    taus: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "scales", _frozen(self.scales))
        object.__setattr__(self, "taus", _frozen(self.taus))
        if self.scales.size != self.taus.size:
            raise InputError("Scales and indices differ in length")
        if np.any(self.scales <= 0) or np.any(np.diff(self.scales) >= 0):
            raise InputError("Profile scales must be positive and strictly decreasing")
        if np.any(self.taus < 0) or np.any(self.taus > 1):
            raise InputError("Porosity indices must lie in [0, 1]")

    def __iter__(self):
        return iter(zip(self.scales.tolist(), self.taus.tolist()))

    def __len__(self):
        return int(self.scales.size)


class Verdict(Enum):
    """Three-valued outcome of the porous-class diagnostic.

    - Consistent: the index falls below the threshold and keeps decreasing on the tail.
    - Inconsistent: the index stays at or above the threshold at the smallest scales.
    - Inconclusive: neither pattern is visible.
    """
    CONSISTENT = "consistent-with-A"
    INCONSISTENT = "inconsistent"
    INCONCLUSIVE = "inconclusive"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class POrderingRow:
    """Sandwich check W_1/h <= W_p/h <= (W_1/h)^(1/p) at one exponent."""
    p: float
    quotient: float
    lower_margin: float
    upper_margin: float

    @property
    def ok(self):
        return self.lower_margin >= -RATE_TOL and self.upper_margin >= -RATE_TOL


@dataclass(frozen=True)
class POrderingReport:
    h: float
    w1_quotient: float
    rows: tuple[POrderingRow, ...]

    @property
    def ok(self):
        return all(row.ok for row in self.rows)

    @property
    def worst_margin(self):
        return min(min(row.lower_margin, row.upper_margin) for row in self.rows)


@dataclass(frozen=True)
class FieldRateRow:
    """q(h) = W_2(base, exp(h xi)) / h against the target norm."""
    h: float
    quotient: float
    target: float
    deficit: float


@dataclass(frozen=True)
class RemoveBaryRow:
    """Both sides of the barycenter-removal inequality at one scale; margin = rhs - lhs."""
    h: float
    lhs: float
    rhs: float
    margin: float


@dataclass
class CriterionResult:
    """Outcome of one acceptance criterion.

    Attributes:
        name (str): Criterion identifier.
        passed (bool): Whether the criterion holds.
        margin (float): Smallest slack over all checks; negative means failure.
        details (dict): Criterion-specific measurements.
        runtime_s (float): Wall-clock time spent.
        error (str|None): Message of an unexpected error, if any.
    """
    name: str
    passed: bool
    margin: float
    details: dict[str, Any] = field(default_factory=dict)
    runtime_s: float = 0.0
    error: Optional[str] = None

    def to_dict(self):
        return asdict(self)
