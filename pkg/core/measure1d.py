"""
Exact arithmetic for finite-complexity measures on the real line.

Measures are Measure1D values (atoms plus uniform segments). The operations here build new
measures (pushforward, mixture, restriction) and evaluate them (distribution and quantile
functions, moments, integrals of piecewise-linear functions). All of them are pure.

Methods:
    - cdf(m) -> MonotoneFn: F(x) = m((-inf, x]).
    - quantile(m) -> MonotoneFn: Q(r) = inf {x : F(x) >= r} on (0, total mass].
    - pushforward_affine(m, a, b) -> Measure1D: image under x -> a x + b.
    - mixture(ms) -> Measure1D: weighted sum of measures.
    - restrict(m, A) -> Measure1D: m restricted to a closed interval set.
    - moment(m, p) -> float: integral of |x|^p.
    - integrate(m, psi) -> float: integral of a piecewise-linear psi.
"""



import logging
import math

import numpy as np

from .errors import EmptyMeasureError, InputError
from .models import IntervalSet, Measure1D, MonotoneFn, PiecewiseLinear
from .utils import FileUtils



logger = logging.getLogger(__name__)


def _segment_cdf(m: Measure1D, xs: np.ndarray):
    """Mass of the segment part on (-inf, x], exact at segment ends."""
    if m.seg_left.size == 0:
        return np.zeros_like(xs)

    cumulative = np.concatenate(([0.0], np.cumsum(m.seg_mass)))
    j = np.searchsorted(m.seg_left, xs, side="right") - 1
    jc = np.clip(j, 0, m.seg_left.size - 1)

    left, right = m.seg_left[jc], m.seg_right[jc]
    fraction = np.clip((xs - left) / (right - left), 0.0, 1.0)
    partial = np.where(xs >= right, cumulative[jc + 1], cumulative[jc] + m.seg_mass[jc] * fraction)

    return np.where(j < 0, 0.0, partial)


def cdf(m: Measure1D):
    """Returns the distribution function F(x) = m((-inf, x]).

    Breakpoints are all atom positions and segment ends. The value at a breakpoint is the
    right limit; the left limit differs by the atom mass there.
    """
    xs = m.breakpoints()
    seg = _segment_cdf(m, xs)

    atom_cumulative = np.concatenate(([0.0], np.cumsum(m.atom_mass)))
    right = seg + atom_cumulative[np.searchsorted(m.atom_x, xs, side="right")]
    left = seg + atom_cumulative[np.searchsorted(m.atom_x, xs, side="left")]

    return MonotoneFn(xs=xs, value_left=left, value_right=right, continuity="right")


def quantile(m: Measure1D):
    """Returns the quantile function Q(r) = inf {x : F(x) >= r} for r in (0, total mass].

    The completed graph of F is traversed vertex by vertex; vertices sharing the same level
    r become one quantile breakpoint whose left value is the smallest x (the inf convention)
    and whose right value is the largest. Evaluating outside (0, total mass] raises a
    DomainError.
    """
    F = cdf(m)

    levels = np.column_stack((F.value_left, F.value_right)).ravel()
    positions = np.repeat(F.xs, 2)

    starts = np.concatenate(([True], levels[1:] != levels[:-1]))
    first = np.flatnonzero(starts)
    last = np.concatenate((first[1:] - 1, [levels.size - 1]))

    rs = levels[first]
    total = float(rs[-1])
    return MonotoneFn(
        xs=rs,
        value_left=positions[first],
        value_right=positions[last],
        continuity="left",
        domain=(0.0, total))


def pushforward_affine(m: Measure1D, a: float, b: float):
    """Returns the image of m under x -> a x + b.

    For a = 0 the image is the single atom (b, total mass). Atoms map to atoms and segments
    to segments, reversed in order when a < 0. Masses are carried over unchanged.
    """
    a, b = float(a), float(b)
    if a == 0.0:
        return Measure1D.dirac(b, m.total_mass)

    atom_x = a * m.atom_x + b
    seg_left = a * m.seg_left + b
    seg_right = a * m.seg_right + b
    atom_mass, seg_mass = m.atom_mass, m.seg_mass
    if a < 0:
        atom_x, atom_mass = atom_x[::-1], atom_mass[::-1]
        seg_left, seg_right = seg_right[::-1], seg_left[::-1]
        seg_mass = seg_mass[::-1]

    ## Rounding can collide images of nearby points; canonicalize only then.
    if (np.all(np.diff(atom_x) > 0) and np.all(seg_right > seg_left)
            and np.all(seg_left[1:] >= seg_right[:-1])):
        return Measure1D(atom_x, atom_mass, seg_left, seg_right, seg_mass)

    logger.debug("Affine image (a=%r, b=%r) collided points; canonicalizing", a, b)
    return Measure1D.canonical(atom_x, atom_mass, seg_left, seg_right, seg_mass)


def mixture(ms):
    """Returns the weighted sum of measures.

    Args:
        ms (Iterable[tuple[Measure1D, float]]): (measure, weight) pairs with weights >= 0.

    Raises:
        InputError: If a weight is negative or not finite, or all weights are zero.
    """
    parts = list(ms)
    if not parts:
        raise InputError("A mixture needs at least one measure")

    atom_x, atom_mass, seg_left, seg_right, seg_mass = [], [], [], [], []
    for measure, weight in parts:
        weight = float(weight)
        if not math.isfinite(weight) or weight < 0:
            raise InputError(f"Mixture weights must be finite and nonnegative, got {weight}")
        if weight == 0:
            continue
        atom_x.append(measure.atom_x)
        atom_mass.append(measure.atom_mass * weight)
        seg_left.append(measure.seg_left)
        seg_right.append(measure.seg_right)
        seg_mass.append(measure.seg_mass * weight)

    if not atom_x:
        raise InputError("A mixture needs at least one positive weight")

    return Measure1D.canonical(
        np.concatenate(atom_x),
        np.concatenate(atom_mass),
        np.concatenate(seg_left),
        np.concatenate(seg_right),
        np.concatenate(seg_mass))


def restrict(m: Measure1D, A: IntervalSet):
    """Returns m restricted to the closed set A; atoms on interval ends are kept.

    Raises:
        EmptyMeasureError: If nothing of m lies in A.
    """
    keep = A.contains(m.atom_x)
    atom_x, atom_mass = m.atom_x[keep], m.atom_mass[keep]

    left, right, mass = m.seg_left, m.seg_right, m.seg_mass
    first = np.searchsorted(A.right, left, side="left")
    stop = np.searchsorted(A.left, right, side="right")
    counts = np.maximum(stop - first, 0)

    seg_index = np.repeat(np.arange(left.size), counts)
    interval_index = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts) + np.repeat(first, counts)

    lo = np.maximum(left[seg_index], A.left[interval_index])
    hi = np.minimum(right[seg_index], A.right[interval_index])
    width = right[seg_index] - left[seg_index]
    whole = (lo == left[seg_index]) & (hi == right[seg_index])
    piece_mass = np.where(whole, mass[seg_index], mass[seg_index] * (hi - lo) / width)

    positive = hi > lo
    lo, hi, piece_mass = lo[positive], hi[positive], piece_mass[positive]

    if atom_x.size + lo.size == 0:
        raise EmptyMeasureError(f"Restriction to {A} carries no mass")

    return Measure1D.canonical(atom_x, atom_mass, lo, hi, piece_mass)


def moment(m: Measure1D, p: float):
    """Returns the integral of |x|^p dm for p >= 1.

    Atoms are exact; segments use the antiderivative x |x|^p / (p + 1).
    """
    p = float(p)
    if not p >= 1:
        raise InputError(f"Moment order must be >= 1, got {p}")

    def G(x):
        return x * np.abs(x) ** p / (p + 1.0)

    atoms = np.sum(m.atom_mass * np.abs(m.atom_x) ** p)
    segments = np.sum(m.seg_density * (G(m.seg_right) - G(m.seg_left)))
    return float(atoms + segments)


def integrate(m: Measure1D, psi: PiecewiseLinear):
    """Returns the integral of psi dm, exact for piecewise-linear psi."""
    atoms = np.sum(m.atom_mass * np.atleast_1d(psi(m.atom_x))) if m.atom_x.size else 0.0
    if m.seg_left.size:
        Psi = psi.antiderivative(np.concatenate((m.seg_left, m.seg_right)))
        k = m.seg_left.size
        segments = np.sum(m.seg_density * (Psi[k:] - Psi[:k]))
    else:
        segments = 0.0

    return float(atoms + segments)


def load_measure(path: str):
    """Reads a JSON measure spec from `path`.

    Raises:
        SpecValidationError: On malformed JSON or invalid measure data.
    """
    data, lines = FileUtils.read_json(path)
    measure = Measure1D.from_dict(data, lines)
    logger.info("Loaded %s from %s", measure, path)
    return measure
