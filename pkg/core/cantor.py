"""
Centered Cantor constructions C(alpha) and their uniform measures.

Generation n is a union of 2^n closed intervals of common length delta_n, obtained from
[0, 1] by repeatedly removing the open middle proportion alpha_k of every interval. The
uniform measure mu^n spreads mass 2^-n over each of them; it stands in for the limit
measure with W_1 error at most delta_n.

Methods:
    - generation(spec, n) -> IntervalSet
    - cantor_measure(spec, n) -> Measure1D
    - layer_fn(spec, n) -> PiecewiseLinear: F_{mu^{n+1}} - F_{mu^n}
    - lebesgue_mass(spec, n) -> float
    - critical_h_sequences(spec, n_range) -> (fail_seq, band_seq)
    - cdf_at(spec, n, xs) -> np.ndarray: streaming evaluation of F_{mu^n}
"""



import logging
import math

import numpy as np

from .errors import InputError
from .models import CantorSpec, IntervalSet, Measure1D, PiecewiseLinear
from .utils import FileUtils



logger = logging.getLogger(__name__)


def _lefts(spec: CantorSpec, n: int):
    deltas = spec.deltas(n)
    lefts = np.zeros(1)
    for k in range(n):
        shifted = lefts + (deltas[k] - deltas[k + 1])
        lefts = np.column_stack((lefts, shifted)).ravel()

    return lefts, deltas


def generation(spec: CantorSpec, n: int):
    """Returns C^n: 2^n intervals of length delta_n.

    Raises:
        DepthExceededError: If n is above the spec's depth limit.
    """
    if n < 0:
        raise InputError(f"Generation must be nonnegative, got {n}")
    spec.check_depth(n)

    lefts, deltas = _lefts(spec, n)
    logger.debug("Built generation %d of %s", n, spec)
    return IntervalSet(lefts, lefts + deltas[n])


def cantor_measure(spec: CantorSpec, n: int):
    """Returns mu^n, the uniform probability measure on C^n (mass 2^-n per interval)."""
    intervals = generation(spec, n)
    mass = np.full(len(intervals), math.ldexp(1.0, -n))
    return Measure1D([], [], intervals.left, intervals.right, mass)


def midpoint_atoms(spec: CantorSpec, n: int):
    """Returns the atomic discretization of mu^n: mass 2^-n at each interval midpoint."""
    intervals = generation(spec, n)
    mids = 0.5 * (intervals.left + intervals.right)
    return Measure1D(mids, np.full(mids.size, math.ldexp(1.0, -n)), [], [], [])


def layer_fn(spec: CantorSpec, n: int):
    """Returns f_n = F_{mu^{n+1}} - F_{mu^n} as an exact piecewise-linear function.

    f_n vanishes off C^n. On each interval of C^n it rises to 2^-(n+1) alpha_n at the end of
    the left child, falls linearly across the removed middle to -2^-(n+1) alpha_n at the
    start of the right child, and returns to 0.
    """
    if n < 0:
        raise InputError(f"Layer index must be nonnegative, got {n}")
    spec.check_depth(n + 1)

    children = generation(spec, n + 1)
    peak = math.ldexp(spec.alpha(n), -(n + 1))

    xs = np.column_stack((children.left, children.right)).ravel()
    pattern = np.array([0.0, peak, -peak, 0.0])
    values = np.tile(pattern, len(children) // 2)

    return PiecewiseLinear.from_points(xs, values)


def lebesgue_mass(spec: CantorSpec, n: int):
    """Returns L(C^n) = 2^n delta_n = prod_{k<n} (1 - alpha_k)."""
    if n < 0:
        raise InputError(f"Generation must be nonnegative, got {n}")
    return math.prod(1.0 - a for a in spec.alphas(n).tolist())


def truncation_bound(spec: CantorSpec, n: int):
    """W_1 distance bound between the limit measure and mu^n: delta_n."""
    return spec.delta(n)


def critical_h_sequences(spec: CantorSpec, n_range):
    """Returns the probe scales of both rate regimes for every n in `n_range`.

    fail_seq[i] = alpha_n delta_n / 2, the scale where the limit quotient stays bounded
    below when alpha does not vanish. band_seq[i] = (sqrt(alpha_n) delta_{n+1},
    sqrt(alpha_{n-1}) delta_n), the band on which the quotient is small when alpha -> 0.

    Raises:
        InputError: If n_range is empty or contains n < 1.
    """
    ns = list(n_range)
    if not ns or min(ns) < 1:
        raise InputError("Critical sequences need generations n >= 1")

    deltas = spec.deltas(max(ns) + 1)
    fail_seq = [spec.alpha(n) * deltas[n] / 2.0 for n in ns]
    band_seq = [
        (math.sqrt(spec.alpha(n)) * deltas[n + 1], math.sqrt(spec.alpha(n - 1)) * deltas[n])
        for n in ns]

    return fail_seq, band_seq


def band_probes(spec: CantorSpec, n_range):
    """One probe scale per band: the geometric mean of its ends."""
    _, bands = critical_h_sequences(spec, n_range)
    return [math.sqrt(lo * hi) for lo, hi in bands]


def matched_scales(spec: CantorSpec, m_range):
    """Porosity scales s_m = delta_m (1 + alpha_m) / 2, one per generation m."""
    ms = list(m_range)
    deltas = spec.deltas(max(ms) if ms else 0)
    return [deltas[m] * (1.0 + spec.alpha(m)) / 2.0 for m in ms]


def cdf_at(spec: CantorSpec, n: int, xs):
    """Evaluates F_{mu^n} at xs in O(n) per point without building the generation.

    Each point descends through the construction: it collects the mass of every child
    lying entirely to its left and stops once it falls in a removed middle.
    """
    if n < 0:
        raise InputError(f"Generation must be nonnegative, got {n}")
    spec.check_depth(n)

    xs = np.asarray(xs, dtype=float)
    flat = xs.ravel()
    deltas = spec.deltas(n)

    value = np.where(flat >= 1.0, 1.0, 0.0)
    active = (flat >= 0.0) & (flat < 1.0)
    left = np.zeros_like(flat)

    for k in range(n):
        half = math.ldexp(1.0, -(k + 1))
        child = deltas[k + 1]
        right_start = left + (deltas[k] - child)

        in_gap = active & (flat >= left + child) & (flat < right_start)
        in_right = active & (flat >= right_start)

        value = np.where(in_gap | in_right, value + half, value)
        left = np.where(in_right, right_start, left)
        active = active & ~in_gap

    fraction = np.clip((flat - left) / deltas[n], 0.0, 1.0)
    value = np.where(active, value + math.ldexp(1.0, -n) * fraction, value)

    return value.reshape(xs.shape)


def load_cantor_spec(path: str):
    """Reads a JSON Cantor spec from `path`."""
    data, lines = FileUtils.read_json(path)
    return CantorSpec.from_dict(data, lines)
