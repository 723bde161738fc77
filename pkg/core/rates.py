"""
Shift-superposition rates.

m_h = 1/2 (id - h)_# m + 1/2 (id + h)_# m is the perturbation whose speed W_p(m, m_h) / h
is measured here. The identity coupling bounds it by 1 for every measure; Dirac masses
attain it and absolutely continuous measures drive it to 0.

Methods:
    - shift_superpose(m, h) -> Measure1D
    - rate_quotient(m, h, p) -> RateSample
    - rate_scan(m, hs, p) -> list[RateSample]
    - cantor_scan(spec, n_range, p) -> list[tuple[int, str, RateSample]]
    - p_ordering_check(m, h, ps) -> POrderingReport
    - geometric_grid(h_min, h_max, count) -> list[float]
    - cdf_second_difference(m, h) -> PiecewiseLinear
    - scan_summary(samples, critical) -> dict
"""



import logging
import math

from concurrent.futures import ThreadPoolExecutor, as_completed

import numpy as np

from .cantor import band_probes, cantor_measure, critical_h_sequences, truncation_bound
from .errors import BoundViolationError, CrossCheckError, InputError
from .measure1d import cdf, mixture, pushforward_affine
from .models import AlphaKind, CantorSpec, Measure1D, PiecewiseLinear, POrderingReport, POrderingRow, RateSample
from .settings import get_settings
from .transport import CROSS_CHECK_TOL, wasserstein



logger = logging.getLogger(__name__)

ORDERING_TOL = 1e-9


def shift_superpose(m: Measure1D, h: float):
    """Returns m_h = 1/2 (id - h)_# m + 1/2 (id + h)_# m; h = 0 gives m itself."""
    h = float(h)
    if not h >= 0:
        raise InputError(f"Shift must be nonnegative, got {h}")
    if h == 0:
        return m

    return mixture([(pushforward_affine(m, 1.0, -h), 0.5), (pushforward_affine(m, 1.0, h), 0.5)])


def rate_quotient(m: Measure1D, h: float, p: float=1.0, truncation: float=0.0):
    """Returns the RateSample of W_p(m, m_h) / h.

    Args:
        truncation (float): Distance error bound when m approximates a limit measure.

    Raises:
        BoundViolationError: If the quotient exceeds the identity-coupling bound.
    """
    h = float(h)
    if not h > 0:
        raise InputError(f"Scale h must be positive, got {h}")

    distance = wasserstein(m, shift_superpose(m, h), p)
    return RateSample(h=h, p=float(p), distance=distance, quotient=distance / h, truncation_error_bound=truncation)


def rate_scan(m: Measure1D, hs, p: float=1.0, truncation=0.0, threads=None):
    """Evaluates rate_quotient at every scale in `hs`, keeping the input order.

    Args:
        truncation (float|list[float]): One bound for all scales, or one per scale.
        threads (int|None): Worker cap; defaults to the PO_THREADS setting.
    """
    hs = [float(h) for h in hs]
    if not hs:
        raise InputError("A rate scan needs at least one scale")
    if any(not h > 0 for h in hs):
        raise InputError("Scan scales must be positive")

    bounds = list(truncation) if np.ndim(truncation) else [float(truncation)] * len(hs)
    if len(bounds) != len(hs):
        raise InputError("One truncation bound per scale is required")

    logger.info("Scanning %d scales (p=%r)", len(hs), p)
    samples = [None] * len(hs)
    with ThreadPoolExecutor(max_workers=threads or get_settings().threads) as executor:
        futures = {
            executor.submit(rate_quotient, m, h, p, bound): i
            for i, (h, bound) in enumerate(zip(hs, bounds))}

        for future in as_completed(futures):
            samples[futures[future]] = future.result()

    return samples


def cantor_scan(spec: CantorSpec, n_range, p: float=1.0, regime: str="auto", depth=None):
    """Scans the rate of the depth-N approximant along the critical scales of `spec`.

    The "fail" regime probes h_n = alpha_n delta_n / 2, the "band" regime one scale per
    band; "auto" picks bands for the harmonic rule and fail probes otherwise. Every
    sample records 2 delta_N as its truncation bound.

    Returns:
        list[tuple[int, str, RateSample]]: (n, regime, sample) per generation.
    """
    if regime == "auto":
        regime = "band" if spec.kind is AlphaKind.HARMONIC else "fail"
    if regime not in ("fail", "band"):
        raise InputError(f"Unknown scan regime: {regime}")

    depth = spec.depth if depth is None else depth
    ns = list(n_range)
    hs = band_probes(spec, ns) if regime == "band" else critical_h_sequences(spec, ns)[0]

    logger.info("Building generation %d of %s", depth, spec)
    measure = cantor_measure(spec, depth)
    bound = 2.0 * truncation_bound(spec, depth)

    samples = rate_scan(measure, hs, p, truncation=bound)
    return [(n, regime, sample) for n, sample in zip(ns, samples)]


def p_ordering_check(m: Measure1D, h: float, ps, strict: bool=True):
    """Checks W_1/h <= W_p/h <= (W_1/h)^(1/p) for every p in `ps`.

    The check runs on m normalized to a probability measure, where the chain holds.

    Raises:
        BoundViolationError: If strict and some p violates the chain by more than 1e-9.
    """
    total = m.total_mass
    probability = m.scaled(1.0 / total) if total != 1.0 else m

    w1 = rate_quotient(probability, h, 1.0).quotient
    rows = []
    for p in sorted({float(p) for p in ps}):
        q = w1 if p == 1.0 else rate_quotient(probability, h, p).quotient
        rows.append(POrderingRow(p=p, quotient=q, lower_margin=q - w1, upper_margin=w1 ** (1.0 / p) - q))

    report = POrderingReport(h=float(h), w1_quotient=w1, rows=tuple(rows))
    if strict and not report.ok:
        bad = next(row for row in rows if not row.ok)
        raise BoundViolationError(
            f"p-ordering fails at p={bad.p!r}, h={h!r}: margins {bad.lower_margin!r}, {bad.upper_margin!r}")

    return report


def geometric_grid(h_min: float=1e-6, h_max: float=1e-1, count=None):
    """Returns decreasing scales from h_max down to h_min.

    Without `count` the ratio is 1/2 and the grid stops at the last scale >= h_min;
    with it, `count` geometrically spaced scales include both ends.
    """
    if not 0 < h_min <= h_max:
        raise InputError(f"Need 0 < h_min <= h_max, got {h_min}, {h_max}")

    if count is not None:
        if count < 1:
            raise InputError(f"Grid size must be positive, got {count}")
        if count == 1:
            return [float(h_max)]
        return np.geomspace(h_max, h_min, int(count)).tolist()

    steps = int(math.floor(math.log2(h_max / h_min) + 1e-9))
    return [math.ldexp(h_max, -k) for k in range(steps + 1)]


def _shifted(F: PiecewiseLinear, shift: float):
    """Returns x -> F(x - shift) on breakpoints F.xs + shift.

    Breakpoints that round together are merged, keeping the outer limits.
    """
    xs = F.xs + shift
    starts = np.flatnonzero(np.r_[True, np.diff(xs) > 0])
    ends = np.r_[starts[1:], xs.size] - 1
    return PiecewiseLinear(
        xs=xs[starts],
        value_left=F.value_left[starts],
        value_right=F.value_right[ends],
        continuity=F.continuity,
        left_slope=F.left_slope,
        right_slope=F.right_slope)


def cdf_second_difference(m: Measure1D, h: float):
    """Returns g_h(x) = (1/2 [F(x - h) + F(x + h)] - F(x)) / h, exactly.

    The L^1 norm of g_h equals W_1(m, m_h) / h since F_{m_h}(x) = 1/2 [F(x + h) + F(x - h)].
    Each shifted copy keeps its own breakpoints, so no atom is lost to rounding.
    """
    h = float(h)
    if not h > 0:
        raise InputError(f"Scale h must be positive, got {h}")

    F = cdf(m)
    here, below, above = _shifted(F, 0.0), _shifted(F, h), _shifted(F, -h)
    xs = np.union1d(np.union1d(below.xs, here.xs), above.xs)

    below_l, below_r = below.limits(xs)
    above_l, above_r = above.limits(xs)
    here_l, here_r = here.limits(xs)

    left = (0.5 * (below_l + above_l) - here_l) / h
    right = (0.5 * (below_r + above_r) - here_r) / h
    return PiecewiseLinear(xs=xs, value_left=left, value_right=right)


def check_second_difference(m: Measure1D, h: float):
    """Compares the second-difference route with rate_quotient for p = 1.

    Raises:
        CrossCheckError: If the routes disagree beyond 1e-9.
    """
    direct = rate_quotient(m, h, 1.0).quotient
    other = cdf_second_difference(m, h).l1_norm()
    if abs(direct - other) > CROSS_CHECK_TOL * max(1.0, direct):
        raise CrossCheckError(f"W_1/h routes disagree at h={h!r}: {direct!r} vs {other!r}")
    return direct


def scan_summary(samples, critical=None):
    """Summarizes a scan without claiming a limit.

    Args:
        samples (list[RateSample]): The scan.
        critical (list[float]|None): Scales of a critical subsequence within the scan.

    Returns:
        dict: Maximum quotient and its scale, over all samples and over the critical ones.
    """
    if not samples:
        raise InputError("Cannot summarize an empty scan")

    best = max(samples, key=lambda s: s.quotient)
    summary = {
        "count": len(samples),
        "max_quotient": best.quotient,
        "argmax_h": best.h,
        "min_quotient": min(s.quotient for s in samples),
        "max_trunc_bound": max(s.truncation_error_bound for s in samples)}

    if critical is not None:
        wanted = np.asarray(critical, dtype=float)
        chosen = [s for s in samples if np.any(np.isclose(wanted, s.h, rtol=1e-12, atol=0))]
        if chosen:
            top = max(chosen, key=lambda s: s.quotient)
            summary["critical_max_quotient"] = top.quotient
            summary["critical_argmax_h"] = top.h
            summary["critical_count"] = len(chosen)

    return summary
