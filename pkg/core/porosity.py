"""
Porosity of closed sets on the line.

For x in A and s > 0 the index tau_A(x, s) is the smallest ratio tau with
B(x, s) ∩ A ⊆ closed B(x, tau s), where B(x, s) is open; it equals the largest distance from
x of a point of A inside the ball, divided by s, and is 1 when no tau < 1 fits. A set is
porous along a scale sequence when sup_x tau_A(x, s_n) tends to 0.

The supremum over x is exact. Between the breakpoints listed in `_candidates` the reach
of the ball into A is linear in x, so the maximum is taken at a breakpoint. The one
exception is a jump: when x moves inside an interval of positive length and x + s passes
a left end (or x - s passes a right end), points at distance arbitrarily close to s enter
the ball and the supremum is 1.
"""



import logging

from concurrent.futures import ThreadPoolExecutor, as_completed

import numpy as np

from .errors import EmptyMeasureError, InputError, NotInSetError
from .measure1d import restrict
from .models import IntervalSet, Measure1D, PiecewiseLinear, PorosityProfile, Verdict
from .rates import shift_superpose
from .settings import get_settings
from .transport import dual_lower_bound_w1
from .utils import SeedUtils



logger = logging.getLogger(__name__)

MEMBERSHIP_TOL = 1e-12
CROSS_CHECK_SAMPLES = 1000


def _as_set(A):
    if isinstance(A, IntervalSet):
        return A
    return IntervalSet.from_points(A)


def _reach(A: IntervalSet, xs: np.ndarray, s: float):
    """Largest distance from each x of a point of A in the open ball B(x, s), divided by s."""
    j = np.searchsorted(A.left, xs + s, side="left") - 1
    jc = np.clip(j, 0, len(A) - 1)
    right = np.where(A.right[jc] >= xs + s, s, A.right[jc] - xs)

    i = np.searchsorted(A.right, xs - s, side="right")
    ic = np.clip(i, 0, len(A) - 1)
    left = np.where(A.left[ic] <= xs - s, s, xs - A.left[ic])

    reach = np.maximum(np.maximum(right, left), 0.0)
    return np.minimum(reach / s, 1.0)


def _jumps_to_one(A: IntervalSet, s: float):
    """True if some x in A has points at distance arbitrarily close to s enter its ball."""
    solid = A.right > A.left
    if not np.any(solid):
        return False

    ## x = L_k - s + eps must lie in some [l, r) with r > l.
    targets = A.left - s
    i = np.searchsorted(A.left, targets, side="right") - 1
    ic = np.clip(i, 0, len(A) - 1)
    if np.any((i >= 0) & (targets < A.right[ic])):
        return True

    ## x = R_k + s - eps must lie in some (l, r] with r > l.
    targets = A.right + s
    i = np.searchsorted(A.right, targets, side="left")
    ic = np.clip(i, 0, len(A) - 1)
    return bool(np.any((i < len(A)) & (targets > A.left[ic])))


def _candidates(A: IntervalSet, s: float):
    """Endpoints, midpoints and the points x = R_j - s, x = L_i + s that lie in A."""
    ends = np.concatenate((A.left, A.right, 0.5 * (A.left + A.right)))
    shifted = np.concatenate((A.right - s, A.left + s))
    return np.unique(np.concatenate((ends, shifted[A.contains(shifted)])))


def porosity_index(A, x: float, s: float):
    """Returns tau_A(x, s) for a single point x of A.

    Args:
        A (IntervalSet|list[float]): The set; a list is read as finitely many points.

    Raises:
        NotInSetError: If x is not in A.
    """
    A = _as_set(A)
    if not s > 0:
        raise InputError(f"Scale must be positive, got {s}")
    if not A.contains([x], tol=MEMBERSHIP_TOL)[0]:
        raise NotInSetError(f"{x!r} is not a point of {A}")

    return float(_reach(A, np.array([float(x)]), float(s))[0])


def set_porosity(A, s: float):
    """Returns sup over x in A of tau_A(x, s)."""
    A = _as_set(A)
    if _jumps_to_one(A, s):
        return 1.0
    return float(np.max(_reach(A, _candidates(A, s), s)))


def random_cross_check(A, s: float, certified: float, seed: int=0):
    """Samples x uniformly over A and warns if any index beats the certified value.

    Returns:
        float: The largest sampled index.
    """
    A = _as_set(A)
    rng = SeedUtils.seed_rng("porosity", seed)
    lengths = A.lengths
    if lengths.sum() > 0:
        k = rng.choice(len(A), size=CROSS_CHECK_SAMPLES, p=lengths / lengths.sum())
        xs = A.left[k] + rng.random(CROSS_CHECK_SAMPLES) * lengths[k]
    else:
        xs = A.left[rng.integers(0, len(A), size=CROSS_CHECK_SAMPLES)]

    sampled = float(np.max(_reach(A, xs, s)))
    if sampled > certified + MEMBERSHIP_TOL:
        logger.warning("Sampled porosity %r beats the certified value %r at s=%r", sampled, certified, s)
    return sampled


def porosity_profile(A, scales, cross_check: bool=False, seed: int=0):
    """Returns the PorosityProfile of A at strictly decreasing scales.

    Raises:
        InputError: If A is empty or the scales are not positive and decreasing.
    """
    A = _as_set(A)
    scales = [float(s) for s in scales]
    if any(not s > 0 for s in scales) or any(b >= a for a, b in zip(scales, scales[1:])):
        raise InputError("Porosity scales must be positive and strictly decreasing")

    taus = [0.0] * len(scales)
    with ThreadPoolExecutor(max_workers=get_settings().threads) as executor:
        futures = {executor.submit(set_porosity, A, s): i for i, s in enumerate(scales)}
        for future in as_completed(futures):
            taus[futures[future]] = future.result()

    if cross_check:
        for s, tau in zip(scales, taus):
            random_cross_check(A, s, tau, seed=seed)

    return PorosityProfile(scales=scales, taus=taus)


def class_A_diagnostic(profile: PorosityProfile, threshold: float=0.25):
    """Reads a porosity profile as evidence for or against porosity; never a proof.

    The tail is the longest run of smallest scales on the same side of the threshold.
    Consistent: the tail lies below the threshold and is nonincreasing. Inconsistent: the
    tail lies at or above it. Either needs a tail of two scales unless the profile has one.
    """
    taus = profile.taus
    if taus.size == 0:
        raise InputError("Cannot diagnose an empty profile")

    need = min(2, taus.size)
    below = taus < threshold
    side = below[-1]
    run = 1
    while run < taus.size and below[-run - 1] == side:
        run += 1

    if run < need:
        return Verdict.INCONCLUSIVE
    if not side:
        return Verdict.INCONSISTENT

    tail = taus[-run:]
    if np.all(np.diff(tail) <= MEMBERSHIP_TOL):
        return Verdict.CONSISTENT
    return Verdict.INCONCLUSIVE


def distance_potential(A):
    """Returns psi(x) = d(x, A) as a continuous piecewise-linear function.

    psi vanishes on A, rises with slope 1 to the middle of every gap and falls back, and
    has slopes -1 and +1 outside the hull.
    """
    A = _as_set(A)
    mids = 0.5 * (A.right[:-1] + A.left[1:])
    peaks = 0.5 * (A.left[1:] - A.right[:-1])

    xs = np.concatenate((A.left, A.right, mids))
    ys = np.concatenate((np.zeros(2 * len(A)), peaks))
    order = np.argsort(xs, kind="stable")
    xs, ys = xs[order], ys[order]

    keep = np.concatenate(([True], np.diff(xs) > 0))
    return PiecewiseLinear.from_points(xs[keep], ys[keep], left_slope=-1.0, right_slope=1.0)


def porous_rate_lower_bound(m: Measure1D, A, s: float, tau=None):
    """Evaluates the dual lower bound on W_1(m, m_h) / h at h = s (1 + tau) / 2.

    psi = d(., A) moves every point of A by at least s (1 - tau) / 2 under both shifts, so
    the bound is at least m(A) (1 - tau) / (1 + tau) - eps with eps the mass off A.

    Args:
        tau (float|None): Porosity of A at scale s; computed when omitted.

    Returns:
        tuple[float, float]: (dual bound on the quotient, target).
    """
    A = _as_set(A)
    if tau is None:
        tau = set_porosity(A, s)

    h = s * (1.0 + tau) / 2.0
    try:
        inside = restrict(m, A).total_mass
    except EmptyMeasureError:
        inside = 0.0
    eps = max(m.total_mass - inside, 0.0)

    bound = dual_lower_bound_w1(m, shift_superpose(m, h), distance_potential(A)) / h
    target = inside * (1.0 - tau) / (1.0 + tau) - eps
    logger.debug("Porous rate bound at s=%r, tau=%r: %r (target %r)", s, tau, bound, target)
    return bound, target
