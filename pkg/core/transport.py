"""
Exact one-dimensional optimal transport.

Distances integrate |Q_m - Q_n|^p piece by piece over the common refinement of the two
quantile functions. On each piece the difference D is linear, so the integral has a closed
form, used for p = 1 and p = 2. Other exponents go through adaptive quadrature (relative
tolerance 1e-10), with the closed form kept as an exact second route. For p = 1 a second
route integrates |F_m - F_n| and both must agree.

Measures of equal mass M other than 1 follow the normalization convention
W_p(m, n) = M * W_p(m / M, n / M). `transport_cost` is the raw plan cost
int_0^M |Q_m - Q_n|^p dr without that normalization.

Methods:
    - wasserstein(m, n, p) -> float
    - transport_cost(m, n, p) -> float
    - monotone_plan(m, n, rs) -> PlanSample
    - dual_lower_bound_w1(m, n, psi) -> float
    - c_transform(phi) -> GridPotential
    - coarse_porous_set(phi, gamma, h) -> np.ndarray
    - separation_certificate(gamma, h, p) -> (s, tau)
    - submeasure_distance_bound(mu, alpha, beta, p) -> (w, bound)
"""



import logging
import math

import numpy as np

from scipy import integrate

from .errors import (
    BoundViolationError,
    CrossCheckError,
    DomainError,
    GridTooNarrowError,
    InputError,
    LipschitzError,
    MassMismatchError,
    SeparationError,
    SubmeasureError)
from .measure1d import cdf, integrate as integrate_psi, quantile
from .models import GridPotential, Measure1D, MonotoneFn, PiecewiseLinear, PlanSample



logger = logging.getLogger(__name__)

MASS_RTOL = 1e-12
CROSS_CHECK_TOL = 1e-9
LIPSCHITZ_TOL = 1e-12
SERIES_SWITCH = 1e-4
REFERENCE_CHUNK = 512


def _check_masses(m: Measure1D, n: Measure1D):
    mass_m, mass_n = m.total_mass, n.total_mass
    if abs(mass_m - mass_n) > MASS_RTOL * max(1.0, mass_m, mass_n):
        raise MassMismatchError(f"Measures carry different masses: {mass_m!r} vs {mass_n!r}")
    return mass_m, mass_n


def _aligned_quantiles(m: Measure1D, n: Measure1D):
    """Quantile functions of m and n on the common level range (0, M], M = mass of m."""
    _check_masses(m, n)
    Qm, Qn = quantile(m), quantile(n)
    total = Qm.domain[1]
    if Qn.domain[1] == total:
        return Qm, Qn, total

    ## Masses agree to round-off only: stretch the levels of n onto (0, M].
    levels = Qn.xs * (total / Qn.domain[1])
    levels[-1] = total
    keep = np.concatenate((np.diff(levels) > 0, [True]))
    first = np.concatenate(([True], keep[:-1]))
    Qn = MonotoneFn(
        xs=levels[keep],
        value_left=Qn.value_left[first],
        value_right=Qn.value_right[keep],
        continuity="left",
        domain=(0.0, total))
    return Qm, Qn, total


def _refined_pieces(Qm: MonotoneFn, Qn: MonotoneFn, total: float):
    """Lengths and end differences (L, D0, D1) of Q_m - Q_n on the common refinement."""
    levels = np.union1d(Qm.xs, Qn.xs)
    levels = levels[(levels >= 0.0) & (levels <= total)]

    a, b = levels[:-1], levels[1:]
    _, m0 = Qm.limits(a)
    m1, _ = Qm.limits(b)
    _, n0 = Qn.limits(a)
    n1, _ = Qn.limits(b)

    return b - a, m0 - n0, m1 - n1


def _power_integral(L, d0, d1, p: float):
    """Integral of |D|^p over pieces of length L where D runs linearly from d0 to d1."""
    if p == 1.0:
        a0, a1 = np.abs(d0), np.abs(d1)
        total = a0 + a1
        safe = np.where(total > 0, total, 1.0)
        return np.where(d0 * d1 >= 0, 0.5 * L * total, 0.5 * L * (d0 * d0 + d1 * d1) / safe)

    if p == 2.0:
        return L * (d0 * d0 + d0 * d1 + d1 * d1) / 3.0

    delta = d1 - d0
    scale = np.maximum(np.abs(d0), np.abs(d1))
    far = np.abs(delta) > SERIES_SWITCH * scale

    def G(t):
        return t * np.abs(t) ** p / (p + 1.0)

    safe_delta = np.where(far, delta, 1.0)
    closed = L * (G(d1) - G(d0)) / safe_delta

    ## Nearly constant D: expand (1 + t eps)^p in eps = delta / d0 (no sign change possible).
    safe_d0 = np.where(d0 != 0, d0, 1.0)
    eps = np.where(far, 0.0, delta / safe_d0)
    series = L * np.abs(d0) ** p * (
        1.0 + p * eps / 2.0 + p * (p - 1.0) * eps ** 2 / 6.0 + p * (p - 1.0) * (p - 2.0) * eps ** 3 / 24.0)

    return np.where(far, closed, series)


def _power_integral_quad(L, d0, d1, p: float):
    """Adaptive-quadrature route of `_power_integral`, relative tolerance 1e-10."""
    out = np.empty(np.shape(L))
    for i, (length, a, b) in enumerate(zip(np.ravel(L), np.ravel(d0), np.ravel(d1))):
        if length == 0.0 or (a == 0.0 and b == 0.0):
            out.flat[i] = 0.0
            continue
        points = [a / (a - b)] if a * b < 0 else None
        value, _ = integrate.quad(
            lambda t: abs(a + t * (b - a)) ** p, 0.0, 1.0,
            epsabs=0.0, epsrel=1e-10, points=points, limit=200)
        out.flat[i] = length * value

    return out


def transport_cost(m: Measure1D, n: Measure1D, p: float=1.0, method: str="auto"):
    """Returns the monotone plan cost int_0^M |Q_m(r) - Q_n(r)|^p dr.

    Args:
        m (Measure1D): The source measure.
        n (Measure1D): The target measure, of the same mass.
        p (float): Cost exponent, p >= 1.
        method (str): "closed" for closed-form piece integrals, "quad" for adaptive
            quadrature on every piece, "auto" for the closed form when p is 1 or 2 and
            quadrature otherwise.

    Raises:
        MassMismatchError: If the masses differ beyond round-off.
    """
    p = float(p)
    if not p >= 1:
        raise InputError(f"Transport exponent must be >= 1, got {p}")
    if method not in ("auto", "closed", "quad"):
        raise InputError(f"Unknown integration method: {method}")
    if method == "auto":
        method = "closed" if p in (1.0, 2.0) else "quad"

    Qm, Qn, total = _aligned_quantiles(m, n)
    L, d0, d1 = _refined_pieces(Qm, Qn, total)

    pieces = _power_integral_quad(L, d0, d1, p) if method == "quad" else _power_integral(L, d0, d1, p)
    logger.debug("Transport cost over %d pieces (p=%r, method=%s)", L.size, p, method)
    return float(math.fsum(pieces.tolist()))


def w1_cdf(m: Measure1D, n: Measure1D):
    """W_1 through the distribution functions: the integral of |F_m - F_n|."""
    _check_masses(m, n)
    return (cdf(m) - cdf(n)).l1_norm()


def wasserstein(m: Measure1D, n: Measure1D, p: float=1.0, method: str="auto"):
    """Returns W_p(m, n) under the normalization convention for masses other than 1.

    For p = 1 the quantile route is checked against the distribution-function route.

    Raises:
        MassMismatchError: If the masses differ beyond round-off.
        CrossCheckError: If the two W_1 routes disagree beyond 1e-9.
    """
    p = float(p)
    cost = transport_cost(m, n, p, method=method)
    total = m.total_mass
    distance = total * (cost / total) ** (1.0 / p)

    if p == 1.0:
        other = w1_cdf(m, n)
        if abs(distance - other) > CROSS_CHECK_TOL * max(1.0, distance):
            raise CrossCheckError(f"W_1 routes disagree: quantile {distance!r} vs distribution {other!r}")

    return distance


def monotone_plan(m: Measure1D, n: Measure1D, rs):
    """Samples the monotone plan support at levels rs: pairs (Q_m(r), Q_n(r)).

    Levels are sorted and deduplicated.

    Raises:
        DomainError: If a level lies outside (0, total mass].
    """
    Qm, Qn, total = _aligned_quantiles(m, n)
    rs = np.unique(np.asarray(rs, dtype=float))
    if rs.size == 0:
        raise InputError("A plan sample needs at least one level")
    if rs[0] <= 0 or rs[-1] > total:
        raise DomainError(f"Plan levels must lie in (0, {total!r}]")

    return PlanSample(rs=rs, xs=Qm(rs), ys=Qn(rs))


def as_piecewise_linear(psi):
    """Turns a grid potential into its continuous interpolant; passes other functions through."""
    if isinstance(psi, GridPotential):
        return PiecewiseLinear.from_points(psi.grid, psi.values)
    if isinstance(psi, PiecewiseLinear):
        return psi
    raise InputError(f"Unsupported potential type: {type(psi).__name__}")


def check_lipschitz(psi: PiecewiseLinear, constant: float=1.0):
    """Raises LipschitzError unless psi is continuous with all slopes in [-constant, constant]."""
    scale = max(1.0, psi.sup_norm())
    if not psi.is_continuous(tol=LIPSCHITZ_TOL * scale):
        raise LipschitzError("The potential has a jump")

    slopes = np.concatenate((psi.slopes(), [psi.left_slope, psi.right_slope]))
    worst = float(np.max(np.abs(slopes)))
    if worst > constant * (1.0 + LIPSCHITZ_TOL):
        raise LipschitzError(f"The potential has slope {worst!r} beyond {constant}")


def dual_lower_bound_w1(m: Measure1D, n: Measure1D, psi):
    """Returns int psi dn - int psi dm for a 1-Lipschitz psi, a lower bound on W_1(m, n).

    Args:
        psi (GridPotential|PiecewiseLinear): The potential; grid values are interpolated linearly.

    Raises:
        LipschitzError: If psi is not 1-Lipschitz.
        MassMismatchError: If the masses differ beyond round-off.
    """
    psi = as_piecewise_linear(psi)
    check_lipschitz(psi)
    _check_masses(m, n)

    return integrate_psi(n, psi) - integrate_psi(m, psi)


def _cost_table(phi: GridPotential):
    """|k step|^p for every integer offset k on the grid, shared by both c-transform routes."""
    return (np.arange(len(phi)) * phi.step) ** phi.p


def _c_transform_reference(phi: GridPotential):
    values = phi.values
    table = _cost_table(phi)
    count = values.size
    index = np.arange(count)
    out = np.empty(count)

    for lo in range(0, count, REFERENCE_CHUNK):
        rows = index[lo:lo + REFERENCE_CHUNK]
        offsets = np.abs(rows[:, None] - index[None, :])
        out[lo:lo + REFERENCE_CHUNK] = np.min(values[None, :] + table[offsets], axis=1)

    return out


def _best_of(values, table, candidates):
    """Minimum over candidate source indices per target, evaluated like the reference."""
    index = np.arange(values.size)
    scores = [values[c] + table[np.abs(c - index)] for c in candidates]
    return np.min(np.vstack(scores), axis=0)


def _c_transform_linear(phi: GridPotential):
    """p = 1: prefix minima of f_i - i step and suffix minima of f_i + i step."""
    values = phi.values
    index = np.arange(values.size)
    step = phi.step

    def running_argmin(keys):
        running = np.minimum.accumulate(keys)
        return np.maximum.accumulate(np.where(keys == running, index, 0))

    from_left = running_argmin(values - index * step)
    from_right = values.size - 1 - running_argmin((values + index * step)[::-1])[::-1]

    return _best_of(values, _cost_table(phi), [from_left, from_right])


def _c_transform_parabolic(phi: GridPotential):
    """p = 2: lower envelope of the parabolas f_i + ((i - j) step)^2."""
    values = phi.values
    count = values.size
    g = values / (phi.step * phi.step)

    roots = np.zeros(count, dtype=np.int64)
    bounds = np.empty(count + 1)
    k = 0
    bounds[0], bounds[1] = -np.inf, np.inf
    for q in range(1, count):
        while True:
            v = roots[k]
            s = ((g[q] + q * q) - (g[v] + v * v)) / (2.0 * (q - v))
            if s <= bounds[k] and k > 0:
                k -= 1
                continue
            break
        k += 1
        roots[k] = q
        bounds[k] = s
        bounds[k + 1] = np.inf

    roots = roots[:k + 1]
    region = np.searchsorted(bounds[1:k + 1], np.arange(count), side="left")
    candidates = [roots[np.clip(region + shift, 0, k)] for shift in (-1, 0, 1)]

    return _best_of(values, _cost_table(phi), candidates)


def c_transform(phi: GridPotential, method: str="auto"):
    """Returns phi^c(y_j) = min_i phi(x_i) + |x_i - y_j|^p on the same grid.

    Args:
        method (str): "reference" for the O(N^2) scan, "fast" for the O(N) envelope routes
            (p in {1, 2} only), "auto" to pick the fast route when available.
    """
    if method not in ("auto", "fast", "reference"):
        raise InputError(f"Unknown c-transform method: {method}")

    fast = phi.p in (1.0, 2.0)
    if method == "fast" and not fast:
        raise InputError(f"No fast c-transform route for p={phi.p}")

    if method == "reference" or not fast:
        values = _c_transform_reference(phi)
    elif phi.p == 1.0:
        values = _c_transform_linear(phi)
    else:
        values = _c_transform_parabolic(phi)

    return phi.with_values(values)


def double_c_transform(phi: GridPotential, method: str="auto"):
    """Returns the c-transform applied twice."""
    return c_transform(c_transform(phi, method=method), method=method)


def kappa(gamma: float, p: float):
    """Separation ratio (2 gamma - 1)^(1/p)."""
    return (2.0 * gamma - 1.0) ** (1.0 / p)


def separation_certificate(gamma: float, h: float, p: float):
    """Porosity scale and ratio implied by the coarse separation.

    Points of a coarse porous set inside the open ball of radius s = h (1 + kappa) around one
    of its points lie within tau s = h (1 - kappa), so its porosity index at scale s is at most
    tau = (1 - kappa) / (1 + kappa).

    Returns:
        tuple[float, float]: (s, tau).
    """
    _check_gamma(gamma)
    k = kappa(gamma, p)
    return h * (1.0 + k), (1.0 - k) / (1.0 + k)


def _check_gamma(gamma: float):
    if not 0.5 < gamma <= 1.0:
        raise InputError(f"gamma must lie in (1/2, 1], got {gamma}")


def coarse_porous_set(phi: GridPotential, gamma: float, h: float):
    """Returns the grid points where (1/2 [phi^c(x - h) + phi^c(x + h)] - phi(x)) / h^p >= gamma.

    h is snapped to the nearest positive multiple of the grid step. The returned set is
    checked against its separation dichotomy: no two points lie at a distance strictly between
    h (1 - kappa) and h (1 + kappa).

    Raises:
        GridTooNarrowError: If the grid cannot be shifted by h in both directions.
        SeparationError: If the computed set violates the dichotomy.
    """
    _check_gamma(gamma)
    if not h > 0:
        raise InputError(f"h must be positive, got {h}")

    shift = int(round(h / phi.step))
    if shift < 1:
        raise GridTooNarrowError(f"h={h!r} is below the grid step {phi.step!r}")
    if len(phi) <= 2 * shift:
        raise GridTooNarrowError(f"A grid of {len(phi)} points cannot be shifted by {shift} steps both ways")

    h_grid = shift * phi.step
    phic = c_transform(phi).values
    inner = np.arange(shift, len(phi) - shift)
    quotient = (0.5 * (phic[inner - shift] + phic[inner + shift]) - phi.values[inner]) / h_grid ** phi.p

    points = phi.grid[inner[quotient >= gamma]]
    _check_separation(points, gamma, h_grid, phi.p)
    logger.debug("Coarse porous set: %d of %d points at gamma=%r, h=%r", points.size, inner.size, gamma, h_grid)
    return points


def _check_separation(points: np.ndarray, gamma: float, h: float, p: float):
    k = kappa(gamma, p)
    tol = 1e-9 * h
    lo, hi = h * (1.0 - k) + tol, h * (1.0 + k) - tol
    if points.size < 2 or hi <= lo:
        return

    start = np.searchsorted(points, points + lo, side="right")
    stop = np.searchsorted(points, points + hi, side="left")
    bad = np.flatnonzero(stop > start)
    if bad.size:
        x = points[bad[0]]
        y = points[start[bad[0]]]
        raise SeparationError(
            f"Points {x!r} and {y!r} are {y - x!r} apart, inside ({h * (1 - k)!r}, {h * (1 + k)!r})")


def _segment_density_at(m: Measure1D, xs: np.ndarray):
    j = np.searchsorted(m.seg_left, xs, side="right") - 1
    jc = np.clip(j, 0, max(m.seg_left.size - 1, 0))
    if m.seg_left.size == 0:
        return np.zeros_like(xs)
    inside = (j >= 0) & (xs < m.seg_right[jc])
    return np.where(inside, m.seg_density[jc], 0.0)


def check_submeasure(alpha: Measure1D, mu: Measure1D, tol: float=1e-12):
    """Raises SubmeasureError unless alpha <= mu, atoms and densities alike."""
    if alpha.atom_x.size:
        k = np.searchsorted(mu.atom_x, alpha.atom_x)
        kc = np.clip(k, 0, max(mu.atom_x.size - 1, 0))
        present = (k < mu.atom_x.size) & (mu.atom_x[kc] == alpha.atom_x) if mu.atom_x.size else np.zeros(alpha.atom_x.size, bool)
        if not np.all(present):
            raise SubmeasureError(f"Atom at {alpha.atom_x[~present][0]!r} is not an atom of the dominating measure")
        limit = mu.atom_mass[kc] * (1.0 + tol) + tol
        if np.any(alpha.atom_mass > limit):
            bad = int(np.argmax(alpha.atom_mass - limit))
            raise SubmeasureError(f"Atom at {alpha.atom_x[bad]!r} exceeds the dominating mass")

    if alpha.seg_left.size:
        cuts = np.union1d(np.concatenate((alpha.seg_left, alpha.seg_right)), np.concatenate((mu.seg_left, mu.seg_right)))
        mids = 0.5 * (cuts[:-1] + cuts[1:])
        mine = _segment_density_at(alpha, mids)
        theirs = _segment_density_at(mu, mids)
        bad = mine > theirs * (1.0 + tol) + tol
        if np.any(bad):
            raise SubmeasureError(f"Density exceeds the dominating density near x={mids[bad][0]!r}")


def submeasure_distance_bound(mu: Measure1D, alpha: Measure1D, beta: Measure1D, p: float=1.0):
    """Returns the plan cost W_p^p(alpha, beta) and its bound eps (diam K)^p.

    eps = mu(R) - alpha(R) and K is the support hull of mu.

    Raises:
        SubmeasureError: If alpha or beta is not below mu.
        MassMismatchError: If alpha and beta carry different masses.
        BoundViolationError: If the computed cost exceeds the bound.
    """
    check_submeasure(alpha, mu)
    check_submeasure(beta, mu)
    _check_masses(alpha, beta)

    eps = max(mu.total_mass - alpha.total_mass, 0.0)
    lo, hi = mu.support_hull()
    bound = eps * (hi - lo) ** p
    w = transport_cost(alpha, beta, p)

    if w > bound + CROSS_CHECK_TOL:
        raise BoundViolationError(f"Submeasure cost {w!r} exceeds the bound {bound!r}")

    return w, bound
