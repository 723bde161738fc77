"""
Measure fields over atomic bases: exponential map, barycenters, the fiberwise metric W_mu
and the operations built from them.

Distances between a base measure and its exponential images use the raw plan cost, so
W(mu, exp(h xi))^2 is compared directly with h^2 ||xi||^2 = h^2 sum_i w_i sum_j p_ij v_ij^2.

Methods:
    - exp_map(xi, h) -> Measure1D
    - barycenter(xi) -> np.ndarray
    - center(xi) -> MeasureField
    - norm(xi) -> float
    - w_mu(xi, zeta) -> float
    - inner(xi, zeta) -> float
    - scale / restrict_field / truncate_symmetric -> MeasureField
    - limsup_condition_check(xi, hs) -> list[FieldRateRow]
    - removebary_check(zeta, hs) -> list[RemoveBaryRow]
    - cantor_field_witness(spec, n, hs) -> dict
"""



import logging
import math

from concurrent.futures import ThreadPoolExecutor, as_completed

import numpy as np

from .cantor import midpoint_atoms, truncation_bound
from .errors import BaseMismatchError, BoundViolationError, EmptyMeasureError, InputError, NotSymmetricFieldError
from .models import CantorSpec, FieldRateRow, IntervalSet, Measure1D, MeasureField, RemoveBaryRow
from .settings import get_settings
from .transport import transport_cost



logger = logging.getLogger(__name__)

RATE_TOL = 1e-9
REMOVEBARY_TOL = 1e-6
SYMMETRY_TOL = 1e-12


def exp_map(xi: MeasureField, h: float):
    """Returns exp(h xi) = sum_i sum_j w_i p_ij delta_{x_i + h v_ij}, atoms merged."""
    h = float(h)
    if h == 0:
        return xi.base()

    positions = xi.base_x[xi.owner] + h * xi.velocities
    masses = xi.weights[xi.owner] * xi.probs
    return Measure1D.canonical(positions, masses)


def barycenter(xi: MeasureField):
    """Mean velocity of every fiber."""
    return np.add.reduceat(xi.probs * xi.velocities, xi.offsets[:-1])


def center(xi: MeasureField):
    """Translates every fiber by minus its barycenter."""
    b = barycenter(xi)
    return xi.with_velocities(xi.velocities - b[xi.owner])


def norm(xi: MeasureField):
    """||xi||_mu = W_mu(xi, (id, 0)_# mu)."""
    second = np.add.reduceat(xi.probs * xi.velocities ** 2, xi.offsets[:-1])
    return math.sqrt(float(np.sum(xi.weights * second)))


def _fiber_cost(va, pa, vb, pb):
    """W_2^2 between two finite velocity distributions via their quantile functions."""
    ca = np.cumsum(pa)
    cb = np.cumsum(pb)
    ca /= ca[-1]
    cb /= cb[-1]

    levels = np.union1d(ca, cb)
    widths = np.diff(np.concatenate(([0.0], levels)))
    ia = np.minimum(np.searchsorted(ca, levels, side="left"), va.size - 1)
    ib = np.minimum(np.searchsorted(cb, levels, side="left"), vb.size - 1)

    return float(np.sum(widths * (va[ia] - vb[ib]) ** 2))


def _check_base(xi: MeasureField, zeta: MeasureField):
    if not xi.same_base(zeta):
        raise BaseMismatchError(f"{xi} and {zeta} do not share a base measure")


def w_mu(xi: MeasureField, zeta: MeasureField):
    """Returns W_mu(xi, zeta) = sqrt(sum_i w_i W_2^2(xi_i, zeta_i)).

    Raises:
        BaseMismatchError: If the fields live over different bases.
    """
    _check_base(xi, zeta)
    total = 0.0
    for i, w in enumerate(xi.weights.tolist()):
        total += w * _fiber_cost(*xi.fiber(i), *zeta.fiber(i))

    return math.sqrt(total)


def inner(xi: MeasureField, zeta: MeasureField):
    """Metric scalar product 1/2 (||xi||^2 + ||zeta||^2 - W_mu^2(xi, zeta))."""
    distance = w_mu(xi, zeta)
    return 0.5 * (norm(xi) ** 2 + norm(zeta) ** 2 - distance ** 2)


def scale(xi: MeasureField, factor: float):
    """Returns (pi_x, factor pi_v)_# xi for factor >= 0."""
    if not factor >= 0:
        raise InputError(f"Scale factor must be nonnegative, got {factor}")
    return xi.with_velocities(factor * xi.velocities)


def restrict_field(xi: MeasureField, A: IntervalSet):
    """Drops the base points outside A and keeps the weights of the others.

    Raises:
        EmptyMeasureError: If no base point lies in A.
    """
    keep = A.contains(xi.base_x)
    if not np.any(keep):
        raise EmptyMeasureError(f"No base point of {xi} lies in {A}")

    fibers = []
    for i in np.flatnonzero(keep):
        v, p = xi.fiber(i)
        fibers.append(list(zip(v.tolist(), p.tolist())))

    return MeasureField.from_fibers(xi.base_x[keep], xi.weights[keep], fibers)


def symmetric_profile(xi: MeasureField):
    """Returns f >= 0 with xi = 1/2 [(id, -f) + (id, f)]_# mu.

    Raises:
        NotSymmetricFieldError: If some fiber is neither delta_0 nor 1/2 (delta_{-f} + delta_f).
    """
    f = np.empty(len(xi))
    for i in range(len(xi)):
        v, p = xi.fiber(i)
        if v.size == 1 and v[0] == 0.0:
            f[i] = 0.0
        elif (v.size == 2 and abs(v[0] + v[1]) <= SYMMETRY_TOL * max(1.0, abs(v[1]))
                and np.all(np.abs(p - 0.5) <= SYMMETRY_TOL)):
            f[i] = v[1]
        else:
            raise NotSymmetricFieldError(f"Fiber at x={xi.base_x[i]!r} is not symmetric")

    return f


def truncate_symmetric(xi: MeasureField, R: float):
    """Replaces f by min(f, R) in a symmetric field."""
    if not R > 0:
        raise InputError(f"Truncation radius must be positive, got {R}")
    f = symmetric_profile(xi)
    return MeasureField.symmetric(xi.base(), np.minimum(f, R))


def _per_scale(fn, hs):
    hs = [float(h) for h in hs]
    if not hs or any(not h > 0 for h in hs):
        raise InputError("Scales must be a nonempty list of positive values")

    rows = [None] * len(hs)
    with ThreadPoolExecutor(max_workers=get_settings().threads) as executor:
        futures = {executor.submit(fn, h): i for i, h in enumerate(hs)}
        for future in as_completed(futures):
            rows[futures[future]] = future.result()

    return rows


def limsup_condition_check(xi: MeasureField, hs):
    """Measures q(h) = W_2(mu, exp(h xi)) / h against ||xi||_mu.

    Raises:
        BoundViolationError: If some q(h) exceeds ||xi||_mu, which the coupling
            (x, x + h v) forbids.
    """
    base = xi.base()
    target = norm(xi)

    def evaluate(h):
        q = math.sqrt(transport_cost(base, exp_map(xi, h), 2.0)) / h
        if q > target + RATE_TOL:
            raise BoundViolationError(f"Field quotient {q!r} exceeds the norm {target!r} at h={h!r}")
        return FieldRateRow(h=h, quotient=q, target=target, deficit=target - q)

    return _per_scale(evaluate, hs)


def removebary_check(zeta: MeasureField, hs):
    """Compares W^2(mu, exp(h zeta)) / h^2 with W^2(mu, exp(h zeta^0)) / h^2 + ||b||^2.

    Raises:
        BoundViolationError: If the inequality fails by more than 1e-6 at the smallest h.
    """
    base = zeta.base()
    b = barycenter(zeta)
    centered = center(zeta)
    drift = float(np.sum(zeta.weights * b ** 2))

    def evaluate(h):
        lhs = transport_cost(base, exp_map(zeta, h), 2.0) / h ** 2
        rhs = transport_cost(base, exp_map(centered, h), 2.0) / h ** 2 + drift
        return RemoveBaryRow(h=h, lhs=lhs, rhs=rhs, margin=rhs - lhs)

    rows = _per_scale(evaluate, hs)
    smallest = min(rows, key=lambda row: row.h)
    if smallest.margin < -REMOVEBARY_TOL:
        raise BoundViolationError(
            f"Barycenter removal fails at h={smallest.h!r}: {smallest.lhs!r} > {smallest.rhs!r}")

    return rows


def cantor_field_witness(spec: CantorSpec, n: int, hs):
    """Unit symmetric field over the midpoint atoms of C^n.

    Below half the smallest atom gap the quotient equals the field norm, which is 1.

    Returns:
        dict: rows, norm, min_gap and the W_1 discretization bound delta_n.
    """
    mu = midpoint_atoms(spec, n)
    xi = MeasureField.unit_symmetric(mu)
    gaps = np.diff(mu.atom_x)

    logger.info("Field witness over %d atoms of generation %d", len(xi), n)
    return {
        "rows": limsup_condition_check(xi, hs),
        "norm": norm(xi),
        "min_gap": float(gaps.min()) if gaps.size else math.inf,
        "discretization_bound": truncation_bound(spec, n)}
