"""
The acceptance suite run by the `verify` command.

Each criterion returns (passed, margin, details); the margin is the smallest slack over
all of its checks, negative when a check fails. Criteria draw random inputs from streams
named after themselves, so any one of them reproduces on its own.

Methods:
    - run_suite(names, seed) -> list[CriterionResult]
    - suite_report(results, seed) -> dict
"""



import logging
import math
import time

from concurrent.futures import ThreadPoolExecutor, as_completed

import numpy as np

from .cantor import cantor_measure, layer_fn
from .errors import InputError, LabError
from .measure1d import cdf, quantile
from .models import CantorSpec, CriterionResult, GridPotential, IntervalSet, Measure1D, MeasureField
from .porosity import distance_potential
from .rates import cantor_scan, p_ordering_check, shift_superpose
from .settings import get_settings
from .tangent_field import barycenter, center, exp_map, inner, norm
from .transport import coarse_porous_set, kappa, monotone_plan, submeasure_distance_bound, wasserstein
from .utils import SeedUtils
from .utils.sampling import Sampling



logger = logging.getLogger(__name__)

CRITERIA = {}

MONTE_CARLO_SAMPLES = 10_000_000
MONTE_CARLO_CHUNK = 1_000_000


def criterion(name: str):
    """Registers the decorated function as the acceptance criterion `name`."""
    def register(fn):
        CRITERIA[name] = fn
        return fn
    return register


@criterion("dirac")
def dirac_exactness(seed: int):
    worst = 0.0
    for p in (1.0, 2.0, 3.0):
        for h in (0.25, 1e-3):
            delta = Measure1D.dirac(0.0)
            worst = max(worst, abs(wasserstein(delta, shift_superpose(delta, h), p) - h))

    return worst <= 1e-12, 1e-12 - worst, {"max_error": worst}


def _monte_carlo_w1(m: Measure1D, h: float, rng: np.random.Generator):
    """Estimates the integral of |F_{m_h} - F_m| by sampling where the two can differ."""
    F, Fh = cdf(m), cdf(shift_superpose(m, h))
    region = IntervalSet.from_intervals([(b - h, b + h) for b in F.xs.tolist()])
    lengths = region.lengths
    total = 0.0

    for start in range(0, MONTE_CARLO_SAMPLES, MONTE_CARLO_CHUNK):
        size = min(MONTE_CARLO_CHUNK, MONTE_CARLO_SAMPLES - start)
        k = rng.choice(len(region), size=size, p=lengths / lengths.sum())
        xs = region.left[k] + rng.random(size) * lengths[k]
        total += float(np.sum(np.abs(Fh(xs) - F(xs))))

    return region.total_length * total / MONTE_CARLO_SAMPLES


@criterion("uniform-decay")
def uniform_decay(seed: int):
    rng = SeedUtils.seed_rng("uniform-decay", seed)
    m = Measure1D.uniform(0.0, 1.0)
    margin, details = math.inf, {}

    for h in (0.1, 0.01, 0.001):
        w = wasserstein(m, shift_superpose(m, h), 1.0)
        relative = abs(w - h * h) / (h * h)
        estimate = _monte_carlo_w1(m, h, rng)
        sampled = abs(estimate - w) / w

        margin = min(margin, 1e-12 - relative, 1e-3 - sampled)
        details[f"h={h:g}"] = {"w1": w, "relative_error": relative, "monte_carlo": estimate, "monte_carlo_error": sampled}

    return margin >= 0, margin, details


@criterion("p-ordering")
def p_ordering(seed: int):
    rng = SeedUtils.seed_rng("p-ordering", seed)
    margin = math.inf
    for _ in range(200):
        m = Sampling.random_measure(rng)
        for h in (1e-1, 1e-3):
            report = p_ordering_check(m, h, (1.0, 1.5, 2.0, 3.0), strict=False)
            margin = min(margin, report.worst_margin + 1e-9)

    return margin >= 0, margin, {"measures": 200}


@criterion("plan-support")
def plan_support(seed: int):
    rng = SeedUtils.seed_rng("plan-support", seed)
    margin, samples = math.inf, 0

    for _ in range(50):
        radius = float(rng.uniform(0.1, 2.0))
        mu = Sampling.random_atomic(rng, int(rng.integers(1, 8)))
        target = exp_map(Sampling.random_field(rng, mu, radius), 1.0)

        ## Sample inside every piece of the common refinement, away from its ends.
        levels = np.union1d(quantile(mu).xs, quantile(target).xs)
        levels = levels[levels <= mu.total_mass]
        ends = np.concatenate(([0.0], levels))
        long = np.diff(ends) > 1e-12 * mu.total_mass
        rs = 0.5 * (ends[:-1] + ends[1:])[long]

        plan = monotone_plan(mu, target, rs)
        samples += len(plan)
        margin = min(margin, radius + 1e-12 - float(plan.displacement.max()))

    return margin >= 0, margin, {"fields": 50, "samples": samples}


@criterion("cantor-fail")
def cantor_fail(seed: int):
    spec = CantorSpec.constant(1 / 3, depth=14)
    floor = math.ldexp(1.0, -7)
    margin, rows = math.inf, []

    for n, _, sample in cantor_scan(spec, range(2, 9), 1.0, regime="fail"):
        slack = sample.quotient - (floor - sample.truncation_error_bound / sample.h)
        margin = min(margin, slack)
        rows.append({"n": n, "h": sample.h, "quotient": sample.quotient})

    return margin >= 0, margin, {"rows": rows}


@criterion("cantor-band")
def cantor_band(seed: int):
    spec = CantorSpec.harmonic(2.0, depth=18)
    margin, rows = math.inf, {}

    for n, _, sample in cantor_scan(spec, range(3, 11), 1.0, regime="band"):
        ceiling = 20.0 * math.sqrt(spec.alpha(n)) + sample.truncation_error_bound / sample.h
        margin = min(margin, ceiling - sample.quotient)
        rows[n] = sample.quotient

    margin = min(margin, rows[3] - rows[10])
    details = {
        "quotients": {str(n): q for n, q in rows.items()},
        "decreasing": rows[10] < rows[3],
        "halving_met": rows[10] < rows[3] / 2}
    return margin > 0, margin, details


@criterion("submeasure")
def submeasure(seed: int):
    rng = SeedUtils.seed_rng("submeasure", seed)
    margin = math.inf
    for _ in range(100):
        mu, alpha, beta = Sampling.random_submeasures(rng)
        for p in (1.0, 2.0):
            w, bound = submeasure_distance_bound(mu, alpha, beta, p)
            margin = min(margin, bound + 1e-9 - w)

    return margin >= 0, margin, {"triples": 100}


def _separation_margin(points: np.ndarray, gamma: float, h: float, p: float):
    if points.size < 2:
        return math.inf
    k = kappa(gamma, p)
    gaps = np.abs(points[:, None] - points[None, :])[np.triu_indices(points.size, 1)]
    return float(np.min(np.maximum(h * (1 - k) - gaps, gaps - h * (1 + k)))) + 1e-9 * h


@criterion("coarse-porous")
def coarse_porous(seed: int):
    rng = SeedUtils.seed_rng("coarse-porous", seed)
    corners = [distance_potential([0.0]), distance_potential(IntervalSet.from_intervals([(0, 1 / 27), (2 / 27, 1 / 9)]))]

    potentials = []
    for p in (1.0, 2.0):
        potentials += [Sampling.random_potential(rng, p=p) for _ in range(50)]
        potentials += [GridPotential.from_function(psi, -1.0, 1.0, 0.01, p=p) for psi in corners]

    margin, points = math.inf, 0
    for phi in potentials:
        for gamma in (0.6, 0.9):
            h = 5 * phi.step
            S = coarse_porous_set(phi, gamma, h)
            points += S.size
            margin = min(margin, _separation_margin(S, gamma, h, phi.p))

    return margin >= 0, margin, {"potentials": len(potentials), "points": points}


@criterion("field-identities")
def field_identities(seed: int):
    rng = SeedUtils.seed_rng("field-identities", seed)
    worst_orthogonal = worst_norm = 0.0
    exact = True

    for _ in range(100):
        mu = Sampling.random_atomic(rng, int(rng.integers(1, 10)))
        zeta = Sampling.random_field(rng, mu, float(rng.uniform(0.1, 3.0)))
        b = barycenter(zeta)

        worst_orthogonal = max(worst_orthogonal, abs(inner(center(zeta), MeasureField.map_field(mu, b))))
        decomposition = norm(zeta) ** 2 - norm(center(zeta)) ** 2 - float(np.sum(zeta.weights * b ** 2))
        worst_norm = max(worst_norm, abs(decomposition))

        h = float(rng.uniform(1e-3, 0.5))
        exact = exact and exp_map(MeasureField.unit_symmetric(mu), h).equals(shift_superpose(mu, h), tol=0.0)

    margin = min(1e-12 - worst_orthogonal, 1e-12 - worst_norm)
    details = {"orthogonality": worst_orthogonal, "norm_decomposition": worst_norm, "exp_matches_shift": exact}
    return margin >= 0 and exact, margin, details


@criterion("layer-series")
def layer_series(seed: int):
    spec = CantorSpec.constant(1 / 3, depth=8)
    xs = np.linspace(-0.05, 1.05, 1000)

    series = cdf(cantor_measure(spec, 0))(xs)
    sup_exact = True
    for n in range(8):
        f = layer_fn(spec, n)
        series = series + f(xs)
        sup_exact = sup_exact and bool(f.sup_norm() == math.ldexp(spec.alpha(n), -(n + 1)))

    worst = float(np.max(np.abs(series - cdf(cantor_measure(spec, 8))(xs))))
    return worst <= 1e-12 and sup_exact, 1e-12 - worst, {"max_error": worst, "sup_norms_exact": sup_exact}


def _run_one(name: str, seed: int):
    started = time.perf_counter()
    try:
        passed, margin, details = CRITERIA[name](seed)
        error = None
    except LabError as e:
        passed, margin, details, error = False, -math.inf, {}, f"{type(e).__name__}: {e}"
    runtime = time.perf_counter() - started

    logger.info("Criterion %s: %s in %.3fs", name, "pass" if passed else "FAIL", runtime)
    return CriterionResult(name=name, passed=bool(passed), margin=float(margin), details=details, runtime_s=runtime, error=error)


def run_suite(names=None, seed: int=0):
    """Runs the named criteria (all by default) and returns their results in suite order.

    Raises:
        InputError: If a name is not a known criterion.
    """
    names = list(CRITERIA) if not names else list(names)
    unknown = [name for name in names if name not in CRITERIA]
    if unknown:
        raise InputError(f"Unknown criteria: {', '.join(unknown)}; known: {', '.join(CRITERIA)}")

    results = [None] * len(names)
    with ThreadPoolExecutor(max_workers=get_settings().threads) as executor:
        futures = {executor.submit(_run_one, name, seed): i for i, name in enumerate(names)}
        for future in as_completed(futures):
            results[futures[future]] = future.result()

    return results


def suite_report(results, seed: int=0):
    """The machine-readable verify report; margins that are not finite become null."""
    criteria = []
    for result in results:
        entry = result.to_dict()
        if not math.isfinite(entry["margin"]):
            entry["margin"] = None
        criteria.append(entry)

    return {
        "passed": all(result.passed for result in results),
        "seed": seed,
        "failed": [result.name for result in results if not result.passed],
        "criteria": criteria}
