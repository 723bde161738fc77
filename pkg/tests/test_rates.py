import math

import numpy as np
import pytest

from hypothesis import given, strategies as st

from conftest import measures
from core.errors import BoundViolationError, InputError
from core.models import CantorSpec, Measure1D, RateSample
from core.rates import (
    cantor_scan,
    cdf_second_difference,
    check_second_difference,
    geometric_grid,
    p_ordering_check,
    rate_quotient,
    rate_scan,
    scan_summary,
    shift_superpose)
from core.utils import SeedUtils
from core.utils.sampling import Sampling



def test_shift_superpose_of_dirac():
    assert shift_superpose(Measure1D.dirac(1.0), 0.5).equals(Measure1D.from_atoms([0.5, 1.5], [0.5, 0.5]))


def test_zero_shift_returns_the_measure():
    m = Measure1D.uniform(0.0, 1.0)

    assert shift_superpose(m, 0.0) is m


def test_negative_shift_is_rejected():
    with pytest.raises(InputError):
        shift_superpose(Measure1D.dirac(0.0), -0.1)


@pytest.mark.parametrize("p", [1.0, 2.0, 3.0])
@pytest.mark.parametrize("h", [0.5, 1e-3, 1e-6])
def test_dirac_moves_at_full_speed(p, h):
    assert rate_quotient(Measure1D.dirac(0.0), h, p).quotient == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("h", [0.1, 0.01, 0.001])
def test_uniform_quotient_decays_linearly(h):
    sample = rate_quotient(Measure1D.uniform(0.0, 1.0), h, 1.0)

    assert sample.distance == pytest.approx(h * h, rel=1e-12)
    assert sample.quotient == pytest.approx(h, rel=1e-12)


def test_quotient_above_the_coupling_bound_is_rejected():
    with pytest.raises(BoundViolationError):
        RateSample(h=0.1, p=1.0, distance=0.2, quotient=2.0)


def test_truncation_relaxes_the_coupling_bound():
    sample = RateSample(h=0.1, p=1.0, distance=0.105, quotient=1.05, truncation_error_bound=0.01)

    assert sample.to_row()["trunc_bound"] == 0.01


@given(measures(), st.sampled_from([1.0, 1.5, 2.0, 3.0]), st.floats(min_value=1e-4, max_value=1.0))
def test_quotient_never_exceeds_one(m, p, h):
    assert rate_quotient(m, h, p).quotient <= 1.0 + 1e-9


def test_rate_scan_keeps_the_input_order():
    hs = [0.1, 0.4, 0.2]
    samples = rate_scan(Measure1D.uniform(0.0, 1.0), hs, 1.0, threads=2)

    assert [s.h for s in samples] == hs
    assert [s.quotient for s in samples] == pytest.approx([0.1, 0.4, 0.2], rel=1e-12)


def test_rate_scan_accepts_one_bound_per_scale():
    samples = rate_scan(Measure1D.dirac(0.0), [0.1, 0.2], truncation=[0.0, 0.5])

    assert [s.truncation_error_bound for s in samples] == [0.0, 0.5]


@pytest.mark.parametrize("hs, truncation", [([], 0.0), ([0.1, 0.0], 0.0), ([0.1, 0.2], [0.0])])
def test_rate_scan_rejects_bad_input(hs, truncation):
    with pytest.raises(InputError):
        rate_scan(Measure1D.dirac(0.0), hs, truncation=truncation)


def test_p_ordering_holds_on_random_measures():
    rng = SeedUtils.seed_rng("p-ordering-tests", 0)
    for _ in range(25):
        m = Sampling.random_measure(rng)
        report = p_ordering_check(m, 0.05, (1.0, 1.5, 2.0, 3.0))

        assert report.ok
        assert [row.p for row in report.rows] == [1.0, 1.5, 2.0, 3.0]


def test_p_ordering_normalizes_heavier_measures():
    report = p_ordering_check(Measure1D.uniform(0.0, 1.0, mass=3.0), 0.1, (2.0, 1.0))

    assert report.w1_quotient == pytest.approx(0.1, rel=1e-12)
    assert report.worst_margin >= -1e-9


def test_default_grid_halves_down_to_the_floor():
    grid = geometric_grid()

    assert len(grid) == 17
    assert grid[0] == 0.1
    assert grid[-1] == 0.1 / 65536
    assert all(b == a / 2 for a, b in zip(grid, grid[1:]))


def test_counted_grid_includes_both_ends():
    grid = geometric_grid(1e-3, 1e-1, count=3)

    assert grid == pytest.approx([1e-1, 1e-2, 1e-3], rel=1e-12)
    assert geometric_grid(1e-3, 1e-1, count=1) == [1e-1]


@pytest.mark.parametrize("h_min, h_max, count", [(0.0, 1.0, None), (1.0, 0.5, None), (0.1, 1.0, 0)])
def test_grid_rejects_bad_bounds(h_min, h_max, count):
    with pytest.raises(InputError):
        geometric_grid(h_min, h_max, count)


def test_second_difference_of_dirac():
    g = cdf_second_difference(Measure1D.dirac(0.0), 0.5)

    assert g(-0.25) == pytest.approx(1.0)
    assert g(0.25) == pytest.approx(-1.0)
    assert g(-0.75) == 0.0
    assert g.l1_norm() == pytest.approx(1.0)


@pytest.mark.parametrize("x0", [0.0, 0.1, 0.3, 1e-9, -0.7])
def test_second_difference_keeps_atoms_off_the_grid(x0):
    g = cdf_second_difference(Measure1D.dirac(x0), 0.25)

    assert g.l1_norm() == pytest.approx(1.0, rel=1e-12)
    assert check_second_difference(Measure1D.dirac(x0), 0.25) == pytest.approx(1.0)


@pytest.mark.parametrize("m", [
    Measure1D.from_atoms([0.3, 0.8], [0.5, 0.5]),
    Measure1D.from_atoms([0.0, 1e-17], [0.5, 0.5]),
    Measure1D.canonical([1e-9], [0.5], [0.3], [1.3], [0.5])])
def test_second_difference_with_nearly_coincident_breakpoints(m):
    g = cdf_second_difference(m, 0.25)

    assert g.l1_norm() == pytest.approx(rate_quotient(m, 0.25, 1.0).quotient, rel=1e-9)


@given(measures(), st.floats(min_value=1e-3, max_value=0.5))
def test_second_difference_matches_the_quotient(m, h):
    assert check_second_difference(m, h) == pytest.approx(cdf_second_difference(m, h).l1_norm(), rel=1e-9, abs=1e-12)


def test_triadic_fail_probes_stay_bounded_below():
    spec = CantorSpec.constant(1 / 3, depth=10)
    rows = cantor_scan(spec, range(2, 6), 1.0)

    assert [regime for _, regime, _ in rows] == ["fail"] * 4
    for n, _, sample in rows:
        assert sample.truncation_error_bound == pytest.approx(2 * spec.delta(10))
        assert sample.quotient >= math.ldexp(1.0, -7) - sample.truncation_error_bound / sample.h


def test_harmonic_scan_uses_band_probes():
    spec = CantorSpec.harmonic(2.0, depth=10)
    rows = cantor_scan(spec, range(2, 5), 1.0)

    assert {regime for _, regime, _ in rows} == {"band"}
    assert all(sample.quotient < 1.0 for _, _, sample in rows)


def test_unknown_regime_is_rejected():
    with pytest.raises(InputError):
        cantor_scan(CantorSpec.constant(1 / 3, depth=4), range(1, 3), regime="steady")


def test_scan_summary_reports_critical_maxima():
    samples = rate_scan(Measure1D.uniform(0.0, 1.0), [0.4, 0.2, 0.1])
    summary = scan_summary(samples, critical=[0.2, 0.1])

    assert summary["count"] == 3
    assert summary["argmax_h"] == 0.4
    assert summary["min_quotient"] == pytest.approx(0.1)
    assert summary["critical_argmax_h"] == 0.2
    assert summary["critical_count"] == 2


def test_scan_summary_needs_samples():
    with pytest.raises(InputError):
        scan_summary([])


def test_quotients_are_monotone_in_p():
    m = Measure1D.from_atoms(np.array([0.0, 0.3]), np.array([0.5, 0.5]))
    quotients = [rate_quotient(m, 0.2, p).quotient for p in (1.0, 2.0, 3.0)]

    assert quotients == sorted(quotients)
