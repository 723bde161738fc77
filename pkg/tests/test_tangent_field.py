import math

import numpy as np
import pytest

from core.cantor import generation
from core.errors import BaseMismatchError, EmptyMeasureError, InputError, NotSymmetricFieldError, SpecValidationError
from core.models import CantorSpec, IntervalSet, Measure1D, MeasureField
from core.rates import shift_superpose
from core.tangent_field import (
    barycenter,
    cantor_field_witness,
    center,
    exp_map,
    inner,
    limsup_condition_check,
    norm,
    removebary_check,
    restrict_field,
    scale,
    symmetric_profile,
    truncate_symmetric,
    w_mu)
from core.utils import FileUtils, SeedUtils
from core.utils.sampling import Sampling



TWO_ATOMS = Measure1D.from_atoms([0.0, 1.0], [0.5, 0.5])


def skewed_field():
    return MeasureField.from_fibers([0.0, 1.0], [0.5, 0.5], [[(-1.0, 0.5), (3.0, 0.5)], [(2.0, 1.0)]])


def test_exp_of_the_unit_field_is_the_shift_superposition():
    xi = MeasureField.unit_symmetric(TWO_ATOMS)

    for h in (0.1, 0.5, 2.0):
        assert exp_map(xi, h).equals(shift_superpose(TWO_ATOMS, h), tol=1e-15)


def test_exp_at_zero_is_the_base():
    assert exp_map(skewed_field(), 0.0).equals(TWO_ATOMS)


def test_exp_merges_colliding_atoms():
    xi = MeasureField.map_field(TWO_ATOMS, [1.0, 0.0])

    assert exp_map(xi, 1.0).equals(Measure1D.dirac(1.0))


def test_barycenter_and_center():
    xi = skewed_field()

    assert barycenter(xi).tolist() == [1.0, 2.0]
    centered = center(xi)
    assert centered.fiber(0)[0].tolist() == [-2.0, 2.0]
    assert centered.fiber(1)[0].tolist() == [0.0]


def test_norm_of_a_map_field():
    assert norm(MeasureField.map_field(TWO_ATOMS, [2.0, -2.0])) == pytest.approx(2.0)
    assert norm(skewed_field()) == pytest.approx(math.sqrt(0.5 * 5.0 + 0.5 * 4.0))


def test_metric_between_map_fields():
    f = MeasureField.map_field(TWO_ATOMS, [1.0, 2.0])
    g = MeasureField.map_field(TWO_ATOMS, [0.0, -1.0])

    assert w_mu(f, g) == pytest.approx(math.sqrt(0.5 * 1.0 + 0.5 * 9.0))
    assert inner(f, g) == pytest.approx(0.5 * 0.0 + 0.5 * -2.0)


def test_metric_compares_fibers_by_quantiles():
    split = MeasureField.unit_symmetric(Measure1D.dirac(0.0))
    still = MeasureField.map_field(Measure1D.dirac(0.0), [0.0])

    assert w_mu(split, still) == pytest.approx(1.0)
    assert inner(split, still) == pytest.approx(0.0)


def test_metric_needs_a_common_base():
    with pytest.raises(BaseMismatchError):
        w_mu(skewed_field(), MeasureField.unit_symmetric(Measure1D.dirac(0.0)))


def test_centering_is_orthogonal_to_the_barycenter_field():
    rng = SeedUtils.seed_rng("field-tests", 0)
    for _ in range(20):
        mu = Sampling.random_atomic(rng, int(rng.integers(1, 6)))
        zeta = Sampling.random_field(rng, mu, 2.0)
        b = MeasureField.map_field(mu, barycenter(zeta))

        assert inner(center(zeta), b) == pytest.approx(0.0, abs=1e-12)
        assert norm(zeta) ** 2 == pytest.approx(norm(center(zeta)) ** 2 + norm(b) ** 2, abs=1e-12)


def test_scale():
    xi = skewed_field()

    assert norm(scale(xi, 3.0)) == pytest.approx(3.0 * norm(xi))
    assert norm(scale(xi, 0.0)) == 0.0
    with pytest.raises(InputError):
        scale(xi, -1.0)


def test_restrict_field_keeps_points_inside():
    restricted = restrict_field(skewed_field(), IntervalSet([0.5], [2.0]))

    assert restricted.base_x.tolist() == [1.0]
    assert restricted.weights.tolist() == [0.5]
    with pytest.raises(EmptyMeasureError):
        restrict_field(skewed_field(), IntervalSet([5.0], [6.0]))


def test_symmetric_truncation():
    xi = MeasureField.symmetric(TWO_ATOMS, [0.5, 3.0])

    assert symmetric_profile(xi).tolist() == [0.5, 3.0]
    assert symmetric_profile(truncate_symmetric(xi, 1.0)).tolist() == [0.5, 1.0]
    assert symmetric_profile(MeasureField.symmetric(TWO_ATOMS, [0.0, 1.0])).tolist() == [0.0, 1.0]


def test_truncation_needs_a_symmetric_field():
    with pytest.raises(NotSymmetricFieldError):
        truncate_symmetric(skewed_field(), 1.0)
    with pytest.raises(InputError):
        truncate_symmetric(MeasureField.unit_symmetric(TWO_ATOMS), 0.0)


def test_limsup_condition_on_well_separated_atoms():
    rows = limsup_condition_check(MeasureField.unit_symmetric(TWO_ATOMS), [1.0, 0.4, 0.1])

    assert [row.h for row in rows] == [1.0, 0.4, 0.1]
    assert rows[0].quotient == pytest.approx(math.sqrt(0.5))
    assert rows[1].quotient == pytest.approx(1.0)
    assert rows[2].deficit == pytest.approx(0.0, abs=1e-12)


def test_limsup_condition_needs_positive_scales():
    with pytest.raises(InputError):
        limsup_condition_check(MeasureField.unit_symmetric(TWO_ATOMS), [0.1, 0.0])


def test_barycenter_removal_on_random_fields():
    rng = SeedUtils.seed_rng("removebary-tests", 0)
    for _ in range(20):
        mu = Sampling.random_atomic(rng, int(rng.integers(1, 6)))
        zeta = Sampling.random_field(rng, mu, 1.0)
        rows = removebary_check(zeta, [1e-1, 1e-3, 1e-5])

        assert min(rows, key=lambda row: row.h).margin >= -1e-6


def test_barycenter_removal_is_tight_for_map_fields():
    zeta = MeasureField.map_field(TWO_ATOMS, [1.0, -0.5])
    row = removebary_check(zeta, [1e-3])[0]

    assert row.lhs == pytest.approx(0.5 * 1.0 + 0.5 * 0.25)
    assert row.margin == pytest.approx(0.0, abs=1e-9)


def test_cantor_field_witness():
    spec = CantorSpec.constant(1 / 3, depth=6)
    witness = cantor_field_witness(spec, 3, [0.03, 0.01])

    assert witness["norm"] == pytest.approx(1.0)
    assert witness["min_gap"] == pytest.approx(2 / 27)
    assert witness["discretization_bound"] == pytest.approx(1 / 27)
    assert all(row.quotient == pytest.approx(1.0) for row in witness["rows"])
    assert len(generation(spec, 3)) == 8


def test_field_round_trips_through_json(write_json):
    xi = skewed_field()
    data, lines = FileUtils.read_json(write_json("field.json", xi.to_dict()))
    loaded = MeasureField.from_dict(data, lines)

    assert np.array_equal(loaded.velocities, xi.velocities)
    assert loaded.same_base(xi)


def test_field_spec_reports_the_bad_pair(write_json):
    path = write_json("field.json", {"fibers": [{"x": 0.0, "w": 1.0, "fiber": [[0.0, 0.5], [1.0]]}]})
    data, lines = FileUtils.read_json(path)

    with pytest.raises(SpecValidationError) as info:
        MeasureField.from_dict(data, lines)

    assert info.value.path == "fibers[0].fiber[1]"


def test_fields_need_atomic_bases():
    with pytest.raises(InputError):
        MeasureField.unit_symmetric(Measure1D.uniform(0.0, 1.0))
