import json
import os

from dataclasses import fields
from typing import Optional

import pandas as pd
import pytest

from core.errors import InputError, SpecValidationError
from core.models import ExperimentConfig
from core.settings import DEFAULT_DEPTH_LIMIT, Settings
from core.utils import FileUtils, SeedUtils, coerce, resolve_type



def test_index_lines_maps_nested_paths():
    text = '{\n  "fibers": [\n    {"x": 0,\n     "fiber": [[1, 0.5],\n               [2, 0.5]]}\n  ]\n}'
    lines = FileUtils.index_lines(text)

    assert lines["$"] == 1
    assert lines["fibers"] == 2
    assert lines["fibers[0]"] == 3
    assert lines["fibers[0].fiber"] == 4
    assert lines["fibers[0].fiber[1]"] == 5


def test_index_lines_handles_empty_containers():
    lines = FileUtils.index_lines('{"atoms": [], "segments": {}}')

    assert lines == {"$": 1, "atoms": 1, "segments": 1}


def test_read_json_rejects_missing_files(tmp_path):
    with pytest.raises(SpecValidationError, match="does not exist"):
        FileUtils.read_json(str(tmp_path / "absent.json"))


def test_write_atomic_replaces_and_leaves_no_temporaries(tmp_path):
    path = tmp_path / "nested" / "out.txt"
    FileUtils.write_atomic(str(path), "first")
    FileUtils.write_atomic(str(path), "second")

    assert path.read_text(encoding="utf-8") == "second"
    assert os.listdir(path.parent) == ["out.txt"]


def test_csv_text_layout():
    frame = pd.DataFrame({"h": [0.1], "quotient": [1 / 3]})
    text = FileUtils.csv_text(frame, {"seed": 0, "version": "x"}, trailer=["verdict: inconclusive"])

    assert text.splitlines() == [
        '# manifest: {"seed": 0, "version": "x"}',
        "h,quotient",
        "0.10000000000000001,0.33333333333333331",
        "# verdict: inconclusive"]


def test_write_json_is_sorted(tmp_path):
    path = tmp_path / "report.json"
    FileUtils.write_json(str(path), {"b": 1, "a": 2})

    assert list(json.loads(path.read_text(encoding="utf-8"))) == ["a", "b"]


def test_seeded_streams_are_reproducible_and_independent():
    first = SeedUtils.seed_rng("stream", 1).random(4)

    assert first.tolist() == SeedUtils.seed_rng("stream", 1).random(4).tolist()
    assert first.tolist() != SeedUtils.seed_rng("other", 1).random(4).tolist()
    assert first.tolist() != SeedUtils.seed_rng("stream", 2).random(4).tolist()


def test_config_hash_ignores_key_order():
    assert SeedUtils.config_hash({"a": 1, "b": [1.0]}) == SeedUtils.config_hash({"b": [1.0], "a": 1})
    assert SeedUtils.config_hash({"a": 1}) != SeedUtils.config_hash({"a": 2})


@pytest.mark.parametrize("annotation, expected", [
    (Optional[int], (int, None)),
    (float | None, (float, None)),
    (list[float], (list, float)),
    (tuple[str, ...], (tuple, str)),
    (str, (str, None))])
def test_resolve_type(annotation, expected):
    assert resolve_type(annotation) == expected


def test_coerce():
    assert coerce([1, 2], list[float]) == [1.0, 2.0]
    assert coerce(2.0, int) == 2
    assert coerce(3, Optional[float]) == 3.0
    assert coerce("yes", bool) is True
    assert coerce(None, int) is None
    assert coerce(0.5, list[float]) == [0.5]
    with pytest.raises(TypeError):
        coerce(2.5, int)


def test_config_defaults():
    config = ExperimentConfig.from_dict({"command": "rate-scan"})

    assert config.p == [1.0]
    assert config.h_min == 1e-6
    assert config.cantor_spec().depth == 14


def test_config_exponents_are_optional():
    p_field = next(f for f in fields(ExperimentConfig) if f.name == "p")

    assert resolve_type(p_field.type) == (list, float)
    assert ExperimentConfig(command="cantor", p=None).p == [1.0]
    assert ExperimentConfig.from_dict({"command": "cantor", "p": [2]}).p == [2.0]


def test_config_casts_numbers():
    config = ExperimentConfig.from_dict({"command": "cantor", "p": [1, 2], "alpha_c": 2, "alpha_kind": "harmonic"})

    assert config.p == [1.0, 2.0]
    assert config.cantor_spec().alpha(0) == 0.5


@pytest.mark.parametrize("data, path", [
    ({"command": "draw"}, "command"),
    ({"command": "cantor", "p": [0.5]}, "p.0"),
    ({"command": "cantor", "depth": "deep"}, "depth")])
def test_config_schema_errors_name_the_field(data, path):
    with pytest.raises(SpecValidationError) as info:
        ExperimentConfig.from_dict(data)

    assert info.value.path == path


@pytest.mark.parametrize("data", [
    {"command": "rate-scan", "h_min": 1.0, "h_max": 0.1},
    {"command": "cantor", "n_min": 5, "n_max": 2},
    {"command": "porosity", "scales": [0.1, 0.2]}])
def test_config_cross_field_checks(data):
    with pytest.raises(InputError):
        ExperimentConfig.from_dict(data)


def test_vector_rule_needs_values():
    with pytest.raises(InputError):
        ExperimentConfig.from_dict({"command": "cantor", "alpha_kind": "vector"}).cantor_spec()


def test_settings_from_env(monkeypatch):
    monkeypatch.setenv("PO_THREADS", "3")
    monkeypatch.setenv("PO_LOG_LEVEL", "debug")
    monkeypatch.delenv("PO_DEPTH_LIMIT", raising=False)
    settings = Settings.from_env()

    assert settings.threads == 3
    assert settings.log_level == "DEBUG"
    assert settings.depth_limit == DEFAULT_DEPTH_LIMIT


@pytest.mark.parametrize("name, value", [("PO_THREADS", "0"), ("PO_DEPTH_LIMIT", "many"), ("PO_LOG_LEVEL", "loud")])
def test_settings_reject_bad_values(monkeypatch, name, value):
    monkeypatch.setenv(name, value)

    with pytest.raises(InputError):
        Settings.from_env()
