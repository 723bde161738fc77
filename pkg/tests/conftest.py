import json
import os

import hypothesis
import numpy as np
import pytest

from hypothesis import strategies as st

from core.models import Measure1D
from core.utils import SeedUtils



hypothesis.settings.register_profile("dev", max_examples=40, deadline=None)
hypothesis.settings.register_profile("ci", max_examples=200, deadline=None, derandomize=True)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "dev"))

np.seterr(all="warn")

_coordinate = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False, allow_infinity=False)
_mass = st.floats(min_value=0.05, max_value=1.0, allow_nan=False, allow_infinity=False)
_width = st.floats(min_value=0.01, max_value=1.0, allow_nan=False, allow_infinity=False)


@st.composite
def measures(draw, atomic: bool=False, max_atoms: int=4, max_segments: int=3):
    """Probability measures mixing atoms and (possibly overlapping) segments."""
    atoms = draw(st.lists(st.tuples(_coordinate, _mass), min_size=0 if not atomic else 1, max_size=max_atoms))
    segments = [] if atomic else draw(st.lists(st.tuples(_coordinate, _width, _mass), max_size=max_segments))
    if not atoms and not segments:
        atoms = [(0.0, 1.0)]

    total = sum(m for _, m in atoms) + sum(m for _, _, m in segments)
    return Measure1D.canonical(
        [x for x, _ in atoms],
        [m / total for _, m in atoms],
        [a for a, _, _ in segments],
        [a + w for a, w, _ in segments],
        [m / total for _, _, m in segments])


@pytest.fixture
def rng():
    return SeedUtils.seed_rng("tests", 0)


@pytest.fixture
def write_json(tmp_path):
    """Writes a JSON document (or raw text) to a temporary file and returns its path."""
    def write(name: str, payload):
        path = tmp_path / name
        text = payload if isinstance(payload, str) else json.dumps(payload, indent=2)
        path.write_text(text, encoding="utf-8")
        return str(path)
    return write
