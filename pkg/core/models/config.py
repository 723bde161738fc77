"""
This module defines ExperimentConfig, the validated configuration of one lab command.
"""



import json
import os

from dataclasses import asdict, dataclass, fields
from typing import Any, Optional

import jsonschema

from ..errors import InputError, SpecValidationError
from ..utils.type_utils import coerce
from .cantor_spec import AlphaKind, CantorSpec



SCHEMA_PATH = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "schemas", "experiment_config.schema.json"))


@dataclass
class ExperimentConfig:
    """Configuration of one command, validated against the published JSON schema.

    Attributes:
        command (str): One of rate-scan, cantor, porosity, verify.
        measure_path (str|None): JSON measure spec for rate-scan.
        set_path (str|None): JSON interval set for porosity; a Cantor generation otherwise.
        p (list[float]|None): Transport exponents; None means [1.0].
        h_min (float): Smallest scale of the geometric h-grid.
        h_max (float): Largest scale of the geometric h-grid.
        h_count (int|None): Number of grid scales; None means ratio 1/2 steps.
        depth (int): Cantor approximant depth.
        alpha_kind (str): Cantor gap-ratio rule.
        alpha_c (float): Constant value, or harmonic offset.
        alpha_values (list[float]|None): Leading values for the vector rule.
        n_min (int): First generation of the critical sequences.
        n_max (int): Last generation of the critical sequences.
        threshold (float): Porosity threshold of the class diagnostic.
        scales (list[float]|None): Explicit porosity scales.
        suites (list[str]|None): Acceptance criteria to run; None runs all.
        out (str|None): Output path.
        seed (int): Seed for randomized checks.
    """
    command: str
    measure_path: Optional[str] = None
    set_path: Optional[str] = None
    p: Optional[list[float]] = None
    h_min: float = 1e-6
    h_max: float = 1e-1
    h_count: Optional[int] = None
    depth: int = 14
    alpha_kind: str = "constant"
    alpha_c: float = 1 / 3
    alpha_values: Optional[list[float]] = None
    n_min: int = 2
    n_max: int = 8
    threshold: float = 0.25
    scales: Optional[list[float]] = None
    suites: Optional[list[str]] = None
    out: Optional[str] = None
    seed: int = 0

    def __post_init__(self):
        if self.p is None:
            self.p = [1.0]

    @classmethod
    def from_dict(cls, data: dict[str, Any]):
        """Validates `data` against the schema and builds the config.

        Values are cast to the annotated field types, so integers given where floats are
        expected (and the like) are accepted.

        Raises:
            SpecValidationError: If the document does not match the schema.
        """
        cleaned = {key: value for key, value in data.items() if value is not None}
        cls.validate(cleaned)

        kwargs = {}
        for f in fields(cls):
            if f.name in cleaned:
                try:
                    kwargs[f.name] = coerce(cleaned[f.name], f.type)
                except TypeError as e:
                    raise SpecValidationError(str(e), path=f.name) from None

        config = cls(**kwargs)
        config.check()
        return config

    @staticmethod
    def validate(data: dict[str, Any]):
        """Raises SpecValidationError unless `data` matches the published schema."""
        with open(SCHEMA_PATH, encoding="utf-8") as handle:
            schema = json.load(handle)
        try:
            jsonschema.validate(instance=data, schema=schema)
        except jsonschema.ValidationError as e:
            path = ".".join(str(part) for part in e.absolute_path) or "$"
            raise SpecValidationError(f"Invalid configuration: {e.message}", path=path) from None

    def check(self):
        """Cross-field checks the schema cannot express."""
        if self.h_min > self.h_max:
            raise InputError(f"h_min {self.h_min} exceeds h_max {self.h_max}")
        if self.n_min > self.n_max:
            raise InputError(f"n_min {self.n_min} exceeds n_max {self.n_max}")
        if self.scales is not None and any(b >= a for a, b in zip(self.scales, self.scales[1:])):
            raise InputError("Porosity scales must be strictly decreasing")

    def cantor_spec(self):
        """Returns the CantorSpec described by the alpha fields and depth."""
        kind = AlphaKind.from_str(self.alpha_kind)
        if kind is AlphaKind.CONSTANT:
            return CantorSpec.constant(self.alpha_c, depth=self.depth)
        if kind is AlphaKind.HARMONIC:
            return CantorSpec.harmonic(self.alpha_c, depth=self.depth)
        if not self.alpha_values:
            raise InputError("The vector alpha rule needs alpha_values")
        return CantorSpec.vector(self.alpha_values, depth=self.depth)

    def to_dict(self):
        return asdict(self)

    def __str__(self):
        return f"ExperimentConfig({self.command}, seed={self.seed})"
