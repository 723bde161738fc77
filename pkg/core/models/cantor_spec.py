"""
This module defines the gap-ratio rules of centered Cantor constructions.

A CantorSpec produces the sequence alpha_n in (0, 1) of middle proportions removed at
generation n, together with the deepest generation that may be realized.
"""



from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

import numpy as np

from ..errors import DepthExceededError, InputError, SpecValidationError
from ..settings import DEFAULT_DEPTH_LIMIT, get_settings



class AlphaKind(Enum):
    """Enum of supported gap-ratio rules.

    - Constant: alpha_n = c
    - Vector: explicit leading values, then a constant tail
    - Harmonic: alpha_n = 1 / (n + c)
    """
    CONSTANT = "constant"
    VECTOR = "vector"
    HARMONIC = "harmonic"

    def __str__(self):
        return self.value

    @classmethod
    def from_str(cls, value: str):
        """Returns the rule named by `value`, case-insensitively.

        Raises:
            InputError: For an unknown rule name.
        """
        try:
            return cls[value.strip().upper()]
        except KeyError:
            raise InputError(f"Unknown alpha kind: {value!r}") from None


@dataclass(frozen=True)
class CantorSpec:
    """A gap-ratio sequence and the depth limit for realized constructions.

    Attributes:
        kind (AlphaKind): The rule producing alpha_n.
        c (float): The constant for CONSTANT, the offset for HARMONIC.
        values (tuple[float, ...]): Leading values for VECTOR.
        tail (float|None): Constant tail for VECTOR; defaults to the last leading value.
        depth (int): Deepest generation that may be realized.
    """
    kind: AlphaKind
    c: float = 1 / 3
    values: tuple[float, ...] = field(default_factory=tuple)
    tail: Optional[float] = None
    depth: int = DEFAULT_DEPTH_LIMIT

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if self.kind is AlphaKind.VECTOR:
            if not self.values:
                raise InputError("A vector alpha rule needs at least one value")
            if self.tail is None:
                object.__setattr__(self, "tail", self.values[-1])

        if isinstance(self.depth, bool) or not isinstance(self.depth, int) or self.depth < 0:
            raise InputError(f"Depth must be a nonnegative integer, got {self.depth!r}")
        limit = get_settings().depth_limit
        if self.depth > limit:
            raise DepthExceededError(f"Depth {self.depth} exceeds the limit {limit}")

        if self.kind is AlphaKind.CONSTANT and not 0 < self.c < 1:
            raise InputError(f"A constant alpha must lie in (0, 1), got {self.c}")
        if self.kind is AlphaKind.HARMONIC and not self.c > 1:
            raise InputError(f"A harmonic offset must exceed 1 so that alpha_0 < 1, got {self.c}")
        if self.kind is AlphaKind.VECTOR:
            sequence = list(self.values) + [self.tail]
            if any(not 0 < a < 1 for a in sequence):
                raise InputError("Vector alpha values must lie in (0, 1)")
            if any(b > a for a, b in zip(sequence, sequence[1:])):
                raise InputError("Alpha sequences must be nonincreasing")

    @classmethod
    def constant(cls, c: float, depth: int=DEFAULT_DEPTH_LIMIT):
        return cls(kind=AlphaKind.CONSTANT, c=c, depth=depth)

    @classmethod
    def harmonic(cls, offset: float=2.0, depth: int=DEFAULT_DEPTH_LIMIT):
        return cls(kind=AlphaKind.HARMONIC, c=offset, depth=depth)

    @classmethod
    def vector(cls, values, tail: Optional[float]=None, depth: int=DEFAULT_DEPTH_LIMIT):
        return cls(kind=AlphaKind.VECTOR, values=tuple(values), tail=tail, depth=depth)

    @classmethod
    def from_dict(cls, data: dict[str, Any], lines: Optional[dict[str, int]]=None):
        """Builds a spec from `{"alpha": {"kind": ..., ...}, "depth": N}`.

        The alpha object carries `value` for constant rules, `offset` for harmonic rules,
        and `values` plus an optional `tail` for vector rules.

        Raises:
            SpecValidationError: On a malformed document.
            DepthExceededError: If the depth is above the limit.
        """
        lines = lines or {}

        def fail(message: str, path: str):
            raise SpecValidationError(message, path=path, line=lines.get(path))

        if not isinstance(data, dict) or not isinstance(data.get("alpha"), dict):
            fail("A Cantor spec needs an 'alpha' object", "$")

        alpha = data["alpha"]
        depth = data.get("depth", DEFAULT_DEPTH_LIMIT)
        if isinstance(depth, bool) or not isinstance(depth, int):
            fail(f"Depth must be an integer, got {depth!r}", "depth")

        try:
            kind = AlphaKind.from_str(str(alpha.get("kind", "")))
            if kind is AlphaKind.CONSTANT:
                return cls.constant(float(alpha["value"]), depth=depth)
            if kind is AlphaKind.HARMONIC:
                return cls.harmonic(float(alpha.get("offset", 2.0)), depth=depth)
            tail = alpha.get("tail")
            return cls.vector([float(v) for v in alpha["values"]], None if tail is None else float(tail), depth=depth)
        except KeyError as e:
            fail(f"Missing alpha field {e}", "alpha")
        except (TypeError, ValueError) as e:
            if isinstance(e, DepthExceededError):
                raise
            fail(str(e), "alpha")

    def to_dict(self):
        if self.kind is AlphaKind.CONSTANT:
            alpha = {"kind": "constant", "value": self.c}
        elif self.kind is AlphaKind.HARMONIC:
            alpha = {"kind": "harmonic", "offset": self.c}
        else:
            alpha = {"kind": "vector", "values": list(self.values), "tail": self.tail}

        return {"alpha": alpha, "depth": self.depth}

    def alpha(self, n: int):
        """Returns alpha_n (generation index starting at 0)."""
        if n < 0:
            raise InputError(f"Generation index must be nonnegative, got {n}")
        if self.kind is AlphaKind.CONSTANT:
            return float(self.c)
        if self.kind is AlphaKind.HARMONIC:
            return 1.0 / (n + self.c)
        return self.values[n] if n < len(self.values) else float(self.tail)

    def alphas(self, n: int):
        """Returns alpha_0, ..., alpha_{n-1}."""
        return np.array([self.alpha(k) for k in range(n)], dtype=float)

    def deltas(self, n: int):
        """Returns delta_0 = 1, ..., delta_n with delta_{k+1} = delta_k (1 - alpha_k) / 2."""
        out = np.empty(n + 1)
        out[0] = 1.0
        for k in range(n):
            out[k + 1] = out[k] * (1.0 - self.alpha(k)) / 2.0
        return out

    def delta(self, n: int):
        """Length of every generation-n interval."""
        return float(self.deltas(n)[-1])

    def check_depth(self, n: int):
        """Raises DepthExceededError if generation n may not be realized."""
        if n > self.depth:
            raise DepthExceededError(f"Generation {n} exceeds the depth limit {self.depth}")

    def __str__(self):
        if self.kind is AlphaKind.CONSTANT:
            rule = f"alpha = {self.c:.6g}"
        elif self.kind is AlphaKind.HARMONIC:
            rule = f"alpha_n = 1/(n + {self.c:g})"
        else:
            rule = f"alpha = {list(self.values)} then {self.tail:.6g}"
        return f"CantorSpec({rule}, depth <= {self.depth})"


def harmonic_lebesgue_mass(offset: float, n: int):
    """Closed form of prod_{k<n} (1 - 1/(k + offset)) = (offset - 1) / (n + offset - 1)."""
    return (offset - 1.0) / (n + offset - 1.0) if n > 0 else 1.0
