"""
This module defines MeasureField, a discrete measure field over an atomic base.

Each base point x_i with weight w_i carries a fiber: a finitely supported probability
distribution over velocities. The base measure is sum_i w_i delta_{x_i}.
"""



from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from ..errors import InputError, SpecValidationError
from .measure import Measure1D



PROBABILITY_TOL = 1e-12


def _frozen(values, dtype=float):
    array = np.array(values, dtype=dtype).ravel()
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class MeasureField:
    """A measure field stored as flattened fibers.

    Fiber i occupies `velocities[offsets[i]:offsets[i + 1]]` with matching `probs`. Within a
    fiber velocities are strictly increasing and probabilities positive.

    Attributes:
        base_x (np.ndarray): Strictly increasing base points.
        weights (np.ndarray): Positive base weights.
        velocities (np.ndarray): Flattened fiber velocities.
        probs (np.ndarray): Flattened fiber probabilities.
        offsets (np.ndarray): Fiber boundaries into the flattened arrays, length len(base_x) + 1.
    """
    base_x: np.ndarray
    weights: np.ndarray
    velocities: np.ndarray
    probs: np.ndarray
    offsets: np.ndarray

    def __post_init__(self):
        for name in ("base_x", "weights", "velocities", "probs"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        object.__setattr__(self, "offsets", _frozen(self.offsets, dtype=np.int64))

        n = self.base_x.size
        if n == 0:
            raise InputError("A measure field needs at least one base point")
        if self.weights.size != n or self.offsets.size != n + 1:
            raise InputError("Base points, weights and fiber offsets are inconsistent")
        if self.offsets[0] != 0 or self.offsets[-1] != self.velocities.size or np.any(np.diff(self.offsets) < 1):
            raise InputError("Every fiber needs at least one velocity")
        if self.velocities.size != self.probs.size:
            raise InputError("Fiber velocities and probabilities differ in length")
        if not all(np.all(np.isfinite(a)) for a in (self.base_x, self.weights, self.velocities, self.probs)):
            raise InputError("Field data must be finite")
        if np.any(np.diff(self.base_x) <= 0):
            raise InputError("Base points must be strictly increasing")
        if np.any(self.weights <= 0):
            raise InputError("Base weights must be positive")
        if np.any(self.probs <= 0):
            raise InputError("Fiber probabilities must be positive")

        totals = np.add.reduceat(self.probs, self.offsets[:-1])
        if np.any(np.abs(totals - 1.0) > PROBABILITY_TOL * 10):
            bad = int(np.argmax(np.abs(totals - 1.0)))
            raise InputError(f"Fiber at x={self.base_x[bad]} sums to {totals[bad]}, not 1")

    @classmethod
    def from_fibers(cls, base_x, weights, fibers):
        """Builds a field from per-point fibers given as lists of (v, p) pairs.

        Zero-probability entries are dropped and equal velocities within a fiber merge.
        Base points need not be sorted but must be distinct.
        """
        base_x = np.asarray(base_x, dtype=float).ravel()
        weights = np.asarray(weights, dtype=float).ravel()
        if base_x.size != weights.size or base_x.size != len(fibers):
            raise InputError("Base points, weights and fibers differ in length")

        order = np.argsort(base_x, kind="stable")
        velocities, probs, offsets = [], [], [0]
        for i in order:
            v, p = _canonical_fiber(fibers[i])
            velocities.append(v)
            probs.append(p)
            offsets.append(offsets[-1] + v.size)

        return cls(
            base_x=base_x[order],
            weights=weights[order],
            velocities=np.concatenate(velocities),
            probs=np.concatenate(probs),
            offsets=offsets)

    @classmethod
    def map_field(cls, mu: Measure1D, f):
        """The map-induced field (id, f)_# mu: single-point fibers delta_{f(x)}.

        Args:
            mu (Measure1D): An atomic base measure.
            f (Callable|array-like): Velocity per atom, either a callable or explicit values.
        """
        _require_atomic(mu)
        velocities = np.asarray(f(mu.atom_x) if callable(f) else f, dtype=float)
        velocities = np.broadcast_to(velocities, mu.atom_x.shape)

        return cls(
            base_x=mu.atom_x,
            weights=mu.atom_mass,
            velocities=velocities,
            probs=np.ones(mu.atom_x.size),
            offsets=np.arange(mu.atom_x.size + 1))

    @classmethod
    def symmetric(cls, mu: Measure1D, f):
        """The symmetric field 1/2 [(id, -f) + (id, f)]_# mu with f >= 0."""
        _require_atomic(mu)
        values = np.asarray(f(mu.atom_x) if callable(f) else f, dtype=float)
        values = np.broadcast_to(values, mu.atom_x.shape)
        if np.any(values < 0):
            raise InputError("Symmetric fields need f >= 0")

        fibers = [[(-v, 0.5), (v, 0.5)] for v in values.tolist()]
        return cls.from_fibers(mu.atom_x, mu.atom_mass, fibers)

    @classmethod
    def unit_symmetric(cls, mu: Measure1D):
        """The symmetric unit field: every fiber is 1/2 (delta_{-1} + delta_{+1})."""
        return cls.symmetric(mu, 1.0)

    @classmethod
    def from_dict(cls, data: dict[str, Any], lines: Optional[dict[str, int]]=None):
        """Builds a field from `{"fibers": [{"x": ..., "w": ..., "fiber": [[v, p], ...]}, ...]}`.

        Raises:
            SpecValidationError: Naming the offending entry and its line.
        """
        lines = lines or {}

        def fail(message: str, path: str):
            raise SpecValidationError(message, path=path, line=lines.get(path))

        entries = data.get("fibers") if isinstance(data, dict) else None
        if not isinstance(entries, list) or not entries:
            fail("A field spec needs a nonempty 'fibers' list", "$")

        xs, ws, fibers = [], [], []
        for i, entry in enumerate(entries):
            path = f"fibers[{i}]"
            if not isinstance(entry, dict) or not {"x", "w", "fiber"} <= set(entry):
                fail("Each fiber entry needs 'x', 'w' and 'fiber'", path)
            x, w = entry["x"], entry["w"]
            if not _is_number(x) or not _is_number(w) or w <= 0:
                fail(f"Expected finite x and positive w, got x={x!r}, w={w!r}", path)
            if xs and x <= xs[-1]:
                fail(f"Base points must be strictly increasing, {x} follows {xs[-1]}", path)

            pairs = entry["fiber"]
            if not isinstance(pairs, list) or not pairs:
                fail("A fiber needs at least one [v, p] pair", f"{path}.fiber")
            for j, pair in enumerate(pairs):
                if (not isinstance(pair, list) or len(pair) != 2
                        or not all(_is_number(value) for value in pair) or pair[1] < 0):
                    fail(f"Expected [v, p] with p >= 0, got {pair!r}", f"{path}.fiber[{j}]")
            total = sum(p for _, p in pairs)
            if abs(total - 1.0) > 1e-9:
                fail(f"Fiber probabilities sum to {total}, not 1", f"{path}.fiber")

            xs.append(float(x))
            ws.append(float(w))
            fibers.append([(float(v), float(p) / total) for v, p in pairs])

        return cls.from_fibers(xs, ws, fibers)

    def to_dict(self):
        return {
            "fibers": [
                {"x": float(x), "w": float(w), "fiber": [[float(v), float(p)] for v, p in zip(*self.fiber(i))]}
                for i, (x, w) in enumerate(zip(self.base_x, self.weights))]}

    def __len__(self):
        return int(self.base_x.size)

    def __iter__(self):
        """Iterates over (x, w, velocities, probabilities) per base point."""
        for i in range(len(self)):
            v, p = self.fiber(i)
            yield float(self.base_x[i]), float(self.weights[i]), v, p

    def fiber(self, i: int):
        """Returns the (velocities, probabilities) of fiber i."""
        lo, hi = self.offsets[i], self.offsets[i + 1]
        return self.velocities[lo:hi], self.probs[lo:hi]

    @property
    def fiber_sizes(self):
        return np.diff(self.offsets)

    @property
    def owner(self):
        """Base index of each flattened velocity entry."""
        return np.repeat(np.arange(len(self)), self.fiber_sizes)

    def base(self):
        """The base measure sum_i w_i delta_{x_i}."""
        return Measure1D(self.base_x, self.weights, [], [], [])

    def with_velocities(self, velocities, canonical: bool=True):
        """Returns a field on the same base and probabilities with new flattened velocities."""
        velocities = np.asarray(velocities, dtype=float)
        if not canonical:
            return MeasureField(self.base_x, self.weights, velocities, self.probs, self.offsets)

        fibers = [
            list(zip(velocities[lo:hi].tolist(), self.probs[lo:hi].tolist()))
            for lo, hi in zip(self.offsets[:-1], self.offsets[1:])]
        return MeasureField.from_fibers(self.base_x, self.weights, fibers)

    def same_base(self, other: "MeasureField", tol: float=1e-12):
        return (len(self) == len(other)
                and np.allclose(self.base_x, other.base_x, rtol=tol, atol=tol)
                and np.allclose(self.weights, other.weights, rtol=tol, atol=tol))

    def __str__(self):
        return f"MeasureField({len(self)} base points, {self.velocities.size} velocities)"


def _is_number(value):
    return not isinstance(value, bool) and isinstance(value, (int, float)) and np.isfinite(value)


def _require_atomic(mu: Measure1D):
    if not mu.is_atomic:
        raise InputError("Measure fields live over atomic bases only")


def _canonical_fiber(pairs):
    """Sorts a fiber by velocity, merges equal velocities and drops zero probabilities."""
    if len(pairs) == 0:
        raise InputError("A fiber needs at least one velocity")

    v = np.asarray([pair[0] for pair in pairs], dtype=float)
    p = np.asarray([pair[1] for pair in pairs], dtype=float)
    if np.any(p < 0):
        raise InputError("Fiber probabilities must be nonnegative")

    keep = p > 0
    v, p = v[keep], p[keep]
    if v.size == 0:
        raise InputError("A fiber needs positive total probability")

    unique, inverse = np.unique(v, return_inverse=True)
    return unique, np.bincount(inverse, weights=p, minlength=unique.size)
