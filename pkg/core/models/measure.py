"""
This module defines Measure1D, an exact finite representation of a nonnegative measure on
the real line: atoms plus piecewise-uniform segments.
"""



import math

from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from ..errors import EmptyMeasureError, InputError, SpecValidationError



DENSITY_MERGE_RTOL = 1e-12


def _frozen(values):
    array = np.array(values, dtype=float).ravel()
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Measure1D:
    """A nonnegative measure made of atoms and uniform segments.

    Atoms may sit inside segments; both parts are summed when the measure is evaluated.

    Attributes:
        atom_x (np.ndarray): Strictly increasing atom positions.
        atom_mass (np.ndarray): Positive atom masses.
        seg_left (np.ndarray): Left ends of the segments, sorted.
        seg_right (np.ndarray): Right ends; `seg_right[i] <= seg_left[i + 1]`.
        seg_mass (np.ndarray): Positive segment masses, spread uniformly.
    """
    atom_x: np.ndarray
    atom_mass: np.ndarray
    seg_left: np.ndarray
    seg_right: np.ndarray
    seg_mass: np.ndarray

    def __post_init__(self):
        for name in ("atom_x", "atom_mass", "seg_left", "seg_right", "seg_mass"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

        if self.atom_x.size != self.atom_mass.size:
            raise InputError("Atom positions and masses differ in length")
        if not (self.seg_left.size == self.seg_right.size == self.seg_mass.size):
            raise InputError("Segment ends and masses differ in length")

        arrays = (self.atom_x, self.atom_mass, self.seg_left, self.seg_right, self.seg_mass)
        if not all(np.all(np.isfinite(a)) for a in arrays):
            raise InputError("Measure data must be finite")
        if np.any(self.atom_mass <= 0) or np.any(self.seg_mass <= 0):
            raise InputError("All masses must be strictly positive")
        if np.any(np.diff(self.atom_x) <= 0):
            raise InputError("Atom positions must be strictly increasing")
        if np.any(self.seg_right <= self.seg_left):
            raise InputError("Segments need left < right")
        if np.any(self.seg_left[1:] < self.seg_right[:-1]):
            raise InputError("Segments must be sorted with disjoint interiors")
        if self.atom_x.size + self.seg_left.size == 0:
            raise EmptyMeasureError("A measure needs at least one atom or segment")

    @classmethod
    def canonical(cls, atom_x=(), atom_mass=(), seg_left=(), seg_right=(), seg_mass=()):
        """Builds the canonical measure from unsorted, possibly overlapping parts.

        Atoms at exactly equal positions merge. Overlapping segments are split at every
        endpoint and their densities added; adjacent pieces of equal density merge back.
        Zero-mass parts are dropped and zero-length segments become atoms.

        Raises:
            EmptyMeasureError: If no mass remains.
        """
        ax = np.asarray(atom_x, dtype=float).ravel()
        am = np.asarray(atom_mass, dtype=float).ravel()
        sl = np.asarray(seg_left, dtype=float).ravel()
        sr = np.asarray(seg_right, dtype=float).ravel()
        sm = np.asarray(seg_mass, dtype=float).ravel()

        if np.any(sr < sl):
            raise InputError("Segments need left <= right")

        keep = sm > 0
        sl, sr, sm = sl[keep], sr[keep], sm[keep]

        point = sr == sl
        if np.any(point):
            ax = np.concatenate((ax, sl[point]))
            am = np.concatenate((am, sm[point]))
            sl, sr, sm = sl[~point], sr[~point], sm[~point]

        keep = am > 0
        ax, am = ax[keep], am[keep]

        if ax.size:
            positions, inverse = np.unique(ax, return_inverse=True)
            masses = np.bincount(inverse, weights=am, minlength=positions.size)
        else:
            positions, masses = np.empty(0), np.empty(0)

        left, right, mass = _split_segments(sl, sr, sm)

        if positions.size + left.size == 0:
            raise EmptyMeasureError("The measure has no mass")

        return cls(positions, masses, left, right, mass)

    @classmethod
    def dirac(cls, x: float, mass: float=1.0):
        """The point mass `mass * delta_x`."""
        return cls([x], [mass], [], [], [])

    @classmethod
    def uniform(cls, a: float, b: float, mass: float=1.0):
        """Uniform measure of total `mass` on [a, b]."""
        return cls([], [], [a], [b], [mass])

    @classmethod
    def from_atoms(cls, xs, masses):
        """Atomic measure from positions and masses in any order."""
        return cls.canonical(atom_x=xs, atom_mass=masses)

    @classmethod
    def from_dict(cls, data: dict[str, Any], lines: Optional[dict[str, int]]=None):
        """Builds a measure from the JSON measure spec.

        The spec reads `{"atoms": [[x, m], ...], "segments": [[a, b, m], ...]}`. Entries must
        already satisfy the measure invariants; nothing is silently repaired.

        Args:
            data (dict): The decoded JSON document.
            lines (dict[str, int], optional): JSON path to line mapping used in diagnostics.

        Raises:
            SpecValidationError: Naming the offending entry and its line.
        """
        lines = lines or {}

        def fail(message: str, path: str):
            raise SpecValidationError(message, path=path, line=lines.get(path))

        if not isinstance(data, dict):
            fail("A measure spec must be a JSON object", "$")
        unknown = set(data) - {"atoms", "segments"}
        if unknown:
            fail(f"Unknown measure keys: {sorted(unknown)}", "$")

        atoms = data.get("atoms", [])
        segments = data.get("segments", [])
        if not isinstance(atoms, list):
            fail("'atoms' must be a list", "atoms")
        if not isinstance(segments, list):
            fail("'segments' must be a list", "segments")
        if not atoms and not segments:
            fail("A measure needs at least one atom or segment", "$")

        ax, am = [], []
        for i, entry in enumerate(atoms):
            path = f"atoms[{i}]"
            x, m = _numbers(entry, 2, path, fail)
            if m <= 0:
                fail(f"Atom mass must be positive, got {m}", path)
            if ax and x <= ax[-1]:
                fail(f"Atom positions must be strictly increasing, {x} follows {ax[-1]}", path)
            ax.append(x)
            am.append(m)

        sl, sr, sm = [], [], []
        for i, entry in enumerate(segments):
            path = f"segments[{i}]"
            a, b, m = _numbers(entry, 3, path, fail)
            if not a < b:
                fail(f"Segment needs left < right, got [{a}, {b}]", path)
            if m <= 0:
                fail(f"Segment mass must be positive, got {m}", path)
            if sr and a < sr[-1]:
                fail(f"Segments must be sorted and non-overlapping, [{a}, {b}] starts before {sr[-1]}", path)
            sl.append(a)
            sr.append(b)
            sm.append(m)

        return cls.canonical(ax, am, sl, sr, sm)

    def to_dict(self):
        """Returns the JSON measure spec of this measure."""
        return {
            "atoms": [[float(x), float(m)] for x, m in zip(self.atom_x, self.atom_mass)],
            "segments": [
                [float(a), float(b), float(m)]
                for a, b, m in zip(self.seg_left, self.seg_right, self.seg_mass)]}

    @property
    def atoms(self):
        """Atoms as a list of (position, mass) pairs."""
        return list(zip(self.atom_x.tolist(), self.atom_mass.tolist()))

    @property
    def segments(self):
        """Segments as a list of (left, right, mass) triples."""
        return list(zip(self.seg_left.tolist(), self.seg_right.tolist(), self.seg_mass.tolist()))

    @property
    def total_mass(self):
        return math.fsum(self.atom_mass.tolist()) + math.fsum(self.seg_mass.tolist())

    @property
    def seg_density(self):
        return self.seg_mass / (self.seg_right - self.seg_left)

    @property
    def is_atomic(self):
        return self.seg_left.size == 0

    def support_hull(self):
        """Returns (min, max) of the closed support."""
        lows = [a.min() for a in (self.atom_x, self.seg_left) if a.size]
        highs = [a.max() for a in (self.atom_x, self.seg_right) if a.size]
        return float(min(lows)), float(max(highs))

    def breakpoints(self):
        """All atom positions and segment ends, sorted and unique."""
        return np.unique(np.concatenate((self.atom_x, self.seg_left, self.seg_right)))

    def scaled(self, factor: float):
        """Returns the measure multiplied by `factor > 0`."""
        if not factor > 0:
            raise InputError(f"Scaling factor must be positive, got {factor}")
        return Measure1D(self.atom_x, self.atom_mass * factor, self.seg_left, self.seg_right, self.seg_mass * factor)

    def equals(self, other: "Measure1D", tol: float=1e-12):
        """Measure equality: same canonical representation up to `tol` per coordinate."""
        if self.atom_x.size != other.atom_x.size or self.seg_left.size != other.seg_left.size:
            return False

        pairs = (
            (self.atom_x, other.atom_x),
            (self.atom_mass, other.atom_mass),
            (self.seg_left, other.seg_left),
            (self.seg_right, other.seg_right),
            (self.seg_mass, other.seg_mass))
        return all(np.allclose(a, b, rtol=tol, atol=tol) for a, b in pairs)

    def __str__(self):
        return f"Measure1D({self.atom_x.size} atoms, {self.seg_left.size} segments, mass={self.total_mass:.17g})"


def _numbers(entry, count: int, path: str, fail):
    if not isinstance(entry, (list, tuple)) or len(entry) != count:
        fail(f"Expected a list of {count} numbers", path)
    values = []
    for value in entry:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            fail(f"Expected a number, got {value!r}", path)
        if not math.isfinite(value):
            fail(f"Expected a finite number, got {value!r}", path)
        values.append(float(value))

    return values


def _split_segments(left: np.ndarray, right: np.ndarray, mass: np.ndarray):
    """Splits overlapping segments at all endpoints and adds their densities."""
    if left.size == 0:
        return np.empty(0), np.empty(0), np.empty(0)

    order = np.lexsort((right, left))
    left, right, mass = left[order], right[order], mass[order]

    ## Fast path: already sorted and non-overlapping.
    if np.all(left[1:] >= right[:-1]):
        return _merge_equal_density(left, right, mass)

    cuts = np.unique(np.concatenate((left, right)))
    i_left = np.searchsorted(cuts, left)
    i_right = np.searchsorted(cuts, right)
    density = mass / (right - left)

    coverage = np.zeros(cuts.size, dtype=np.int64)
    np.add.at(coverage, i_left, 1)
    np.add.at(coverage, i_right, -1)
    coverage = np.cumsum(coverage)[:-1]

    change = np.zeros(cuts.size)
    np.add.at(change, i_left, density)
    np.add.at(change, i_right, -density)
    running = np.cumsum(change)[:-1]

    ## Cancel round-off carried over from earlier covered runs: every uncovered piece resets the sum.
    idx = np.arange(coverage.size)
    last_gap = np.maximum.accumulate(np.where(coverage == 0, idx, -1))
    baseline = np.where(last_gap >= 0, running[np.clip(last_gap, 0, None)], 0.0)
    piece_density = running - baseline

    widths = np.diff(cuts)
    piece_mass = piece_density * widths

    ## A piece that is exactly one whole input segment keeps its mass bit-for-bit.
    whole = i_right - i_left == 1
    single = coverage[i_left[whole]] == 1
    piece_mass[i_left[whole][single]] = mass[whole][single]

    covered = (coverage > 0) & (piece_mass > 0)
    return _merge_equal_density(cuts[:-1][covered], cuts[1:][covered], piece_mass[covered])


def _merge_equal_density(left: np.ndarray, right: np.ndarray, mass: np.ndarray):
    """Merges touching pieces whose densities agree to a relative 1e-12."""
    if left.size < 2:
        return left, right, mass

    density = mass / (right - left)
    touching = left[1:] == right[:-1]
    same = np.abs(density[1:] - density[:-1]) <= DENSITY_MERGE_RTOL * np.maximum(density[1:], density[:-1])
    joined = touching & same
    if not np.any(joined):
        return left, right, mass

    starts = np.concatenate(([True], ~joined))
    group = np.cumsum(starts) - 1
    first = np.flatnonzero(starts)
    last = np.concatenate((first[1:] - 1, [left.size - 1]))

    return left[first], right[last], np.bincount(group, weights=mass)
