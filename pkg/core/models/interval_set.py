"""
This module defines IntervalSet, a finite union of disjoint closed intervals.

Finite point sets are interval sets whose intervals are degenerate.
"""



from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from ..errors import EmptyMeasureError, InputError, SpecValidationError



@dataclass(frozen=True, eq=False)
class IntervalSet:
    """A sorted union of disjoint closed intervals [a_l, b_l].

    Attributes:
        left (np.ndarray): Left ends, strictly increasing.
        right (np.ndarray): Right ends with `left[l] <= right[l] < left[l + 1]`.
    """
    left: np.ndarray
    right: np.ndarray

    def __post_init__(self):
        left = np.array(self.left, dtype=float).ravel()
        right = np.array(self.right, dtype=float).ravel()
        left.setflags(write=False)
        right.setflags(write=False)
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

        if left.size != right.size:
            raise InputError("Interval ends differ in length")
        if left.size == 0:
            raise EmptyMeasureError("An interval set needs at least one interval")
        if not (np.all(np.isfinite(left)) and np.all(np.isfinite(right))):
            raise InputError("Interval ends must be finite")
        if np.any(right < left):
            raise InputError("Intervals need left <= right")
        if np.any(left[1:] <= right[:-1]):
            raise InputError("Intervals must be sorted and pairwise disjoint")

    @classmethod
    def from_points(cls, points):
        """The finite set of the given points, as degenerate intervals."""
        xs = np.unique(np.asarray(points, dtype=float))
        return cls(xs, xs)

    @classmethod
    def from_intervals(cls, intervals):
        """Builds the set from (a, b) pairs, merging any that overlap or touch."""
        pairs = sorted((float(a), float(b)) for a, b in intervals)
        if not pairs:
            raise EmptyMeasureError("An interval set needs at least one interval")

        merged = [list(pairs[0])]
        for a, b in pairs[1:]:
            if b < a:
                raise InputError(f"Interval needs left <= right, got [{a}, {b}]")
            if a <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])

        return cls([a for a, _ in merged], [b for _, b in merged])

    @classmethod
    def from_dict(cls, data: dict[str, Any], lines: Optional[dict[str, int]]=None):
        """Builds a set from `{"intervals": [[a, b], ...]}` or `{"points": [x, ...]}`.

        Raises:
            SpecValidationError: Naming the offending entry and its line.
        """
        lines = lines or {}

        def fail(message: str, path: str):
            raise SpecValidationError(message, path=path, line=lines.get(path))

        if not isinstance(data, dict) or not ({"intervals", "points"} & set(data)):
            fail("An interval set spec needs 'intervals' or 'points'", "$")

        pairs = []
        for i, entry in enumerate(data.get("intervals", [])):
            path = f"intervals[{i}]"
            if (not isinstance(entry, list) or len(entry) != 2
                    or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in entry)):
                fail("Expected [a, b]", path)
            a, b = float(entry[0]), float(entry[1])
            if not (np.isfinite(a) and np.isfinite(b)) or b < a:
                fail(f"Interval needs finite a <= b, got [{a}, {b}]", path)
            if pairs and a <= pairs[-1][1]:
                fail("Intervals must be sorted and pairwise disjoint", path)
            pairs.append((a, b))

        for i, value in enumerate(data.get("points", [])):
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not np.isfinite(value):
                fail(f"Expected a finite number, got {value!r}", f"points[{i}]")
            pairs.append((float(value), float(value)))

        if not pairs:
            fail("An interval set needs at least one interval or point", "$")
        return cls.from_intervals(pairs)

    def to_dict(self):
        return {"intervals": [[float(a), float(b)] for a, b in self]}

    def __iter__(self):
        return iter(zip(self.left.tolist(), self.right.tolist()))

    def __len__(self):
        return int(self.left.size)

    @property
    def lengths(self):
        return self.right - self.left

    @property
    def total_length(self):
        return float(np.sum(self.lengths))

    @property
    def hull(self):
        return float(self.left[0]), float(self.right[-1])

    @property
    def is_finite_points(self):
        return bool(np.all(self.left == self.right))

    def contains(self, xs, tol: float=0.0):
        """Boolean mask of the points lying in the set (closed intervals)."""
        xs = np.asarray(xs, dtype=float)
        k = np.searchsorted(self.left, xs + tol, side="right") - 1
        kc = np.clip(k, 0, self.left.size - 1)
        return (k >= 0) & (xs <= self.right[kc] + tol)

    def is_subset_of(self, other: "IntervalSet", tol: float=0.0):
        """True if every interval lies inside one interval of `other`."""
        k = np.searchsorted(other.left, self.left + tol, side="right") - 1
        kc = np.clip(k, 0, other.left.size - 1)
        return bool(np.all((k >= 0) & (self.right <= other.right[kc] + tol)))

    def __str__(self):
        return f"IntervalSet({self.left.size} intervals, hull=[{self.left[0]:.6g}, {self.right[-1]:.6g}])"
