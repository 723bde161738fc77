"""
This module defines PiecewiseLinear and its nondecreasing specialization MonotoneFn.

Both store breakpoints with separate left and right limits so jumps are represented
exactly. Between two breakpoints the function is linear; outside the breakpoint range it
extends linearly with a configurable slope (zero by default).
"""



from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import DomainError, InputError



def _frozen(values):
    array = np.array(values, dtype=float).ravel()
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class PiecewiseLinear:
    """A piecewise-linear function with jumps.

    Attributes:
        xs (np.ndarray): Strictly increasing breakpoints.
        value_left (np.ndarray): Left limit at each breakpoint.
        value_right (np.ndarray): Right limit at each breakpoint.
        continuity (str): "right" if the value at a breakpoint is its right limit, "left" otherwise.
        left_slope (float): Slope of the extension left of the first breakpoint.
        right_slope (float): Slope of the extension right of the last breakpoint.
    """
    xs: np.ndarray
    value_left: np.ndarray
    value_right: np.ndarray
    continuity: str = "right"
    left_slope: float = 0.0
    right_slope: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "xs", _frozen(self.xs))
        object.__setattr__(self, "value_left", _frozen(self.value_left))
        object.__setattr__(self, "value_right", _frozen(self.value_right))
        object.__setattr__(self, "left_slope", float(self.left_slope))
        object.__setattr__(self, "right_slope", float(self.right_slope))

        if self.continuity not in ("right", "left"):
            raise InputError(f"Unknown continuity convention: {self.continuity}")
        if self.xs.size == 0:
            raise InputError("A piecewise-linear function needs at least one breakpoint")
        if not (self.xs.size == self.value_left.size == self.value_right.size):
            raise InputError("Breakpoints and limits must have the same length")
        if np.any(np.diff(self.xs) <= 0):
            raise InputError("Breakpoints must be strictly increasing")
        if not (np.all(np.isfinite(self.xs)) and np.all(np.isfinite(self.value_left))
                and np.all(np.isfinite(self.value_right))):
            raise InputError("Breakpoints and values must be finite")

    @classmethod
    def from_points(cls, xs, ys, left_slope: float=0.0, right_slope: float=0.0):
        """Builds a continuous interpolant through the points (xs, ys)."""
        return cls(xs=xs, value_left=ys, value_right=ys, left_slope=left_slope, right_slope=right_slope)

    def __len__(self):
        return int(self.xs.size)

    def __call__(self, x):
        """Evaluates the function, honoring the continuity convention at breakpoints."""
        scalar = np.ndim(x) == 0
        x = np.asarray(x, dtype=float)
        flat = x.ravel()

        xs, vl, vr = self.xs, self.value_left, self.value_right
        last = xs.size - 1
        k = np.searchsorted(xs, flat, side="right") - 1
        out = np.empty_like(flat)

        below = k < 0
        out[below] = vl[0] + self.left_slope * (flat[below] - xs[0])

        above = k >= last
        out[above] = vr[last] + self.right_slope * (flat[above] - xs[last])

        inside = ~below & ~above
        kk = k[inside]
        if kk.size:
            x0, x1 = xs[kk], xs[kk + 1]
            y0, y1 = vr[kk], vl[kk + 1]
            out[inside] = y0 + (flat[inside] - x0) / (x1 - x0) * (y1 - y0)

        ## Values exactly at breakpoints follow the continuity convention.
        kc = np.clip(k, 0, last)
        hit = (k >= 0) & (flat == xs[kc])
        out[hit] = vr[kc[hit]] if self.continuity == "right" else vl[kc[hit]]

        out = out.reshape(x.shape)
        return float(out) if scalar else out

    def limits(self, x):
        """Returns the (left limit, right limit) pair at each x."""
        x = np.asarray(x, dtype=float)
        flat = x.ravel()
        left = np.asarray(self.continuous_part(flat), dtype=float)
        right = left.copy()

        idx = np.searchsorted(self.xs, flat)
        idx_c = np.clip(idx, 0, self.xs.size - 1)
        hit = (idx < self.xs.size) & (self.xs[idx_c] == flat)
        left[hit] = self.value_left[idx_c[hit]]
        right[hit] = self.value_right[idx_c[hit]]

        return left.reshape(x.shape), right.reshape(x.shape)

    def continuous_part(self, x):
        """Evaluates with the convention irrelevant, i.e. off breakpoints."""
        scalar = np.ndim(x) == 0
        values = np.atleast_1d(self(x))
        return float(values[0]) if scalar else values

    def slopes(self):
        """Returns the slopes of the linear pieces between consecutive breakpoints."""
        return (self.value_left[1:] - self.value_right[:-1]) / np.diff(self.xs)

    def jumps(self):
        """Returns the jump `value_right - value_left` at every breakpoint."""
        return self.value_right - self.value_left

    def is_continuous(self, tol: float=0.0):
        return bool(np.all(np.abs(self.jumps()) <= tol))

    def antiderivative(self, x):
        """Evaluates the antiderivative that vanishes at the first breakpoint."""
        x = np.asarray(x, dtype=float)
        flat = x.ravel()

        xs, vl, vr = self.xs, self.value_left, self.value_right
        last = xs.size - 1
        widths = np.diff(xs)
        cumulative = np.concatenate(([0.0], np.cumsum(0.5 * (vr[:-1] + vl[1:]) * widths)))

        k = np.searchsorted(xs, flat, side="right") - 1
        out = np.empty_like(flat)

        below = k < 0
        d = flat[below] - xs[0]
        out[below] = vl[0] * d + 0.5 * self.left_slope * d * d

        above = k >= last
        d = flat[above] - xs[last]
        out[above] = cumulative[last] + vr[last] * d + 0.5 * self.right_slope * d * d

        inside = ~below & ~above
        kk = k[inside]
        if kk.size:
            d = flat[inside] - xs[kk]
            slope = (vl[kk + 1] - vr[kk]) / widths[kk]
            out[inside] = cumulative[kk] + vr[kk] * d + 0.5 * slope * d * d

        return out.reshape(x.shape)

    def integral(self, a: float, b: float):
        """Exact integral over [a, b]."""
        values = self.antiderivative(np.array([a, b], dtype=float))
        return float(values[1] - values[0])

    def l1_norm(self):
        """Exact integral of |f| over the breakpoint hull [xs[0], xs[-1]].

        Pieces whose end values have opposite signs are split at their root.
        """
        if self.xs.size < 2:
            return 0.0

        widths = np.diff(self.xs)
        y0 = self.value_right[:-1]
        y1 = self.value_left[1:]
        a0, a1 = np.abs(y0), np.abs(y1)

        same_sign = y0 * y1 >= 0
        total = a0 + a1
        safe = np.where(total > 0, total, 1.0)
        pieces = np.where(
            same_sign,
            0.5 * widths * total,
            0.5 * widths * (y0 * y0 + y1 * y1) / safe)

        return float(np.sum(pieces))

    def sup_norm(self):
        """Largest absolute value over the breakpoint hull."""
        return float(max(np.max(np.abs(self.value_left)), np.max(np.abs(self.value_right))))

    def add(self, other: "PiecewiseLinear", sign: float=1.0):
        """Returns `self + sign * other` over the union of breakpoints."""
        if other.continuity != self.continuity:
            raise InputError("Cannot add functions with different continuity conventions")

        xs = np.union1d(self.xs, other.xs)
        l1, r1 = self.limits(xs)
        l2, r2 = other.limits(xs)

        return PiecewiseLinear(
            xs=xs,
            value_left=l1 + sign * l2,
            value_right=r1 + sign * r2,
            continuity=self.continuity,
            left_slope=self.left_slope + sign * other.left_slope,
            right_slope=self.right_slope + sign * other.right_slope)

    def __add__(self, other: "PiecewiseLinear"):
        return self.add(other)

    def __sub__(self, other: "PiecewiseLinear"):
        return self.add(other, sign=-1.0)

    def __str__(self):
        return f"PiecewiseLinear({self.xs.size} breakpoints, {self.continuity}-continuous)"


@dataclass(frozen=True, eq=False)
class MonotoneFn(PiecewiseLinear):
    """A nondecreasing piecewise-linear function with jump bookkeeping.

    Houses distribution functions (right-continuous) and quantile functions
    (left-continuous, defined on (0, total mass]).

    Attributes:
        domain (tuple[float, float]|None): Half-open domain (lo, hi] outside of which evaluation
            raises a DomainError. None means the whole real line.
    """
    domain: Optional[tuple[float, float]] = None

    def __post_init__(self):
        super().__post_init__()

        tol = 1e-12 * max(1.0, float(np.max(np.abs(self.value_right))))
        if np.any(self.value_left > self.value_right + tol):
            raise InputError("A monotone function cannot jump down")
        if np.any(self.value_right[:-1] > self.value_left[1:] + tol):
            raise InputError("A monotone function cannot decrease between breakpoints")
        if self.left_slope < 0 or self.right_slope < 0:
            raise InputError("Extension slopes of a monotone function must be nonnegative")

    def _check_domain(self, x):
        if self.domain is None:
            return
        lo, hi = self.domain
        x = np.asarray(x, dtype=float)
        if np.any(x <= lo) or np.any(x > hi):
            raise DomainError(f"Evaluation outside the domain ({lo}, {hi}]")

    def __call__(self, x):
        self._check_domain(x)
        return super().__call__(x)

    def limits(self, x):
        ## Limits are taken on the closure of the domain, so no domain check here.
        return super().limits(x)

    def continuous_part(self, x):
        return PiecewiseLinear.__call__(self, x)
