"""Differentiable field interfaces used by the solvers.

A Field1D maps x to values; a Field2D maps (x, t).  Both carry a safe
evaluation domain and answer derivative queries up to the order they
support.  Analytic fields wrap closed-form callables; transformed fields
apply pointwise functions to parent fields (value queries only); the
embedded fields produced by :mod:`roughwave.mollify` plug into the same
interface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, ParameterError


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.hi > self.lo:
            raise ParameterError(f"empty interval [{self.lo}, {self.hi}]")

    def contains(self, x, tol: float = 1e-9) -> bool:
        x = np.asarray(x)
        return bool(np.all(x >= self.lo - tol) and np.all(x <= self.hi + tol))

    def intersect(self, other: "Interval") -> "Interval":
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    @property
    def width(self) -> float:
        return self.hi - self.lo


FULL_LINE = Interval(-1e30, 1e30)


@dataclass(frozen=True)
class Rect:
    x: Interval
    t: Interval

    def contains(self, x, t, tol: float = 1e-9) -> bool:
        return self.x.contains(x, tol) and self.t.contains(t, tol)

    def intersect(self, other: "Rect") -> "Rect":
        return Rect(self.x.intersect(other.x), self.t.intersect(other.t))


FULL_PLANE = Rect(FULL_LINE, FULL_LINE)


@dataclass(frozen=True)
class Provenance:
    """Where a smoothed field came from: scale, seed and source tag."""

    eps: float | None = None
    seed: int | None = None
    source: str = ""


class Field1D:
    """Base: callable field of one variable with derivative queries."""

    domain: Interval = FULL_LINE
    scale: float | None = None  # smoothing scale, when meaningful
    provenance: Provenance | None = None

    def values(self, x, order: int = 0) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, x):
        return self.values(x, 0)

    def check_domain(self, x):
        if not self.domain.contains(x):
            lo = float(np.min(x)) if np.size(x) else math.nan
            hi = float(np.max(x)) if np.size(x) else math.nan
            raise DomainError(
                f"evaluation range [{lo}, {hi}] outside safe domain "
                f"[{self.domain.lo}, {self.domain.hi}]"
            )

    def integral(self, a: float, b: float) -> float:
        """Definite integral; dense Simpson fallback."""
        return _simpson_integral(self, a, b)


def _simpson_integral(field: Field1D, a: float, b: float) -> float:
    if a == b:
        return 0.0
    step = field.scale / 8.0 if field.scale else abs(b - a) / 256.0
    n = max(4, 2 * int(np.ceil(abs(b - a) / (2.0 * step))))
    xs = np.linspace(a, b, n + 1)
    ys = field.values(xs)
    h = (b - a) / n
    return float(h / 3.0 * (ys[0] + ys[-1] + 4.0 * ys[1:-1:2].sum() + 2.0 * ys[2:-1:2].sum()))


class AnalyticField1D(Field1D):
    """Closed-form field: one callable per derivative order.

    fns[k] evaluates the k-th derivative.  Orders beyond the supplied
    list raise.  An optional antiderivative callable makes definite
    integrals exact.
    """

    def __init__(
        self,
        fns: Sequence[Callable[[np.ndarray], np.ndarray]],
        domain: Interval = FULL_LINE,
        antiderivative: Callable[[np.ndarray], np.ndarray] | None = None,
        scale: float | None = None,
    ):
        if not fns:
            raise ParameterError("need at least the order-0 callable")
        self._fns = list(fns)
        self.domain = domain
        self._antideriv = antiderivative
        self.scale = scale

    def values(self, x, order: int = 0) -> np.ndarray:
        if order >= len(self._fns):
            raise ParameterError(
                f"field provides derivatives up to order {len(self._fns) - 1}, got {order}"
            )
        x = np.asarray(x, dtype=float)
        self.check_domain(x)
        out = self._fns[order](x)
        return np.broadcast_to(np.asarray(out, dtype=float), x.shape).copy()

    def integral(self, a: float, b: float) -> float:
        if self._antideriv is not None:
            return float(self._antideriv(b) - self._antideriv(a))
        return _simpson_integral(self, a, b)


def constant_field_1d(c: float) -> AnalyticField1D:
    return AnalyticField1D(
        [lambda x: np.full_like(x, c), lambda x: np.zeros_like(x)],
        antiderivative=lambda x: c * x,
    )


class InterpField1D(Field1D):
    """Piecewise-linear interpolant of a tabulation (order 0 only)."""

    def __init__(self, nodes: np.ndarray, values: np.ndarray, provenance=None):
        nodes = np.asarray(nodes, dtype=float)
        vals = np.asarray(values, dtype=float)
        if nodes.ndim != 1 or nodes.shape != vals.shape:
            raise ParameterError("nodes and values must be matching 1d arrays")
        self._nodes = nodes
        self._values = vals
        self.domain = Interval(float(nodes[0]), float(nodes[-1]))
        self.provenance = provenance

    def values(self, x, order: int = 0) -> np.ndarray:
        if order != 0:
            raise ParameterError("interpolated field supports order 0 only")
        x = np.asarray(x, dtype=float)
        self.check_domain(x)
        return np.interp(x, self._nodes, self._values)


class CallableField1D(Field1D):
    """Arbitrary fn(x), value queries only.

    For closures over other fields (say, combining several embedded
    fields and their derivatives) where the values-of-parents plumbing
    of TransformedField1D is too narrow.  Domain and scale are the
    caller's responsibility.
    """

    def __init__(self, fn, domain: Interval = FULL_LINE, scale: float | None = None):
        self._fn = fn
        self.domain = domain
        self.scale = scale

    def values(self, x, order: int = 0) -> np.ndarray:
        if order != 0:
            raise ParameterError("callable field supports order 0 only")
        x = np.asarray(x, dtype=float)
        self.check_domain(x)
        return np.asarray(self._fn(x), dtype=float)


class ShiftedField1D(Field1D):
    """The parent field translated: values(x, k) = parent(x - shift, k)."""

    def __init__(self, parent: Field1D, shift: float):
        self._parent = parent
        self.shift = float(shift)
        self.domain = Interval(parent.domain.lo + shift, parent.domain.hi + shift)
        self.scale = parent.scale
        self.provenance = parent.provenance

    def values(self, x, order: int = 0) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self._parent.values(x - self.shift, order)

    def integral(self, a: float, b: float) -> float:
        return self._parent.integral(a - self.shift, b - self.shift)


class TransformedField1D(Field1D):
    """fn applied pointwise to parent field values (order 0 only)."""

    def __init__(self, fn: Callable[..., np.ndarray], *parents: Field1D):
        if not parents:
            raise ParameterError("need at least one parent field")
        self._fn = fn
        self._parents = parents
        dom = parents[0].domain
        for p in parents[1:]:
            dom = dom.intersect(p.domain)
        self.domain = dom
        scales = [p.scale for p in parents if p.scale is not None]
        self.scale = min(scales) if scales else None

    def values(self, x, order: int = 0) -> np.ndarray:
        if order != 0:
            raise ParameterError("transformed field supports order 0 only")
        x = np.asarray(x, dtype=float)
        vals = [p.values(x) for p in self._parents]
        return np.asarray(self._fn(*vals), dtype=float)


class Field2D:
    """Base: field of (x, t) with partial-derivative queries."""

    domain: Rect = FULL_PLANE
    t_independent: bool = False
    scale: float | None = None
    provenance: Provenance | None = None

    def values(self, x, t, dx: int = 0, dt: int = 0) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, x, t):
        return self.values(x, t, 0, 0)

    def check_domain(self, x, t):
        if not self.domain.contains(x, t):
            raise DomainError("evaluation outside the field's safe rectangle")

    def at_time(self, t0: float) -> "SliceField1D":
        return SliceField1D(self, t0)


class ConstantField2D(Field2D):
    def __init__(self, c: float, domain: Rect | None = None):
        self.c = float(c)
        self.t_independent = True
        if domain is not None:
            self.domain = domain

    def values(self, x, t, dx: int = 0, dt: int = 0) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out_shape = np.broadcast_shapes(x.shape, np.asarray(t).shape)
        if dx == 0 and dt == 0:
            return np.full(out_shape, self.c)
        return np.zeros(out_shape)


ZERO_2D = ConstantField2D(0.0)


def is_zero_field(f: Field2D | None) -> bool:
    return f is None or (isinstance(f, ConstantField2D) and f.c == 0.0)


class AnalyticField2D(Field2D):
    """Closed-form field of (x, t); fn_table maps (dx, dt) to a callable."""

    def __init__(
        self,
        fn_table: dict[tuple[int, int], Callable[[np.ndarray, np.ndarray], np.ndarray]],
        domain: Rect = FULL_PLANE,
        t_independent: bool = False,
    ):
        if (0, 0) not in fn_table:
            raise ParameterError("fn_table must provide the (0, 0) entry")
        self._fns = dict(fn_table)
        self.domain = domain
        self.t_independent = t_independent

    def values(self, x, t, dx: int = 0, dt: int = 0) -> np.ndarray:
        if (dx, dt) not in self._fns:
            raise ParameterError(f"no callable for derivative order ({dx}, {dt})")
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        self.check_domain(x, t)
        out = self._fns[(dx, dt)](x, t)
        shape = np.broadcast_shapes(x.shape, t.shape)
        return np.broadcast_to(np.asarray(out, dtype=float), shape).copy()


class FromX(Field2D):
    """Lift a Field1D of x into the plane (constant in t)."""

    def __init__(self, f: Field1D):
        self._f = f
        self.domain = Rect(f.domain, FULL_LINE)
        self.t_independent = True
        self.scale = f.scale
        self.provenance = f.provenance

    def values(self, x, t, dx: int = 0, dt: int = 0) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        shape = np.broadcast_shapes(x.shape, np.asarray(t).shape)
        if dt > 0:
            return np.zeros(shape)
        out = self._f.values(x, dx)
        return np.broadcast_to(out, shape).copy()


class FromT(Field2D):
    """Lift a Field1D of t into the plane (constant in x)."""

    def __init__(self, f: Field1D):
        self._f = f
        self.domain = Rect(FULL_LINE, f.domain)
        self.scale = f.scale
        self.provenance = f.provenance

    def values(self, x, t, dx: int = 0, dt: int = 0) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        shape = np.broadcast_shapes(np.asarray(x).shape, t.shape)
        if dx > 0:
            return np.zeros(shape)
        out = self._f.values(t, dt)
        return np.broadcast_to(out, shape).copy()


class CallableField2D(Field2D):
    """Arbitrary fn(x, t), value queries only; metadata from the caller."""

    def __init__(
        self,
        fn,
        domain: Rect = FULL_PLANE,
        t_independent: bool = False,
        scale: float | None = None,
    ):
        self._fn = fn
        self.domain = domain
        self.t_independent = t_independent
        self.scale = scale

    def values(self, x, t, dx: int = 0, dt: int = 0) -> np.ndarray:
        if dx or dt:
            raise ParameterError("callable field supports value queries only")
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        return np.asarray(self._fn(x, t), dtype=float)


class TransformedField2D(Field2D):
    """fn applied pointwise to parent field values (value queries only)."""

    def __init__(self, fn: Callable[..., np.ndarray], *parents: Field2D):
        if not parents:
            raise ParameterError("need at least one parent field")
        self._fn = fn
        self._parents = parents
        dom = parents[0].domain
        for p in parents[1:]:
            dom = dom.intersect(p.domain)
        self.domain = dom
        self.t_independent = all(p.t_independent for p in parents)
        scales = [p.scale for p in parents if p.scale is not None]
        self.scale = min(scales) if scales else None

    def values(self, x, t, dx: int = 0, dt: int = 0) -> np.ndarray:
        if dx or dt:
            raise ParameterError("transformed field supports value queries only")
        vals = [p.values(x, t) for p in self._parents]
        return np.asarray(self._fn(*vals), dtype=float)


class DerivView2D(Field2D):
    """View of a parent field with a fixed derivative offset."""

    def __init__(self, parent: Field2D, dx: int = 0, dt: int = 0):
        self._parent = parent
        self._dx = dx
        self._dt = dt
        self.domain = parent.domain
        self.t_independent = parent.t_independent
        self.scale = parent.scale
        self.provenance = parent.provenance

    def values(self, x, t, dx: int = 0, dt: int = 0) -> np.ndarray:
        return self._parent.values(x, t, dx + self._dx, dt + self._dt)


class SliceField1D(Field1D):
    """Restriction of a Field2D to a fixed time."""

    def __init__(self, parent: Field2D, t0: float):
        self._parent = parent
        self._t0 = float(t0)
        self.domain = parent.domain.x
        self.scale = parent.scale
        self.provenance = parent.provenance

    def values(self, x, order: int = 0) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self._parent.values(x, np.full(x.shape, self._t0), dx=order)
