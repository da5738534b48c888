"""Characteristic curves of dx/dt = c(x, t) and their geometry.

Two independent integration routes are kept deliberately separate: a
vectorized fixed-step RK4 (`integrate_characteristic`, `flow_map`) and a
global Picard iteration on a fixed time lattice
(`picard_characteristic_oracle`).  They share no code path, so agreement
between them is evidence, not tautology.

`determinacy_domain` builds the shrinking trapezoid on which a solution
of a hyperbolic problem with speed bound `c_max` is determined by data
on the base interval.  `ArclengthChart` handles the unit-speed
parametrization of a graph curve, used when the characteristic flow is
prescribed through arclength rather than through an ODE.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .errors import (
    DomainEscapeError,
    EmptyDomainError,
    IterationLimitError,
    ParameterError,
)
from .smooth import Field1D, Field2D, Interval

DEFAULT_MIN_STEPS = 64
ROUGH_STEP_FRACTION = 1.0 / 16.0  # of the field's intrinsic scale


def _step_count(speed: Field2D, t0: float, t1: float, n_steps: int | None) -> int:
    if n_steps is not None:
        if n_steps < 1:
            raise ParameterError("n_steps must be >= 1")
        return int(n_steps)
    span = abs(t1 - t0)
    if span == 0.0:
        return 1
    n = DEFAULT_MIN_STEPS
    scale = getattr(speed, "scale", None)
    if scale is not None and np.isfinite(scale):
        n = max(n, int(np.ceil(span / (scale * ROUGH_STEP_FRACTION))))
    return n


def _clip_to_domain(speed: Field2D, x: np.ndarray, t: float):
    dom = speed.domain
    xc = np.clip(x, dom.x.lo, dom.x.hi)
    tc = min(max(t, dom.t.lo), dom.t.hi)
    return xc, tc


def _rk4_sweep(speed: Field2D, xs0: np.ndarray, t0: float, t1: float, n: int):
    """March all walkers together; freeze any that leave the x-domain.

    Returns (positions at every level, alive mask, first escape time).
    Stage points are clipped to the domain so the field never sees
    out-of-range queries; escape is judged on the unclipped update.
    """
    h = (t1 - t0) / n
    dom = speed.domain
    xs = np.array(xs0, dtype=float)
    alive = np.ones(xs.shape, dtype=bool)
    first_exit = np.inf
    levels = np.empty((n + 1,) + xs.shape)
    levels[0] = xs

    def f(x, t):
        xc, tc = _clip_to_domain(speed, x, t)
        return speed.values(xc, np.full_like(xc, tc))

    for k in range(n):
        t = t0 + k * h
        k1 = f(xs, t)
        k2 = f(xs + 0.5 * h * k1, t + 0.5 * h)
        k3 = f(xs + 0.5 * h * k2, t + 0.5 * h)
        k4 = f(xs + h * k3, t + h)
        step = xs + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        nxt = np.where(alive, step, xs)
        escaped = alive & ((nxt < dom.x.lo) | (nxt > dom.x.hi))
        if np.any(escaped):
            first_exit = min(first_exit, t + h)
            alive = alive & ~escaped
        xs = np.where(alive, nxt, xs)
        levels[k + 1] = xs
    return levels, alive, first_exit


def integrate_characteristic(
    speed: Field2D,
    x0: float,
    t0: float,
    t1: float,
    n_steps: int | None = None,
):
    """RK4 path of dx/dt = c(x,t) from (x0, t0) to time t1.

    Returns (ts, xs) arrays of length n+1.  Raises DomainEscapeError
    (with the approximate exit time attached) if the path leaves the
    x-extent of the speed field's domain.
    """
    n = _step_count(speed, t0, t1, n_steps)
    levels, alive, exit_t = _rk4_sweep(speed, np.array([x0]), t0, t1, n)
    if not alive[0]:
        raise DomainEscapeError(
            f"characteristic from x0={x0} left the domain near t={exit_t:.6g}",
            exit_time=exit_t,
        )
    ts = np.linspace(t0, t1, n + 1)
    return ts, levels[:, 0]


def flow_map(
    speed: Field2D,
    xs: np.ndarray,
    t0: float,
    t1: float,
    n_steps: int | None = None,
) -> np.ndarray:
    """Endpoint positions of the characteristic flow for many starts at once."""
    xs = np.asarray(xs, dtype=float)
    n = _step_count(speed, t0, t1, n_steps)
    levels, alive, exit_t = _rk4_sweep(speed, xs, t0, t1, n)
    if not np.all(alive):
        raise DomainEscapeError(
            f"{np.count_nonzero(~alive)} characteristic(s) left the domain "
            f"near t={exit_t:.6g}",
            exit_time=exit_t,
        )
    return levels[-1]


def flow_levels(
    speed: Field2D,
    xs: np.ndarray,
    t0: float,
    t1: float,
    n_steps: int,
) -> np.ndarray:
    """Positions at every RK4 level, shape (n_steps+1, len(xs)).

    Escaped walkers freeze at their last interior position instead of
    raising; callers that tabulate past the determinacy region must
    quarantine those entries themselves.
    """
    xs = np.asarray(xs, dtype=float)
    levels, _, _ = _rk4_sweep(speed, xs, t0, t1, int(n_steps))
    return levels


@dataclass
class PicardResult:
    ts: np.ndarray
    xs: np.ndarray
    gaps: np.ndarray  # sup-norm update sizes per iteration

    @property
    def endpoint(self) -> float:
        return float(self.xs[-1])


def picard_characteristic_oracle(
    speed: Field2D,
    x0: float,
    t0: float,
    t1: float,
    n_nodes: int = 513,
    tol: float = 1e-12,
    max_iter: int = 400,
) -> PicardResult:
    """Fixed-point route: x(t) = x0 + integral of c(x(s), s) ds.

    Trapezoid quadrature on a fixed time lattice, iterated from the
    constant path.  Independent of the RK4 marcher by construction.
    """
    if n_nodes < 2:
        raise ParameterError("need at least two time nodes")
    ts = np.linspace(t0, t1, n_nodes)
    dom = speed.domain
    xs = np.full(n_nodes, float(x0))
    gaps = []
    for _ in range(max_iter):
        xc = np.clip(xs, dom.x.lo, dom.x.hi)
        rhs = speed.values(xc, ts)
        new = x0 + cumulative_trapezoid(rhs, ts, initial=0.0)
        gap = float(np.max(np.abs(new - xs)))
        gaps.append(gap)
        xs = new
        if gap <= tol:
            break
    else:
        raise IterationLimitError(
            f"picard iteration did not reach {tol} in {max_iter} sweeps "
            f"(last update {gaps[-1]:.3g})"
        )
    if np.any(xs < dom.x.lo) or np.any(xs > dom.x.hi):
        bad = np.argmax((xs < dom.x.lo) | (xs > dom.x.hi))
        raise DomainEscapeError(
            f"picard path left the domain near t={ts[bad]:.6g}",
            exit_time=float(ts[bad]),
        )
    return PicardResult(ts=ts, xs=xs, gaps=np.array(gaps))


@dataclass(frozen=True)
class DeterminacyTrapezoid:
    """Shrinking influence region over a base interval.

    At time t the determined interval is the base shrunk by
    speed_bound * |t| from both ends.  Symmetric in t, so backward
    solves reuse the same object.
    """

    base: Interval
    speed_bound: float
    horizon: float

    @property
    def max_time(self) -> float:
        return self.base.width / (2.0 * self.speed_bound)

    def interval_at(self, t: float) -> Interval:
        inset = self.speed_bound * abs(t)
        lo = self.base.lo + inset
        hi = self.base.hi - inset
        if lo >= hi:
            raise EmptyDomainError(
                f"determinacy region is empty at |t|={abs(t):.6g} "
                f"(collapses at {self.max_time:.6g})"
            )
        return Interval(lo, hi)

    def contains(self, x, t) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        inset = self.speed_bound * np.abs(t)
        return (x >= self.base.lo + inset) & (x <= self.base.hi - inset)


def determinacy_domain(
    speed: Field2D,
    base: Interval,
    horizon: float,
    samples: int = 512,
    safety: float = 1.01,
) -> DeterminacyTrapezoid:
    """Trapezoid from a sampled speed bound.

    The bound is sup |c| over a lattice on base x [-horizon, horizon],
    inflated by `safety`.  Raises EmptyDomainError up front if the
    trapezoid collapses before the requested horizon.
    """
    if horizon <= 0.0:
        raise ParameterError("horizon must be positive")
    xs = np.linspace(base.lo, base.hi, samples)
    t_lo = max(-horizon, speed.domain.t.lo)
    t_hi = min(horizon, speed.domain.t.hi)
    ts = np.linspace(t_lo, t_hi, min(samples, 129))
    sup = 0.0
    for t in ts:
        sup = max(sup, float(np.max(np.abs(speed.values(xs, np.full_like(xs, t))))))
    bound = safety * sup
    if bound == 0.0:
        bound = 1e-30  # zero speed: region never shrinks
    trap = DeterminacyTrapezoid(base=base, speed_bound=bound, horizon=horizon)
    if horizon >= trap.max_time:
        raise EmptyDomainError(
            f"horizon {horizon} reaches past the determinacy collapse time "
            f"{trap.max_time:.6g} for speed bound {bound:.6g}"
        )
    return trap


class ArclengthChart:
    """Unit-speed travel along the graph of a C^1 curve.

    Given a curve field c on an interval, the chart tabulates the
    arclength L(x) = integral of sqrt(1 + c'(x)^2) and inverts it.
    Both L and its inverse are piecewise linear on the same breakpoints,
    so inversion by interpolation is exact up to roundoff.
    """

    def __init__(self, curve: Field1D, n_nodes: int = 4097):
        if n_nodes < 3:
            raise ParameterError("need at least three arclength nodes")
        dom = curve.domain
        xs = np.linspace(dom.lo, dom.hi, n_nodes)
        slopes = curve.values(xs, order=1)
        weight = np.sqrt(1.0 + slopes**2)
        self.xs = xs
        self.lengths = cumulative_trapezoid(weight, xs, initial=0.0)
        self.curve = curve

    def length(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if np.any(x < self.xs[0]) or np.any(x > self.xs[-1]):
            raise DomainEscapeError("arclength query outside the chart interval")
        return np.interp(x, self.xs, self.lengths)

    def position(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        if np.any(s < self.lengths[0]) or np.any(s > self.lengths[-1]):
            raise DomainEscapeError("inverse arclength query outside the chart")
        return np.interp(s, self.lengths, self.xs)

    def gamma(self, x, t: float, sign: int) -> np.ndarray:
        """Foot of the characteristic through (x, t): L^{-1}(L(x) -+ t).

        sign +1 moves left along the curve as t grows (right-moving
        family), sign -1 the opposite.  |gamma - x| <= |t| always,
        because L has slope >= 1.
        """
        if sign not in (-1, 1):
            raise ParameterError("sign must be -1 or +1")
        return self.position(self.length(x) - sign * t)
