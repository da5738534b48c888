"""Solver for diagonal first-order hyperbolic systems.

The problem class is

    (d/dt + lambda_i(x,t) d/dx) u_i = sum_j F_ij(x,t) u_j + g_i(x,t),
    u_i(x, 0) = data_i(x),

solved by a global Picard iteration in integral form: every sweep
rebuilds each component as its initial datum carried along the i-th
characteristic plus the time integral of the coupled right-hand side
along that characteristic (trapezoid rule on the time lattice).  The
data term is evaluated at the characteristic feet exactly, never
interpolated, so repeated sweeps do not compound interpolation error;
only the right-hand side reads the previous iterate through linear
interpolation in x.

Characteristic feet come from per-component backward flow tables.  When
every speed is time-independent the table is a single (levels x nodes)
array built by composing exact RK4 backsteps, valid for any anchor
level; the sweep then vectorizes over anchor levels at fixed feet
depth.  Time-dependent speeds fall back to one triangle of feet per
anchor level, which is quadratically bigger and served by a plain
per-level loop; a memory guard refuses silly sizes.

Values on the tabulation rectangle outside the domain of determinacy of
the base interval are garbage by construction (feet are clamped).  The
returned SolutionField carries the determinacy trapezoid and refuses
point queries outside it; convergence gaps are measured inside it only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .characteristics import DeterminacyTrapezoid, determinacy_domain
from .errors import (
    DomainError,
    InvertibilityError,
    IterationLimitError,
    ParameterError,
    ShapeMismatchError,
)
from .grids import Grid1D
from .smooth import (
    CallableField1D,
    CallableField2D,
    ConstantField2D,
    Field1D,
    Field2D,
    Interval,
    ShiftedField1D,
    TransformedField2D,
    is_zero_field,
)

GENERAL_PATH_BYTE_CAP = 2 * 10**8
AUDIT_FACTOR = 10.0


@dataclass
class HyperbolicProblem:
    """Speeds, coupling matrix, forcing and level-zero data, all as fields.

    coupling[i][j] and forcing[i] may be None for an identically zero
    entry; the solver skips the work those entries would cost.
    """

    speeds: list
    coupling: list
    forcing: list
    data: list

    def __post_init__(self):
        n = len(self.speeds)
        if n == 0:
            raise ParameterError("system needs at least one component")
        if len(self.coupling) != n or any(len(row) != n for row in self.coupling):
            raise ShapeMismatchError(f"coupling must be {n}x{n}")
        if len(self.forcing) != n:
            raise ShapeMismatchError(f"forcing must have {n} entries")
        if len(self.data) != n:
            raise ShapeMismatchError(f"data must have {n} entries")

    @property
    def size(self) -> int:
        return len(self.speeds)

    def speed_bound_field(self) -> Field2D:
        """Pointwise max of |lambda_i|, used to size determinacy regions."""
        return TransformedField2D(
            lambda *vals: np.maximum.reduce([np.abs(v) for v in vals]),
            *self.speeds,
        )


class SolutionField:
    """Component tables on a space-time lattice plus the trusted region."""

    def __init__(self, x_grid: Grid1D, t_nodes, tables, trust, iterations, gaps, audit_gap):
        self.x_grid = x_grid
        self.t_nodes = np.asarray(t_nodes, dtype=float)
        self.tables = tables  # list of (nx, nt) arrays
        self.trust = trust
        self.iterations = iterations
        self.gaps = np.asarray(gaps, dtype=float)
        self.audit_gap = float(audit_gap)

    @property
    def size(self) -> int:
        return len(self.tables)

    def level_index(self, t: float) -> int:
        k = int(np.argmin(np.abs(self.t_nodes - t)))
        if abs(self.t_nodes[k] - t) > 1e-9 * max(1.0, abs(t)):
            raise ParameterError(f"t={t} is not a lattice level")
        return k

    def on_level(self, component: int, t: float):
        """Nodes and values inside the trust region at one time level."""
        k = self.level_index(t)
        xs = self.x_grid.nodes()
        mask = self.trust.contains(xs, self.t_nodes[k])
        return xs[mask], self.tables[component][mask, k]

    def values(self, component: int, x, t) -> np.ndarray:
        """Bilinear interpolation, restricted to the trust trapezoid."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        t = np.broadcast_to(np.asarray(t, dtype=float), x.shape)
        if not np.all(self.trust.contains(x, t)):
            raise DomainError("query outside the solution's trusted trapezoid")
        tn = self.t_nodes
        kf = np.clip(np.searchsorted(tn, t, side="right") - 1, 0, len(tn) - 2)
        frac = np.clip((t - tn[kf]) / (tn[kf + 1] - tn[kf]), 0.0, 1.0)
        tab = self.tables[component]
        xs = self.x_grid.nodes()
        out = np.empty_like(x)
        for k in np.unique(kf):
            sel = kf == k
            lo = np.interp(x[sel], xs, tab[:, k])
            hi = np.interp(x[sel], xs, tab[:, k + 1])
            out[sel] = (1.0 - frac[sel]) * lo + frac[sel] * hi
        return out


def _substeps(speed: Field2D, dt: float) -> int:
    scale = getattr(speed, "scale", None)
    if scale is None or not np.isfinite(scale):
        return 1
    return max(1, int(np.ceil(dt / (scale / 16.0))))


def _backstep(speed: Field2D, xs: np.ndarray, t_from: float, t_to: float, nsub: int):
    """RK4 flow of dx/dt = lambda from t_from to t_to (t_to < t_from)."""
    h = (t_to - t_from) / nsub
    dom = speed.domain
    cur = xs
    for m in range(nsub):
        t = t_from + m * h

        def f(x, tt):
            xc = np.clip(x, dom.x.lo, dom.x.hi)
            tc = min(max(tt, dom.t.lo), dom.t.hi)
            return speed.values(xc, np.full_like(xc, tc))

        k1 = f(cur, t)
        k2 = f(cur + 0.5 * h * k1, t + 0.5 * h)
        k3 = f(cur + 0.5 * h * k2, t + 0.5 * h)
        k4 = f(cur + h * k3, t + h)
        cur = cur + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return cur


class _FeetTables:
    """Backward characteristic feet for every component.

    Autonomous speeds: feet[i][m] is the position after m backward
    levels starting from the grid nodes, independent of the anchor
    level.  General speeds: feet_at(i, k, m) is the position at level
    k - m of the i-th characteristic anchored at the nodes on level k.
    """

    def __init__(self, problem, x_nodes, t_nodes, base: Interval):
        self.x_nodes = x_nodes
        self.t_nodes = t_nodes
        self.lo, self.hi = base.lo, base.hi
        self.autonomous = all(
            getattr(s, "t_independent", False) for s in problem.speeds
        )
        K = len(t_nodes) - 1
        dt = t_nodes[1] - t_nodes[0] if K > 0 else 0.0
        self.tables = []
        if self.autonomous:
            for s in problem.speeds:
                nsub = _substeps(s, abs(dt)) if K > 0 else 1
                tab = np.empty((K + 1, len(x_nodes)))
                tab[0] = x_nodes
                for m in range(K):
                    stepped = _backstep(s, tab[m], t_nodes[1], t_nodes[0], nsub)
                    tab[m + 1] = np.clip(stepped, self.lo, self.hi)
                self.tables.append(tab)
        else:
            bytes_needed = problem.size * (K + 1) ** 2 // 2 * len(x_nodes) * 8
            if bytes_needed > GENERAL_PATH_BYTE_CAP:
                raise ParameterError(
                    "time-dependent speeds need per-level feet triangles "
                    f"(~{bytes_needed / 1e9:.2f} GB here); coarsen dt or "
                    "use time-independent speeds"
                )
            for s in problem.speeds:
                nsub = _substeps(s, abs(dt)) if K > 0 else 1
                tri = []
                for k in range(K + 1):
                    feet = np.empty((k + 1, len(x_nodes)))
                    feet[0] = x_nodes
                    for m in range(k):
                        stepped = _backstep(
                            s, feet[m], t_nodes[k - m], t_nodes[k - m - 1], nsub
                        )
                        feet[m + 1] = np.clip(stepped, self.lo, self.hi)
                    tri.append(feet)
                self.tables.append(tri)

    def feet_at(self, i: int, k: int, m: int) -> np.ndarray:
        if self.autonomous:
            return self.tables[i][m]
        return self.tables[i][k][m]


class _DepthValues:
    """Coefficient values along one component's autonomous feet tables.

    Static (time-independent) fields cache one vector per depth; fields
    that vary in t cache one (nodes x levels) matrix per depth, holding
    values at times t_0 .. t_{K-m} as seen from anchor levels above m.
    """

    def __init__(self, fld: Field2D, feet_i: np.ndarray, t_nodes: np.ndarray):
        self.fld = fld
        self.feet_i = feet_i  # (K+1, nx)
        self.t_nodes = t_nodes
        self.static = getattr(fld, "t_independent", False)
        self._cache = {}

    def at(self, m: int) -> np.ndarray:
        got = self._cache.get(m)
        if got is not None:
            return got
        xs = self.feet_i[m]
        if self.static:
            got = self.fld.values(xs, np.zeros_like(xs))
        else:
            L = len(self.t_nodes) - m
            xmat = np.broadcast_to(xs[:, None], (len(xs), L))
            tmat = np.broadcast_to(self.t_nodes[:L][None, :], (len(xs), L))
            got = self.fld.values(np.ascontiguousarray(xmat), np.ascontiguousarray(tmat))
        self._cache[m] = got
        return got


class _PairCache:
    """Coefficient values at triangle feet, memoized by (anchor, depth)."""

    def __init__(self, fld: Field2D, feet: _FeetTables, i: int):
        self.fld = fld
        self.feet = feet
        self.i = i
        self._cache = {}

    def at(self, k: int, m: int) -> np.ndarray:
        key = (k, m)
        got = self._cache.get(key)
        if got is None:
            xs = self.feet.feet_at(self.i, k, m)
            t = np.full_like(xs, self.feet.t_nodes[k - m])
            got = self.fld.values(xs, t)
            self._cache[key] = got
        return got


def _clip_eval_1d(f: Field1D, xs: np.ndarray) -> np.ndarray:
    xc = np.clip(xs, f.domain.lo, f.domain.hi)
    return f.values(xc)


def _interp_weights(xs: np.ndarray, pts: np.ndarray):
    dx = xs[1] - xs[0]
    idx = np.clip(((pts - xs[0]) / dx).astype(int), 0, len(xs) - 2)
    fr = np.clip((pts - xs[idx]) / dx, 0.0, 1.0)
    return idx, fr


class _AutonomousEngine:
    """Sweeps vectorized over anchor levels at fixed feet depth.

    The right-hand side value at feet depth m and time level l feeds the
    anchor level k = m + l with trapezoid weight dt (halved at m = 0 and
    l = 0).  One (nodes x levels) block per depth replaces the per-level
    inner loop.
    """

    def __init__(self, problem, feet, xs, t_nodes, dt):
        self.n = problem.size
        self.xs = xs
        self.K = len(t_nodes) - 1
        self.dt = dt
        self.feet = feet
        self.data_T = [
            np.stack([
                _clip_eval_1d(problem.data[i], feet.tables[i][m])
                for m in range(self.K + 1)
            ]).T.copy()
            for i in range(self.n)
        ]
        self.iw = [
            [_interp_weights(xs, feet.tables[i][m]) for m in range(self.K + 1)]
            for i in range(self.n)
        ]
        self.coup = [
            [
                (j, _DepthValues(problem.coupling[i][j], feet.tables[i], t_nodes))
                for j in range(self.n)
                if not is_zero_field(problem.coupling[i][j])
            ]
            for i in range(self.n)
        ]
        self.force = [
            _DepthValues(problem.forcing[i], feet.tables[i], t_nodes)
            if not is_zero_field(problem.forcing[i])
            else None
            for i in range(self.n)
        ]

    def sweep(self, U):
        n, K, dt = self.n, self.K, self.dt
        new = []
        for i in range(n):
            tab = self.data_T[i].copy()
            if (self.coup[i] or self.force[i] is not None) and K > 0:
                for m in range(K + 1):
                    L = K + 1 - m
                    idx, fr = self.iw[i][m]
                    rhs = None
                    for j, dv in self.coup[i]:
                        Uj = U[j]
                        V = (
                            Uj[idx, :L] * (1.0 - fr)[:, None]
                            + Uj[idx + 1, :L] * fr[:, None]
                        )
                        fv = dv.at(m)
                        term = (fv[:, None] if fv.ndim == 1 else fv[:, :L]) * V
                        rhs = term if rhs is None else rhs + term
                    g = self.force[i]
                    if g is not None:
                        gv = g.at(m)
                        gmat = gv[:, None] if gv.ndim == 1 else gv[:, :L]
                        rhs = gmat + (0.0 if rhs is None else rhs)
                    if m == 0:
                        tab[:, 1:] += (0.5 * dt) * rhs[:, 1:]
                    else:
                        w = np.full(L, dt)
                        w[0] = 0.5 * dt
                        tab[:, m:] += rhs * w[None, :]
            new.append(tab)
        return new


class _GeneralEngine:
    """Plain per-anchor-level loop over triangle feet (small problems)."""

    def __init__(self, problem, feet, xs, t_nodes, dt):
        self.n = problem.size
        self.xs = xs
        self.K = len(t_nodes) - 1
        self.dt = dt
        self.feet = feet
        self.data = [
            np.stack([
                _clip_eval_1d(problem.data[i], feet.feet_at(i, k, k))
                for k in range(self.K + 1)
            ])
            for i in range(self.n)
        ]
        self.coup = [
            [
                (j, _PairCache(problem.coupling[i][j], feet, i))
                for j in range(self.n)
                if not is_zero_field(problem.coupling[i][j])
            ]
            for i in range(self.n)
        ]
        self.force = [
            _PairCache(problem.forcing[i], feet, i)
            if not is_zero_field(problem.forcing[i])
            else None
            for i in range(self.n)
        ]

    def sweep(self, U):
        n, K, dt, xs = self.n, self.K, self.dt, self.xs
        new = []
        for i in range(n):
            tab = np.empty((len(xs), K + 1))
            has_rhs = bool(self.coup[i]) or self.force[i] is not None
            for k in range(K + 1):
                acc = self.data[i][k].copy()
                if has_rhs and k > 0:
                    integral = np.zeros(len(xs))
                    for m in range(k + 1):
                        lvl = k - m
                        w = dt * (0.5 if m in (0, k) else 1.0)
                        fx = self.feet.feet_at(i, k, m)
                        rhs = np.zeros(len(xs))
                        for j, pc in self.coup[i]:
                            rhs += pc.at(k, m) * np.interp(fx, xs, U[j][:, lvl])
                        if self.force[i] is not None:
                            rhs += self.force[i].at(k, m)
                        integral += w * rhs
                    acc += integral
                tab[:, k] = acc
            new.append(tab)
        return new


def solve_system(
    problem: HyperbolicProblem,
    base: Interval,
    horizon: float,
    dt: float,
    x_step: float | None = None,
    tol: float = 1e-10,
    max_iter: int = 80,
    two_sided: bool = False,
) -> SolutionField:
    """Global Picard solve over the determinacy trapezoid of `base`.

    Tables live on the full base x [0, horizon] rectangle, but anything
    outside the trapezoid is quarantined: gaps, the audit and all point
    queries are restricted to it.  Convergence requires the sup-norm
    update gap on the trusted nodes to fall below tol; one extra sweep
    after convergence must stay below AUDIT_FACTOR * tol, which guards
    against a lucky small step masquerading as a fixed point.
    """
    if two_sided:
        return _solve_two_sided(problem, base, horizon, dt, x_step, tol, max_iter)
    if dt <= 0.0 or horizon <= 0.0:
        raise ParameterError("dt and horizon must be positive")
    n_levels = max(1, int(round(horizon / dt)))
    dt_eff = horizon / n_levels
    t_nodes = np.linspace(0.0, horizon, n_levels + 1)

    bound_field = problem.speed_bound_field()
    trust = determinacy_domain(bound_field, base, horizon)

    if x_step is None:
        # finer than dt x speed buys nothing; 512 cells is plenty when the
        # speed (or dt) is tiny relative to the base width
        x_step = max(dt_eff * max(1.0, trust.speed_bound), base.width / 512.0)
    nx = max(int(np.ceil(base.width / x_step)) + 1, 8)
    x_grid = Grid1D.from_bounds(base.lo, base.hi, nx)
    xs = x_grid.nodes()

    for i, d in enumerate(problem.data):
        if d.domain.lo > base.lo + 1e-12 or d.domain.hi < base.hi - 1e-12:
            raise DomainError(
                f"data component {i} lives on [{d.domain.lo}, {d.domain.hi}], "
                f"which does not cover the base interval [{base.lo}, {base.hi}]"
            )

    feet = _FeetTables(problem, xs, t_nodes, base)
    engine_cls = _AutonomousEngine if feet.autonomous else _GeneralEngine
    engine = engine_cls(problem, feet, xs, t_nodes, dt_eff)

    n = problem.size
    K = n_levels
    trust_mask = np.stack(
        [trust.contains(xs, t_nodes[k]) for k in range(K + 1)], axis=1
    )

    U = [np.tile(_clip_eval_1d(problem.data[i], xs)[:, None], (1, K + 1)) for i in range(n)]

    gaps = []
    converged = False
    for sweep_no in range(max_iter):
        Unew = engine.sweep(U)
        gap = max(
            float(np.max(np.abs((Unew[i] - U[i])[trust_mask]))) for i in range(n)
        )
        gaps.append(gap)
        U = Unew
        if gap <= tol:
            converged = True
            break
    if not converged:
        raise IterationLimitError(
            f"picard solve did not reach tol={tol} in {max_iter} sweeps "
            f"(last gap {gaps[-1]:.3g})"
        )

    Uaudit = engine.sweep(U)
    audit = max(
        float(np.max(np.abs((Uaudit[i] - U[i])[trust_mask]))) for i in range(n)
    )
    if audit > AUDIT_FACTOR * tol:
        raise IterationLimitError(
            f"fixed-point audit failed: extra sweep moved by {audit:.3g} "
            f"> {AUDIT_FACTOR} * tol"
        )

    return SolutionField(
        x_grid=x_grid,
        t_nodes=t_nodes,
        tables=U,
        trust=trust,
        iterations=sweep_no + 1,
        gaps=gaps,
        audit_gap=audit,
    )


class _TimeReflected(Field2D):
    """Coefficient field under t -> -t, with an optional sign flip."""

    def __init__(self, f: Field2D, negate: bool):
        self._f = f
        self._sign = -1.0 if negate else 1.0
        d = f.domain
        self.domain = type(d)(d.x, Interval(-d.t.hi, -d.t.lo))
        self.t_independent = getattr(f, "t_independent", False)
        self.scale = getattr(f, "scale", None)

    def values(self, x, t, dx: int = 0, dt: int = 0) -> np.ndarray:
        if dx or dt:
            raise ParameterError("reflected fields serve value queries only")
        t = np.asarray(t, dtype=float)
        return self._sign * self._f.values(x, -t)


def _reflect_problem(problem: HyperbolicProblem) -> HyperbolicProblem:
    # under tau = -t the transport operator flips sign: speeds, coupling
    # and forcing all negate (and read their fields at -tau)
    ref = lambda f: None if f is None else _TimeReflected(f, True)
    return HyperbolicProblem(
        speeds=[_TimeReflected(s, True) for s in problem.speeds],
        coupling=[[ref(c) for c in row] for row in problem.coupling],
        forcing=[ref(g) for g in problem.forcing],
        data=problem.data,
    )


def _solve_two_sided(problem, base, horizon, dt, x_step, tol, max_iter):
    fwd = solve_system(problem, base, horizon, dt, x_step, tol, max_iter)
    bwd = solve_system(
        _reflect_problem(problem), base, horizon, dt, x_step, tol, max_iter
    )
    t_nodes = np.concatenate([-bwd.t_nodes[:0:-1], fwd.t_nodes])
    tables = [
        np.concatenate([bwd.tables[i][:, :0:-1], fwd.tables[i]], axis=1)
        for i in range(problem.size)
    ]
    trust = DeterminacyTrapezoid(
        base=base,
        speed_bound=max(fwd.trust.speed_bound, bwd.trust.speed_bound),
        horizon=horizon,
    )
    return SolutionField(
        x_grid=fwd.x_grid,
        t_nodes=t_nodes,
        tables=tables,
        trust=trust,
        iterations=max(fwd.iterations, bwd.iterations),
        gaps=np.concatenate([fwd.gaps, bwd.gaps]),
        audit_gap=max(fwd.audit_gap, bwd.audit_gap),
    )


# ------------------------------------------------------------------ wave


INVERTIBILITY_FLOOR = 1e-6


@dataclass
class WaveSystem:
    """The first-order reduction of a scalar second-order wave problem.

    displacement_index names the system component carrying the scalar
    wave itself; the first two carry u_t -+ lam u_x.
    """

    problem: HyperbolicProblem
    speed: Field2D
    displacement_index: int = 2

    def solve(self, base, horizon, dt, **kw) -> SolutionField:
        return solve_system(self.problem, base, horizon, dt, **kw)


def wave_to_system(
    speed: Field2D,
    u0: Field1D,
    u0_slope: Field1D,
    u1: Field1D,
    drift: Field2D | None = None,
    damping: Field2D | None = None,
    potential: Field2D | None = None,
    forcing: Field2D | None = None,
    check_interval: Interval | None = None,
) -> WaveSystem:
    """Reduce u_tt = lam^2 u_xx + drift u_x + damping u_t + potential u + forcing.

    State is (v, w, u) with v = u_t - lam u_x and w = u_t + lam u_x;
    v rides speed +lam, w rides -lam, and u integrates (v + w)/2 up its
    vertical characteristic.  u0_slope must be the x-derivative of u0
    (passed separately so embedded data can supply it exactly), and u1
    is the initial velocity.

    lam must stay away from zero: the reduction divides by it.
    """
    lam = speed
    if check_interval is not None:
        probe = np.linspace(check_interval.lo, check_interval.hi, 513)
        lam_probe = lam.values(probe, np.zeros_like(probe))
        if np.min(np.abs(lam_probe)) < INVERTIBILITY_FLOOR:
            raise InvertibilityError(
                f"wave speed reaches {np.min(np.abs(lam_probe)):.3g}, below the "
                f"reduction floor {INVERTIBILITY_FLOOR}"
            )

    # constant speed and no first-order terms: the v/w block vanishes
    plain = (
        isinstance(lam, ConstantField2D)
        and drift is None
        and damping is None
    )

    lam_static = getattr(lam, "t_independent", False)
    coef_static = lam_static and all(
        f is None or getattr(f, "t_independent", False) for f in (drift, damping)
    )
    coef_dom = lam.domain
    for f in (drift, damping):
        if f is not None:
            coef_dom = coef_dom.intersect(f.domain)
    scales = [f.scale for f in (lam, drift, damping) if f is not None and f.scale]
    coef_scale = min(scales) if scales else None

    def coef(sign: float):
        # sign -1 gives A = (drift - lam_t - lam lam_x) / (2 lam), +1 gives B
        def fn(x, t):
            a = drift.values(x, t) if drift is not None else 0.0
            lt = lam.values(x, t, dt=1)
            lx = lam.values(x, t, dx=1)
            lv = lam.values(x, t)
            return (a + sign * lt - lv * lx) / (2.0 * lv)

        return fn

    coef_A = coef(-1.0)
    coef_B = coef(+1.0)

    def half_damp(x, t):
        if damping is None:
            return 0.0
        return 0.5 * damping.values(x, t)

    def mk(fn):
        return CallableField2D(
            fn, domain=coef_dom, t_independent=coef_static, scale=coef_scale
        )

    if plain:
        f_vv = f_vw = f_wv = f_ww = None
    else:
        f_vv = mk(lambda x, t: -coef_A(x, t) + half_damp(x, t))
        f_vw = mk(lambda x, t: coef_A(x, t) + half_damp(x, t))
        f_wv = mk(lambda x, t: -coef_B(x, t) + half_damp(x, t))
        f_ww = mk(lambda x, t: coef_B(x, t) + half_damp(x, t))

    half = ConstantField2D(0.5)
    neg_speed = TransformedField2D(lambda v: -v, lam)
    zero_speed = ConstantField2D(0.0)

    pot = potential if not is_zero_field(potential) else None

    data_dom = u1.domain.intersect(u0_slope.domain).intersect(lam.domain.x)
    data_scales = [f.scale for f in (u1, u0_slope) if f.scale] + (
        [lam.scale] if lam.scale else []
    )
    data_scale = min(data_scales) if data_scales else None

    def char_datum(sign: float):
        def fn(x):
            return u1.values(x) + sign * lam.values(x, np.zeros_like(x)) * u0_slope.values(x)

        return CallableField1D(fn, domain=data_dom, scale=data_scale)

    prob = HyperbolicProblem(
        speeds=[lam, neg_speed, zero_speed],
        coupling=[
            [f_vv, f_vw, pot],
            [f_wv, f_ww, pot],
            [half, half, None],
        ],
        forcing=[forcing, forcing, None],
        data=[char_datum(-1.0), char_datum(+1.0), u0],
    )
    return WaveSystem(problem=prob, speed=lam)


# ------------------------------------------------------- special solvers


def transport_t_only(data: Field1D, speed_of_t: Field1D, t: float):
    """Solution of u_t + c(t) u_x = 0: the datum shifted by the c-integral.

    The shift is computed with the speed field's own integral method, so
    an embedded-derivative speed contributes its antiderivative
    difference exactly, with no quadrature error.  Returns (field, shift).
    """
    shift = float(speed_of_t.integral(0.0, t))
    return ShiftedField1D(data, shift), shift


def gronwall_check(
    sol: SolutionField,
    problem: HyperbolicProblem,
    n_probe: int = 257,
):
    """A-priori bound audit on a computed solution.

    Checks sup_x |U(t)| <= (sup |U(0)| + int_0^t |g|) * exp(int_0^t |F|)
    with |F|(t) = max_i sum_j sup_x |F_ij(., t)| and |g|(t) = max_i
    sup_x |g_i(., t)|, all sups over the trusted interval at that time.
    Returns (lhs_curve, rhs_curve, ok).
    """
    tn = sol.t_nodes
    tn = tn[tn >= 0.0]
    lhs = np.empty(len(tn))
    f_norm = np.empty(len(tn))
    g_norm = np.empty(len(tn))
    for idx, t in enumerate(tn):
        iv = sol.trust.interval_at(t) if t != 0.0 else sol.trust.base
        xs = np.linspace(iv.lo, iv.hi, n_probe)
        lhs[idx] = max(
            float(np.max(np.abs(sol.values(i, xs, np.full_like(xs, t)))))
            for i in range(sol.size)
        )
        fsum = 0.0
        gsum = 0.0
        for i in range(problem.size):
            row = 0.0
            for j in range(problem.size):
                c = problem.coupling[i][j]
                if not is_zero_field(c):
                    row += float(np.max(np.abs(c.values(xs, np.full_like(xs, t)))))
            fsum = max(fsum, row)
            g = problem.forcing[i]
            if not is_zero_field(g):
                gsum = max(gsum, float(np.max(np.abs(g.values(xs, np.full_like(xs, t))))))
        f_norm[idx] = fsum
        g_norm[idx] = gsum
    int_f = cumulative_trapezoid(f_norm, tn, initial=0.0)
    int_g = cumulative_trapezoid(g_norm, tn, initial=0.0)
    rhs = (lhs[0] + int_g) * np.exp(int_f)
    ok = bool(np.all(lhs <= rhs * (1.0 + 1e-9) + 1e-12))
    return lhs, rhs, ok


def geometric_wave_solve(
    chart,
    u0: Field1D,
    u1: Field1D | None,
    xs: np.ndarray,
    t: float,
) -> np.ndarray:
    """Closed-form wave along a graph curve, via its arclength chart.

    In the arclength variable the problem is the flat wave equation, so
    the value at (x, t) is the average of the datum at the two feet plus
    half the integral of the initial velocity between them (measured in
    arclength).  This is the independent route against which the full
    system solver is compared on geometric problems.
    """
    xs = np.asarray(xs, dtype=float)
    left = chart.gamma(xs, t, +1)
    right = chart.gamma(xs, t, -1)
    out = 0.5 * (u0.values(left) + u0.values(right))
    if u1 is not None:
        s_lo = chart.length(left)
        s_hi = chart.length(right)
        # fixed Simpson lattice in arclength between the feet
        m = 65
        w = np.linspace(0.0, 1.0, m)
        simp = np.ones(m)
        simp[1:-1:2] = 4.0
        simp[2:-1:2] = 2.0
        for idx in range(len(xs)):
            span = s_hi[idx] - s_lo[idx]
            if span <= 0.0:
                continue
            s_lattice = s_lo[idx] + w * span
            vals = u1.values(chart.position(s_lattice))
            h = span / (m - 1)
            out[idx] += 0.5 * h / 3.0 * float(np.dot(simp, vals))
    return out


def halving_error_estimate(
    problem: HyperbolicProblem,
    base: Interval,
    horizon: float,
    dt: float,
    component: int = 0,
    **kw,
) -> float:
    """Largest node difference between a dt solve and a dt/2 solve.

    Standard discretization-error proxy: both solves share the coarse
    lattice nodes, where the fine solve is close to converged in dt.
    """
    coarse = solve_system(problem, base, horizon, dt, **kw)
    fine = solve_system(problem, base, horizon, dt / 2.0, **kw)
    iv = coarse.trust.interval_at(horizon)
    xs = np.linspace(iv.lo, iv.hi, 201)
    diff = 0.0
    for t in coarse.t_nodes[1:]:
        a = coarse.values(component, xs, np.full_like(xs, t))
        b = fine.values(component, xs, np.full_like(xs, t))
        diff = max(diff, float(np.max(np.abs(a - b))))
    return diff
