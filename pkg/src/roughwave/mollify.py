"""Smoothing of tabulated paths into differentiable fields.

A mollifier here is a Gaussian multiplied by an even Hermite-style
polynomial chosen so that moments 1..M vanish while the mass stays 1.
Smoothing a path at scale s convolves its piecewise tabulation with the
scaled kernel chi(z) * rho(z/s) / s, where chi is a fixed smooth cutoff
equal to 1 near the origin.  Because the cutoff is not scaled, it becomes
inert as s shrinks; two different cutoffs give the same field up to a
Gaussian-tail discrepancy.

Derivatives of the smoothed field convolve with the derivative of the
kernel, so differentiation and smoothing commute by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import Polynomial
from scipy.signal import fftconvolve
from scipy.special import expit

from .errors import DomainError, ParameterError, ResolutionError, ScaleError
from .fields import SampledField2D, SampledProcess
from .smooth import Field1D, Field2D, Interval, Provenance, Rect

_ALLOWED_MOMENTS = (0, 2, 4, 6)
_SCALE_MAPS = ("identity", "log", "loglog")

_GAUSS_NORM = 1.0 / np.sqrt(2.0 * np.pi)


def _double_factorial_even_moments(n: int) -> np.ndarray:
    """Gaussian even moments m_{2k} = (2k-1)!! for k = 0..n-1."""
    out = np.empty(n)
    out[0] = 1.0
    for k in range(1, n):
        out[k] = out[k - 1] * (2 * k - 1)
    return out


@dataclass(frozen=True)
class Mollifier:
    """Even smoothing kernel rho = P(z) * gaussian with vanishing moments.

    moments        highest vanishing moment order M (orders 1..M vanish)
    poly_coeffs    coefficients of P in powers of z
    cutoff_inner   a: chi == 1 on |z| <= a
    cutoff_outer   b: chi == 0 on |z| >= b
    truncation     tabulation threshold; |rho| < truncation is treated as 0
    trunc_radius   R with |rho(z)| < truncation for |z| > R
    formula        human-readable construction tag
    """

    moments: int
    poly_coeffs: tuple
    cutoff_inner: float
    cutoff_outer: float
    truncation: float
    trunc_radius: float
    formula: str

    # -- raw kernel ---------------------------------------------------

    @lru_cache(maxsize=16)
    def _poly(self, order: int) -> Polynomial:
        # rho^(k) = P_k * gaussian with P_{k+1} = P_k' - z P_k.
        if order == 0:
            return Polynomial(self.poly_coeffs)
        prev = self._poly(order - 1)
        return prev.deriv() - Polynomial([0.0, 1.0]) * prev

    def rho(self, z, order: int = 0) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        gauss = _GAUSS_NORM * np.exp(-0.5 * z * z)
        return self._poly(order)(z) * gauss

    # -- cutoff --------------------------------------------------------

    def cutoff(self, z, order: int = 0) -> np.ndarray:
        """Smooth cutoff chi built from the exp(-1/x) step; orders 0..2."""
        if order not in (0, 1, 2):
            raise ParameterError("cutoff derivatives available for orders 0..2")
        z = np.asarray(z, dtype=float)
        a, b = self.cutoff_inner, self.cutoff_outer
        az = np.abs(z)
        inside = az <= a
        outside = az >= b
        mid = ~(inside | outside)
        out = np.zeros(z.shape)
        if order == 0:
            out[inside] = 1.0
        if np.any(mid):
            u = (az[mid] - a) / (b - a)
            u = np.clip(u, 1e-9, 1.0 - 1e-9)
            # chi = expit(g(u)), g = 1/u - 1/(1-u); equals the classic
            # exp(-1/x) smooth step and is exactly 1/0 at the endpoints.
            g = 1.0 / u - 1.0 / (1.0 - u)
            sig = expit(g)
            if order == 0:
                out[mid] = sig
            else:
                gp = -1.0 / u**2 - 1.0 / (1.0 - u) ** 2
                mass = sig * (1.0 - sig)
                if order == 1:
                    val = mass * gp / (b - a)
                    out[mid] = val * np.sign(z[mid])
                else:
                    gpp = 2.0 / u**3 - 2.0 / (1.0 - u) ** 3
                    out[mid] = mass * ((1.0 - 2.0 * sig) * gp**2 + gpp) / (b - a) ** 2
        return out

    # -- scaled, cut-off kernel ----------------------------------------

    def support_radius(self, scale: float) -> float:
        """Radius beyond which the scaled kernel is treated as zero."""
        return min(self.cutoff_outer, self.trunc_radius * scale)

    def kernel_values(self, z, scale: float, order: int = 0) -> np.ndarray:
        """d^order/dz^order of chi(z) * rho(z / scale) / scale."""
        z = np.asarray(z, dtype=float)
        if order <= 2:
            out = np.zeros(z.shape)
            for j in range(order + 1):
                comb = 1.0 if j == 0 else (order if j == 1 else 1.0)
                rho_term = self.rho(z / scale, order - j) / scale ** (order - j + 1)
                out += comb * self.cutoff(z, j) * rho_term
            return out
        # Higher orders only when the cutoff plateau covers the support.
        if self.trunc_radius * scale > self.cutoff_inner:
            raise ParameterError(
                f"kernel derivative order {order} needs trunc_radius*scale <= cutoff_inner"
            )
        return self.cutoff(z) * self.rho(z / scale, order) / scale ** (order + 1)


def build_mollifier(
    moments: int = 2,
    cutoff_inner: float = 1.0,
    cutoff_outer: float = 2.0,
    truncation: float = 1e-12,
) -> Mollifier:
    """Construct the polynomial-times-Gaussian kernel with M vanishing moments.

    The even polynomial P(z) = sum c_j z^{2j} is fixed by requiring
    integral z^{2k} P(z) g(z) dz = delta_{k0} for k = 0..M/2, a linear
    system in the Gaussian even moments (2n-1)!!.  Odd moments vanish by
    symmetry, so moments 1..M vanish and the mass is exactly 1.
    """
    if moments not in _ALLOWED_MOMENTS:
        raise ParameterError(f"moments must be one of {_ALLOWED_MOMENTS}, got {moments}")
    if not (0.0 < cutoff_inner < cutoff_outer):
        raise ParameterError(
            f"need 0 < cutoff_inner < cutoff_outer, got ({cutoff_inner}, {cutoff_outer})"
        )
    if not (0.0 < truncation <= 1e-8):
        raise ParameterError(f"truncation must be in (0, 1e-8], got {truncation}")
    half = moments // 2 + 1
    gauss_moments = _double_factorial_even_moments(2 * half)
    system = np.empty((half, half))
    for i in range(half):
        for j in range(half):
            system[i, j] = gauss_moments[i + j]
    rhs = np.zeros(half)
    rhs[0] = 1.0
    even_coeffs = np.linalg.solve(system, rhs)
    coeffs = np.zeros(2 * half - 1)
    coeffs[::2] = even_coeffs
    poly = Polynomial(coeffs)

    zs = np.arange(0.0, 16.0, 1e-3)
    vals = np.abs(poly(zs)) * _GAUSS_NORM * np.exp(-0.5 * zs * zs)
    above = np.nonzero(vals >= truncation)[0]
    trunc_radius = float(zs[above[-1]]) + 2e-3 if above.size else 1.0

    return Mollifier(
        moments=moments,
        poly_coeffs=tuple(coeffs),
        cutoff_inner=cutoff_inner,
        cutoff_outer=cutoff_outer,
        truncation=truncation,
        trunc_radius=trunc_radius,
        formula=f"hermite-gauss(M={moments})",
    )


@dataclass(frozen=True)
class EpsLadder:
    """Geometric ladder of smoothing parameters eps0 * ratio**k."""

    eps0: float
    ratio: float
    count: int
    scale_map: str = "identity"

    def __post_init__(self):
        if not (0.0 < self.eps0 <= 1.0):
            raise ParameterError(f"eps0 must be in (0, 1], got {self.eps0}")
        if not (0.0 < self.ratio < 1.0):
            raise ParameterError(f"ratio must be in (0, 1), got {self.ratio}")
        if self.count < 1:
            raise ParameterError(f"count must be >= 1, got {self.count}")
        if self.scale_map not in _SCALE_MAPS:
            raise ParameterError(f"scale_map must be one of {_SCALE_MAPS}")

    def levels(self) -> np.ndarray:
        return self.eps0 * self.ratio ** np.arange(self.count)

    def kernel_scale(self, eps: float) -> float:
        """Map a ladder level to the kernel scale; must land in (0, 1)."""
        if self.scale_map == "identity":
            s = eps
        elif self.scale_map == "log":
            s = 1.0 / abs(np.log(eps))
        else:  # loglog
            inner = abs(np.log(eps))
            if inner <= 1.0:
                raise ScaleError(f"loglog scale undefined at eps={eps}")
            s = 1.0 / np.log(inner)
        if not (0.0 < s < 1.0):
            raise ScaleError(f"kernel scale {s} outside (0, 1) at eps={eps}")
        return float(s)


class EmbeddedField1D(Field1D):
    """Path smoothed at a fixed scale; derivatives via kernel derivatives."""

    def __init__(
        self,
        process: SampledProcess,
        mol: Mollifier,
        kernel_scale: float,
        base_order: int = 0,
        eps: float | None = None,
    ):
        if not (0.0 < kernel_scale <= 1.0):
            raise ParameterError(f"kernel scale must be in (0, 1], got {kernel_scale}")
        if base_order < 0:
            raise ParameterError("derivative order must be >= 0")
        g = process.grid
        if g.step > kernel_scale / 8.0 + 1e-15:
            raise ResolutionError(
                f"path step {g.step} too coarse for scale {kernel_scale}: need <= scale/8"
            )
        self.process = process
        self.mol = mol
        self.kernel_scale = float(kernel_scale)
        self.base_order = base_order
        self.eps = float(eps) if eps is not None else float(kernel_scale)
        r = mol.support_radius(kernel_scale)
        if g.lower + r + 4 * g.step >= g.upper - r - 4 * g.step:
            raise DomainError(
                f"kernel support radius {r} leaves no safe interior in "
                f"[{g.lower}, {g.upper}]"
            )
        self.domain = Interval(g.lower + r, g.upper - r)
        self.scale = self.kernel_scale
        self.provenance = Provenance(
            eps=self.eps,
            seed=process.seed,
            source=f"embed({process.source}, order={base_order}, scale={kernel_scale:g})",
        )
        self._radius = r
        self._tables: dict[int, np.ndarray] = {}

    # -- helpers -------------------------------------------------------

    def _window(self):
        hw = int(np.ceil(self._radius / self.process.grid.step)) + 1
        return hw

    def _kernel_samples(self, order: int) -> np.ndarray:
        hw = self._window()
        offsets = (np.arange(2 * hw + 1) - hw) * self.process.grid.step
        return self.mol.kernel_values(offsets, self.kernel_scale, order)

    # -- Field1D interface ----------------------------------------------

    def values(self, x, order: int = 0) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        self.check_domain(x)
        k = self.base_order + order
        g = self.process.grid
        flat = np.ravel(x)
        hw = self._window()
        width = 2 * hw + 1
        out = np.empty(flat.shape)
        max_chunk = max(1, int(5e7) // width)
        for lo in range(0, flat.size, max_chunk):
            xs = flat[lo : lo + max_chunk]
            j0 = np.floor((xs - g.lower) / g.step).astype(np.int64) - hw
            j0 = np.clip(j0, 0, g.count - width)
            idx = j0[:, None] + np.arange(width)[None, :]
            z = xs[:, None] - (g.lower + idx * g.step)
            w = self.mol.kernel_values(z, self.kernel_scale, k)
            out[lo : lo + max_chunk] = (w * self.process.values[idx]).sum(axis=1) * g.step
        return out.reshape(x.shape)

    def table(self, order: int = 0) -> np.ndarray:
        """Field tabulated on the path grid (trustworthy inside .domain)."""
        k = self.base_order + order
        if k not in self._tables:
            v = self._kernel_samples(k)
            p = self.process.values
            if v.size <= 1024 and v.size <= p.size:
                conv = np.convolve(p, v, mode="same")
            else:
                conv = fftconvolve(p, v, mode="same")
            self._tables[k] = conv * self.process.grid.step
        return self._tables[k]

    def safe_slice(self) -> slice:
        g = self.process.grid
        i0 = int(np.ceil((self.domain.lo - g.lower) / g.step - 1e-9))
        i1 = int(np.floor((self.domain.hi - g.lower) / g.step + 1e-9))
        return slice(i0, i1 + 1)

    def shift_order(self, delta: int) -> "EmbeddedField1D":
        """Same smoothing, different base derivative order."""
        return EmbeddedField1D(
            self.process, self.mol, self.kernel_scale, self.base_order + delta, self.eps
        )

    def integral(self, a: float, b: float) -> float:
        if self.base_order >= 1:
            anti = self.shift_order(-1)
            va, vb = anti.values(np.array([a, b]))
            return float(vb - va)
        return super().integral(a, b)


class EmbeddedField2D(Field2D):
    """Two-parameter tabulation smoothed with a tensor-product kernel."""

    def __init__(
        self,
        process: SampledField2D,
        mol: Mollifier,
        kernel_scale: float,
        base_dx: int = 0,
        base_dt: int = 0,
        eps: float | None = None,
    ):
        if not (0.0 < kernel_scale <= 1.0):
            raise ParameterError(f"kernel scale must be in (0, 1], got {kernel_scale}")
        g = process.grid
        for axis in (g.x, g.t):
            if axis.step > kernel_scale / 8.0 + 1e-15:
                raise ResolutionError(
                    f"grid step {axis.step} too coarse for scale {kernel_scale}"
                )
        self.process = process
        self.mol = mol
        self.kernel_scale = float(kernel_scale)
        self.base_dx = base_dx
        self.base_dt = base_dt
        self.eps = float(eps) if eps is not None else float(kernel_scale)
        r = mol.support_radius(kernel_scale)
        if (
            g.x.lower + r + 4 * g.x.step >= g.x.upper - r - 4 * g.x.step
            or g.t.lower + r + 4 * g.t.step >= g.t.upper - r - 4 * g.t.step
        ):
            raise DomainError("kernel support leaves no safe interior rectangle")
        self.domain = Rect(
            Interval(g.x.lower + r, g.x.upper - r),
            Interval(g.t.lower + r, g.t.upper - r),
        )
        self.scale = self.kernel_scale
        self.provenance = Provenance(
            eps=self.eps, seed=process.seed, source=f"embed2d({process.source})"
        )
        self._radius = r

    def _axis_kernel(self, grid_step: float, order: int):
        hw = int(np.ceil(self._radius / grid_step)) + 1
        offsets = (np.arange(2 * hw + 1) - hw) * grid_step
        return hw, self.mol.kernel_values(offsets, self.kernel_scale, order)

    def values(self, x, t, dx: int = 0, dt: int = 0) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        self.check_domain(x, t)
        kx = self.base_dx + dx
        kt = self.base_dt + dt
        g = self.process.grid
        shape = np.broadcast_shapes(x.shape, t.shape)
        xs = np.ravel(np.broadcast_to(x, shape)).astype(float)
        ts = np.ravel(np.broadcast_to(t, shape)).astype(float)
        hwx = int(np.ceil(self._radius / g.x.step)) + 1
        hwt = int(np.ceil(self._radius / g.t.step)) + 1
        wx = 2 * hwx + 1
        wt = 2 * hwt + 1
        out = np.empty(xs.shape)
        max_chunk = max(1, int(2e7) // (wx * wt))
        for lo in range(0, xs.size, max_chunk):
            xc = xs[lo : lo + max_chunk]
            tc = ts[lo : lo + max_chunk]
            jx = np.clip(
                np.floor((xc - g.x.lower) / g.x.step).astype(np.int64) - hwx,
                0,
                g.x.count - wx,
            )
            jt = np.clip(
                np.floor((tc - g.t.lower) / g.t.step).astype(np.int64) - hwt,
                0,
                g.t.count - wt,
            )
            ix = jx[:, None] + np.arange(wx)[None, :]
            it = jt[:, None] + np.arange(wt)[None, :]
            zx = xc[:, None] - (g.x.lower + ix * g.x.step)
            zt = tc[:, None] - (g.t.lower + it * g.t.step)
            wzx = self.mol.kernel_values(zx, self.kernel_scale, kx)
            wzt = self.mol.kernel_values(zt, self.kernel_scale, kt)
            patch = self.process.values[ix[:, :, None], it[:, None, :]]
            out[lo : lo + max_chunk] = np.einsum("pi,pij,pj->p", wzx, patch, wzt)
        return (out * g.cell_measure).reshape(shape)

    def table(self, dx: int = 0, dt: int = 0) -> np.ndarray:
        g = self.process.grid
        _, vx = self._axis_kernel(g.x.step, self.base_dx + dx)
        _, vt = self._axis_kernel(g.t.step, self.base_dt + dt)
        kern = np.outer(vx, vt)
        return fftconvolve(self.process.values, kern, mode="same") * g.cell_measure


def embed_path(process, mol: Mollifier, eps: float):
    """Smooth a tabulated path (or 2d field) at scale eps."""
    if isinstance(process, SampledField2D):
        return EmbeddedField2D(process, mol, eps, eps=eps)
    return EmbeddedField1D(process, mol, eps, base_order=0, eps=eps)


def embed_derivative(process: SampledProcess, mol: Mollifier, eps: float, order: int = 1):
    """Smooth and differentiate in one convolution with the kernel derivative."""
    if order < 1:
        raise ParameterError("embed_derivative needs order >= 1; use embed_path")
    return EmbeddedField1D(process, mol, eps, base_order=order, eps=eps)


def scaled_embed(
    process: SampledProcess,
    mol: Mollifier,
    eps: float,
    ladder: EpsLadder,
    order: int = 0,
):
    """Smooth at the ladder's kernel scale for level eps (slow-scale variants)."""
    s = ladder.kernel_scale(eps)
    return EmbeddedField1D(process, mol, s, base_order=order, eps=eps)
