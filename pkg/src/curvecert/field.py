"""Solution fields of the differential inclusion on rectangular grids.

A :class:`DirectionField` stores the angle table theta with m = e^{i theta}
taking values in the curve's angular domain; the gradient field it encodes
is Du = gamma(theta) (the cofactor relation inverts through the involution).
Synthesizers produce the rigid solutions: constants, simple waves (constant
along a non-crossing family of lines directed by the tangent direction),
the oriented vortex (winding-one tangent direction field) and the
unoriented half-vortex.  Fields are defined almost everywhere; singular
cells are masked, never assigned a value, and every estimator reports the
measure it skipped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve

from . import mat2
from .curve import TWO_PI, CurveSpec
from .factorize import Factorization, FactorizationError

ROOT_TOL = 1e-12


class FieldError(ValueError):
    """Raised on synthesis precondition violations."""


@dataclass(frozen=True)
class Grid:
    """Cell-centered rectangular grid on bounds = (x0, x1, y0, y1)."""

    bounds: tuple
    nx: int
    ny: int
    inner_margin: float = 0.0

    def __post_init__(self):
        if self.nx < 16 or self.ny < 16:
            raise FieldError("grids below 16 cells per side are not supported")
        x0, x1, y0, y1 = self.bounds
        if not (x1 > x0 and y1 > y0):
            raise FieldError("empty grid bounds")

    @property
    def hx(self) -> float:
        x0, x1, _, _ = self.bounds
        return (x1 - x0) / self.nx

    @property
    def hy(self) -> float:
        _, _, y0, y1 = self.bounds
        return (y1 - y0) / self.ny

    @property
    def cell_area(self) -> float:
        return self.hx * self.hy

    def x_centers(self) -> np.ndarray:
        x0, x1, _, _ = self.bounds
        return x0 + (np.arange(self.nx) + 0.5) * self.hx

    def y_centers(self) -> np.ndarray:
        _, _, y0, y1 = self.bounds
        return y0 + (np.arange(self.ny) + 0.5) * self.hy

    def centers(self) -> tuple[np.ndarray, np.ndarray]:
        """Meshgrid of cell centers, shape (ny, nx) each."""
        return np.meshgrid(self.x_centers(), self.y_centers())

    def inner_slice(self, margin: float | None = None) -> tuple[slice, slice]:
        """Index window of cells at least ``margin`` inside the boundary."""
        m = self.inner_margin if margin is None else margin
        ix = int(math.ceil(m / self.hx))
        iy = int(math.ceil(m / self.hy))
        if 2 * ix >= self.nx or 2 * iy >= self.ny:
            raise FieldError("inner margin leaves no cells")
        return slice(iy, self.ny - iy), slice(ix, self.nx - ix)

    def boundary_distance(self, x, y):
        x0, x1, y0, y1 = self.bounds
        return np.minimum.reduce([x - x0, x1 - x, y - y0, y1 - y])


@dataclass
class DirectionField:
    """Grid-sampled angle field with validity mask (True = masked/invalid)."""

    grid: Grid
    theta: np.ndarray
    mask: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def m(self) -> np.ndarray:
        """Unit complex field e^{i theta} (masked cells carry junk; check mask)."""
        return np.exp(1j * self.theta)

    @property
    def valid(self) -> np.ndarray:
        return ~self.mask

    def masked_measure(self) -> float:
        return float(np.sum(self.mask)) * self.grid.cell_area

    def check_in_domain(self, c: CurveSpec, tol: float = 1e-10) -> float:
        """Largest excursion of theta outside the curve's angular domain."""
        if c.closed:
            return 0.0
        a, b = c.domain
        th = self.theta[self.valid]
        return float(max(np.max(a - th, initial=0.0), np.max(th - b, initial=0.0)))


# ---------------------------------------------------------------------------
# Synthesis
# ---------------------------------------------------------------------------


def synth_constant(grid: Grid, c: CurveSpec, theta0: float) -> DirectionField:
    """Constant field; the reconstructed potential is affine and every
    residual vanishes identically."""
    theta0 = float(theta0)
    a, b = c.domain
    if not c.closed and not (a - 1e-12 <= theta0 <= b + 1e-12):
        raise FieldError(f"theta0 = {theta0} outside the arc domain [{a}, {b}]")
    theta = np.full((grid.ny, grid.nx), theta0)
    return DirectionField(grid=grid, theta=theta, mask=np.zeros_like(theta, dtype=bool),
                          meta={"kind": "constant", "theta0": theta0})


def _mask_point_cell(grid: Grid, x0: tuple) -> np.ndarray:
    mask = np.zeros((grid.ny, grid.nx), dtype=bool)
    j = int(np.clip((x0[0] - grid.bounds[0]) / grid.hx, 0, grid.nx - 1))
    i = int(np.clip((x0[1] - grid.bounds[2]) / grid.hy, 0, grid.ny - 1))
    mask[i, j] = True
    return mask


def _invert_phase_field(f: Factorization, targets: np.ndarray) -> np.ndarray:
    """Vectorized inversion of the monotone tangent phase on one period."""
    a, b = f.curve.domain
    tbl_t = np.linspace(a, b, 4 * f.n + 1)
    tbl_p = f.phi_psi(tbl_t)
    increasing = tbl_p[-1] > tbl_p[0]
    if not increasing:
        tbl_p = tbl_p[::-1]
        tbl_t = tbl_t[::-1]
    t = np.interp(targets, tbl_p, tbl_t)
    flat = t.ravel()
    tg = targets.ravel()
    for _ in range(3):
        val = f.phi_psi(flat)
        dv = f.dphi_psi(flat)
        flat = flat - (val - tg) / dv
        flat = np.clip(flat, a, b)
    err = np.max(np.abs(f.phi_psi(flat) - tg))
    if err > 1e-9:
        raise FieldError(f"phase inversion did not converge (max defect {err:.2e})")
    return flat.reshape(targets.shape)


def ring_offsets(radius: int) -> list[tuple[int, int]]:
    """Counterclockwise walk over the Chebyshev circle of the given radius."""
    r = int(radius)
    out = [(-r, dj) for dj in range(-r, r + 1)]
    out += [(di, r) for di in range(-r + 1, r + 1)]
    out += [(r, dj) for dj in range(r - 1, -r - 1, -1)]
    out += [(di, -r) for di in range(r - 1, -r, -1)]
    return out


def _ring_winding(theta: np.ndarray, mask: np.ndarray, i: int, j: int, radius: int = 2) -> float:
    """Sum of wrapped theta increments around a cell ring of the given radius.

    The radius must be large enough that genuine increments stay strictly
    below pi; radius 2 suffices for tangent windings up to |deg| = 1 with
    the center anywhere in the enclosed plaquette block.
    """
    vals = []
    for di, dj in ring_offsets(radius):
        ii, jj = i + di, j + dj
        if ii < 0 or jj < 0 or ii >= theta.shape[0] or jj >= theta.shape[1] or mask[ii, jj]:
            return math.nan
        vals.append(theta[ii, jj])
    vals.append(vals[0])
    d = np.diff(vals)
    d = np.mod(d + math.pi, TWO_PI) - math.pi
    return float(np.sum(d))


def synth_vortex(grid: Grid, c: CurveSpec, f: Factorization, x0=(0.0, 0.0), tau: int = 1) -> DirectionField:
    """Oriented vortex: tangent direction field tau (x - x0)/|x - x0|.

    Requires a closed curve whose tangent direction has winding +-1
    (|k| = 2); the angle field solves phi_psi(theta) = azimuth + const with
    the continuous branch, and the cell containing x0 is masked.
    """
    if not c.closed:
        raise FieldError("vortex synthesis needs a closed loop (arcs admit no nontrivial winding)")
    if f.k_int is None or abs(f.k_int) != 2:
        raise FieldError(f"vortex requires |k| = 2 (tangent winding +-1); got k = {f.k_int}")
    if tau not in (-1, 1):
        raise FieldError("tau must be +-1")
    x0 = (float(x0[0]), float(x0[1]))
    xb = grid.bounds
    if not (xb[0] < x0[0] < xb[1] and xb[2] < x0[1] < xb[3]):
        raise FieldError("vortex center must lie strictly inside the grid")

    X, Y = grid.centers()
    az = np.arctan2(Y - x0[1], X - x0[0])
    target_raw = az + (0.0 if tau == 1 else math.pi)
    a, b = c.domain
    lo = float(f.phi_psi(np.array([a]))[0])
    hi = float(f.phi_psi(np.array([b]))[0])
    span = hi - lo  # +-2pi for |k| = 2
    sgn = 1.0 if span > 0 else -1.0
    reduced = lo + sgn * np.mod(sgn * (target_raw - lo), abs(span))
    theta = _invert_phase_field(f, reduced)
    mask = _mask_point_cell(grid, x0)
    df = DirectionField(grid=grid, theta=theta, mask=mask,
                        meta={"kind": "vortex", "x0": list(x0), "tau": int(tau)})
    # one azimuthal turn moves theta by 2pi / deg(psi) = 4pi / k, signed
    _closing_check(df, f, x0, expected=2.0 * TWO_PI / f.k_int)
    return df


def synth_half_vortex(grid: Grid, c: CurveSpec, f: Factorization, x0=(0.0, 0.0)) -> DirectionField:
    """Unoriented radial vortex: tangent direction {+-(x - x0)/|x - x0|}.

    Requires |k| = 1 (the direction map is a diffeomorphism onto the
    projective line); branch continuity is the mod-pi reduction through the
    monotone phase.
    """
    if not c.closed:
        raise FieldError("half-vortex synthesis needs a closed loop")
    if f.k_int is None or abs(f.k_int) != 1:
        raise FieldError(f"half-vortex requires |k| = 1 (tangent winding +-1/2); got k = {f.k_int}")
    x0 = (float(x0[0]), float(x0[1]))
    xb = grid.bounds
    if not (xb[0] < x0[0] < xb[1] and xb[2] < x0[1] < xb[3]):
        raise FieldError("vortex center must lie strictly inside the grid")

    X, Y = grid.centers()
    az = np.arctan2(Y - x0[1], X - x0[0])
    a, b = c.domain
    lo = float(f.phi_psi(np.array([a]))[0])
    hi = float(f.phi_psi(np.array([b]))[0])
    span = hi - lo  # +-pi for |k| = 1
    sgn = 1.0 if span > 0 else -1.0
    reduced = lo + sgn * np.mod(sgn * (az - lo), abs(span))
    theta = _invert_phase_field(f, reduced)
    mask = _mask_point_cell(grid, x0)
    df = DirectionField(grid=grid, theta=theta, mask=mask,
                        meta={"kind": "half_vortex", "x0": list(x0)})
    _closing_check(df, f, x0, expected=2.0 * TWO_PI / f.k_int)
    return df


def _closing_check(dfield: DirectionField, f: Factorization, x0, expected: float, tol: float = 1e-6):
    """Azimuthal consistency: summed wrapped theta increments around the
    center must equal the construction's total (2pi * 2/k)."""
    g = dfield.grid
    j = int(np.clip((x0[0] - g.bounds[0]) / g.hx, 3, g.nx - 4))
    i = int(np.clip((x0[1] - g.bounds[2]) / g.hy, 3, g.ny - 4))
    w = _ring_winding(dfield.theta, dfield.mask, i, j, radius=3)
    if math.isnan(w):
        return  # ring touches the mask; nothing to check at this radius
    if abs(w - expected) > max(tol, 1e-6 * abs(expected)):
        raise FieldError(f"branch tracking failed the closing-loop check: {w:.6f} vs {expected:.6f}")


def synth_simple_wave(
    grid: Grid,
    c: CurveSpec,
    f: Factorization,
    profile,
    offset,
    s_range: tuple[float, float],
    n_check: int = 33,
) -> DirectionField:
    """Field constant along the non-crossing line family
    L_s = { x : x . i psi(profile(s)) = offset(s) }, s in s_range.

    ``profile`` maps the wave parameter monotonically into the curve's
    angular domain; ``offset`` gives each line's signed distance.  Every
    cell must see exactly one root of F_x(s) = x . i psi(profile(s)) -
    offset(s); a second sign change means crossing characteristics and is
    reported with the first offending cell.
    """
    s0, s1 = float(s_range[0]), float(s_range[1])
    if not s1 > s0:
        raise FieldError("empty wave parameter range")
    ss = np.linspace(s0, s1, int(n_check))
    th = np.asarray(profile(ss), dtype=float)
    if not (np.all(np.diff(th) > 0) or np.all(np.diff(th) < 0)):
        raise FieldError("profile must be strictly monotone on the parameter range")

    X, Y = grid.centers()

    def F(s_arr):
        th = np.asarray(profile(s_arr), dtype=float)
        ipsi = 1j * f.psi_hat(th)
        g = np.asarray(offset(s_arr), dtype=float)
        return X[..., None] * ipsi.real[None, None, :] + Y[..., None] * ipsi.imag[None, None, :] - g[None, None, :]

    vals = F(ss)
    signs = np.sign(vals)
    changes = np.sum(np.abs(np.diff(signs, axis=-1)) > 0, axis=-1)
    if np.any(changes > 1):
        i, j = np.argwhere(changes > 1)[0]
        raise FieldError(
            f"crossing characteristics: cell ({i}, {j}) at "
            f"({X[i, j]:.4f}, {Y[i, j]:.4f}) sees {changes[i, j]} roots"
        )
    if np.any(changes == 0):
        i, j = np.argwhere(changes == 0)[0]
        raise FieldError(
            f"wave family does not cover the grid: cell ({i}, {j}) at "
            f"({X[i, j]:.4f}, {Y[i, j]:.4f}) sees no root"
        )

    # bracket per cell, then bisect (F is monotone in s per cell on the bracket)
    first = np.argmax(np.abs(np.diff(signs, axis=-1)) > 0, axis=-1)
    lo = ss[first]
    hi = ss[first + 1]

    def F_at(s_cells):
        th = np.asarray(profile(s_cells.ravel()), dtype=float)
        ipsi = 1j * f.psi_hat(th)
        g = np.asarray(offset(s_cells.ravel()), dtype=float)
        out = X.ravel() * ipsi.real + Y.ravel() * ipsi.imag - g
        return out.reshape(s_cells.shape)

    f_lo = F_at(lo)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        f_mid = F_at(mid)
        left = (f_lo <= 0) == (f_mid <= 0)
        lo = np.where(left, mid, lo)
        f_lo = np.where(left, f_mid, f_lo)
        hi = np.where(left, hi, mid)
        if np.max(hi - lo) < ROOT_TOL:
            break
    s_cells = 0.5 * (lo + hi)
    theta = np.asarray(profile(s_cells.ravel()), dtype=float).reshape(s_cells.shape)
    return DirectionField(
        grid=grid,
        theta=theta,
        mask=np.zeros_like(theta, dtype=bool),
        meta={"kind": "simple_wave", "s_range": [s0, s1]},
    )


# ---------------------------------------------------------------------------
# Potential reconstruction
# ---------------------------------------------------------------------------


@dataclass
class PotentialField:
    """Potential u with Du = gamma(theta), integrated over a spanning tree."""

    grid: Grid
    u: np.ndarray  # (ny, nx, 2)
    curl_residual: np.ndarray  # (ny-1, nx-1), nan where skipped
    skipped_plaquettes: int

    def max_defect(self, exclude_center=None, exclude_radius: float = 0.0) -> float:
        cr = np.abs(self.curl_residual)
        if exclude_center is not None and exclude_radius > 0.0:
            g = self.grid
            xc = g.x_centers()[:-1] + 0.5 * g.hx
            yc = g.y_centers()[:-1] + 0.5 * g.hy
            XX, YY = np.meshgrid(xc, yc)
            rr = np.hypot(XX - exclude_center[0], YY - exclude_center[1])
            cr = np.where(rr <= exclude_radius, np.nan, cr)
        return float(np.nanmax(cr))


def reconstruct_potential(dfield: DirectionField, c: CurveSpec) -> PotentialField:
    """Integrate Du = gamma(theta) over grid edges from the root corner.

    Edges use the trapezoid rule between adjacent cell centers; the
    spanning tree is breadth-first in row-major order so masked cells are
    walked around deterministically.  The per-plaquette loop integral is
    the curl defect; plaquettes touching masked cells are skipped and
    counted.
    """
    g = dfield.grid
    ny, nx = g.ny, g.nx
    value, _, _ = c.jet(c.wrap(dfield.theta.ravel()))
    Du = value.reshape(ny, nx, 2, 2)
    X, Y = g.centers()

    u = np.full((ny, nx, 2), np.nan)
    visited = np.zeros((ny, nx), dtype=bool)
    valid = dfield.valid
    # root: first valid cell in row-major order
    roots = np.argwhere(valid)
    if roots.size == 0:
        raise FieldError("field has no valid cells")
    r0 = tuple(roots[0])
    u[r0] = 0.0
    visited[r0] = True
    from collections import deque

    queue = deque([r0])
    while queue:
        i, j = queue.popleft()
        for di, dj in ((0, 1), (1, 0), (0, -1), (-1, 0)):
            ii, jj = i + di, j + dj
            if 0 <= ii < ny and 0 <= jj < nx and not visited[ii, jj] and valid[ii, jj]:
                step = np.array([X[ii, jj] - X[i, j], Y[ii, jj] - Y[i, j]])
                mid_grad = 0.5 * (Du[i, j] + Du[ii, jj])
                u[ii, jj] = u[i, j] + mid_grad @ step
                visited[ii, jj] = True
                queue.append((ii, jj))

    curl = np.full((ny - 1, nx - 1), np.nan)
    ok = valid[:-1, :-1] & valid[:-1, 1:] & valid[1:, 1:] & valid[1:, :-1]
    # loop integral around each plaquette of cell centers (trapezoid edges)
    ex = 0.5 * (Du[:, :-1] + Du[:, 1:]) @ np.array([g.hx, 0.0])
    ey = 0.5 * (Du[:-1, :] + Du[1:, :]) @ np.array([0.0, g.hy])
    loop = ex[:-1] + ey[:, 1:] - ex[1:] - ey[:, :-1]
    mag = np.linalg.norm(loop, axis=-1)
    curl[ok] = mag[ok]
    return PotentialField(
        grid=g,
        u=u,
        curl_residual=curl,
        skipped_plaquettes=int(np.sum(~ok)),
    )


# ---------------------------------------------------------------------------
# Mollification
# ---------------------------------------------------------------------------


def _quintic_step(x):
    x = np.clip(x, 0.0, 1.0)
    return x**3 * (10.0 - 15.0 * x + 6.0 * x * x)


def flat_radial_cutoff(r):
    """Piecewise-quintic profile: 0 off [1/4, 4], 1 on [1/2, 2], C^2 joins."""
    r = np.asarray(r, dtype=float)
    up = _quintic_step((r - 0.25) / 0.25)
    down = 1.0 - _quintic_step((r - 2.0) / 2.0)
    return np.where(r < 1.0, up, down)


def standard_kernel_profile(r):
    """Smooth radial bump supported in the unit ball (unnormalized)."""
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    inside = r < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - r[inside] ** 2))
    return out


@dataclass(frozen=True)
class MollifierSpec:
    """Convolution kernel of radius epsilon plus the flat radial cutoff used
    by extended fluxes (identically 1 on [1/2, 2] so the cutoff derivative
    vanishes near the unit circle)."""

    epsilon: float
    kernel_profile: object = standard_kernel_profile
    cutoff: object = flat_radial_cutoff

    def kernel(self, grid: Grid) -> np.ndarray:
        """Discrete unit-mass kernel sampled at cell offsets."""
        mx = int(math.floor(self.epsilon / grid.hx))
        my = int(math.floor(self.epsilon / grid.hy))
        if mx < 1 or my < 1:
            raise FieldError("mollification radius below one cell")
        ox = np.arange(-mx, mx + 1) * grid.hx
        oy = np.arange(-my, my + 1) * grid.hy
        OX, OY = np.meshgrid(ox, oy)
        K = np.asarray(self.kernel_profile(np.hypot(OX, OY) / self.epsilon), dtype=float)
        s = K.sum()
        if s <= 0:
            raise FieldError("kernel vanishes on the grid")
        return K / s

    def check(self) -> dict:
        """Mass and flatness defects of the continuous profiles."""
        r = np.linspace(0, 1, 2001)
        vals = self.kernel_profile(r)
        mass = 2 * math.pi * np.trapezoid(vals * r, r)
        rr = np.linspace(0.5, 2.0, 501)
        cut = self.cutoff(rr)
        return {
            "kernel_mass_normalizable": float(mass),
            "cutoff_flat_defect": float(np.max(np.abs(cut - 1.0))),
            "cutoff_support": [0.25, 4.0],
        }


@dataclass
class MollifiedField:
    """Smoothed (no longer unit-length) vector field on the inner window."""

    grid: Grid
    values: np.ndarray  # complex (ny, nx); nan outside the valid window
    window: tuple
    epsilon: float
    stats: dict


def mollify(dfield: DirectionField, spec: MollifierSpec) -> MollifiedField:
    """Discrete convolution with the unit-mass kernel on the inner subdomain.

    Masked cells are excluded with mass renormalization (so constants are
    reproduced exactly and |m_eps| <= 1 as a convex combination); reported
    statistics track how far the constraint |m| = 1 is destroyed.
    """
    g = dfield.grid
    if spec.epsilon > g.inner_margin + 1e-12 and g.inner_margin > 0:
        raise FieldError("mollification radius exceeds the inner margin")
    K = spec.kernel(g)
    m = np.where(dfield.valid, dfield.m, 0.0)
    w = dfield.valid.astype(float)
    num = fftconvolve(m, K, mode="same")
    den = fftconvolve(w, K, mode="same")
    ky, kx = K.shape
    margin = max(
        spec.epsilon,
        (ky // 2) * g.hy,
        (kx // 2) * g.hx,
    )
    win = g.inner_slice(margin)
    values = np.full((g.ny, g.nx), np.nan + 0j)
    sub = num[win] / den[win]
    values[win] = sub
    dev = 1.0 - np.abs(sub) ** 2
    stats = {
        "one_minus_sq_L1": float(np.sum(np.abs(dev)) * g.cell_area),
        "one_minus_sq_max": float(np.max(np.abs(dev))),
        "max_modulus": float(np.max(np.abs(sub))),
        "window_cells": int(sub.size),
    }
    return MollifiedField(grid=g, values=values, window=win, epsilon=spec.epsilon, stats=stats)
