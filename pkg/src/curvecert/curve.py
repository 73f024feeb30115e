"""Curves of 2x2 matrices: built-in families, jets, arc-length reparametrization.

A curve is a map gamma from a parameter interval into 2x2 matrices, carried
around as a :class:`CurveSpec` whose ``jet`` evaluator returns the 2-jet
(value, first, second derivative) at any parameter.  Closed loops live on
[0, 2pi) and wrap; arcs live on a finite interval [a, b] with b - a < 2pi.

Certification and factorization assume arc-length (``unit_speed``)
parametrization; :func:`reparametrize_arclength` converts any immersed
curve, rescaling by a homothety when the total length exceeds the 2pi
budget of the angular domain and recording the scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import CubicSpline, PchipInterpolator

from . import mat2

TWO_PI = 2.0 * math.pi

CLOSED = "closed_loop"
ARC = "arc"

# Gap kept below the full angle budget when rescaling over-long arcs, so the
# arc endpoints stay strictly less than 2pi apart.
_ARC_ANGLE_GAP = 1e-3

# Tolerances from the curve contract.
CLOSURE_TOL = 1e-10
UNIT_SPEED_TOL = 1e-8


@dataclass(frozen=True)
class CurveJet:
    """2-jet of a curve at parameter ``t`` (each entry a (..., 2, 2) array)."""

    t: np.ndarray | float
    value: np.ndarray
    d1: np.ndarray
    d2: np.ndarray


@dataclass(frozen=True)
class CurveSpec:
    """A parametrized C^2 curve in 2x2 matrix space.

    ``jet(t)`` accepts scalars or arrays and returns (value, d1, d2) with
    trailing shape (2, 2).  ``domain`` is (a, b); closed loops use (0, 2pi)
    and wrap.  ``scale`` records the homothety applied relative to the
    family's native size (certificates can be mapped back to original
    units through it).
    """

    domain_kind: str
    jet: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray, np.ndarray]]
    family_tag: str
    params: dict
    domain: tuple[float, float] = (0.0, TWO_PI)
    unit_speed: bool = False
    scale: float = 1.0
    length: float | None = None

    @property
    def closed(self) -> bool:
        return self.domain_kind == CLOSED

    @property
    def span(self) -> float:
        return self.domain[1] - self.domain[0]

    def grid(self, n: int, endpoint: bool = False) -> np.ndarray:
        """Uniform parameter grid; closed loops omit the duplicate endpoint by default."""
        a, b = self.domain
        if self.closed and not endpoint:
            return np.linspace(a, b, n, endpoint=False)
        return np.linspace(a, b, n + 1) if self.closed else np.linspace(a, b, n)

    def wrap(self, t):
        """Map parameters into the domain (closed loops wrap, arcs are checked)."""
        t = np.asarray(t, dtype=float)
        a, b = self.domain
        if self.closed:
            return a + np.mod(t - a, b - a)
        if np.any(t < a - 1e-9) or np.any(t > b + 1e-9):
            raise ValueError(f"parameter outside arc domain [{a}, {b}]")
        return np.clip(t, a, b)

    def descriptor(self) -> dict:
        """JSON-able identity of the curve (used for report hashes)."""
        return {
            "family": self.family_tag,
            "params": _jsonable(self.params),
            "domain_kind": self.domain_kind,
            "domain": [float(self.domain[0]), float(self.domain[1])],
            "unit_speed": bool(self.unit_speed),
            "scale": float(self.scale),
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in np.asarray(obj).tolist()] if isinstance(obj, np.ndarray) else [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, (int, float, str, bool)) or obj is None:
        return obj
    return str(obj)


def eval_jet(c: CurveSpec, t) -> CurveJet:
    """Evaluate the 2-jet at ``t`` (closed loops wrap, arcs bounds-checked)."""
    tw = c.wrap(t)
    value, d1, d2 = c.jet(tw)
    return CurveJet(t=tw, value=value, d1=d1, d2=d2)


# ---------------------------------------------------------------------------
# Built-in closed families
# ---------------------------------------------------------------------------


def make_gamma_k(k: int) -> CurveSpec:
    """Closed unit-speed family gamma_k(t) = [e^{it}]_c / 2 + [e^{i(k+1)t}]_a / (2(k+1)).

    Nowhere elliptic with det(gamma'') = (1 - (k+1)^2) / 4 < 0, and free of
    rank-one connections for every k >= 1.
    """
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise ValueError("k must be a positive integer (the k = 0 curve leaves the family)")
    k = int(k)
    w = k + 1

    def jet(t):
        t = np.asarray(t, dtype=float)
        zc = np.exp(1j * t)
        za = np.exp(1j * w * t)
        value = mat2.assemble(0.5 * zc, za / (2.0 * w))
        d1 = mat2.assemble(0.5j * zc, 0.5j * za)
        d2 = mat2.assemble(-0.5 * zc, -0.5 * w * za)
        return value, d1, d2

    return CurveSpec(
        domain_kind=CLOSED,
        jet=jet,
        family_tag="gamma_k",
        params={"k": k},
        domain=(0.0, TWO_PI),
        unit_speed=True,
        length=TWO_PI,
    )


def make_burgers(q: float, v_max: float) -> CurveSpec:
    """Matrix curve of the power-law scalar conservation law, native parameter w.

    For q = 0 the entries are [[-w^2/2, w], [-w^3/3, w^2/2]]; for q > 0 the
    first-column entries pick up |w|^q factors and the second derivative
    degenerates at w = 0.  Not unit speed.
    """
    if v_max <= 0:
        raise ValueError("v_max must be positive")
    if q < 0:
        raise ValueError("q must be nonnegative")
    q = float(q)

    def jet(t):
        w = np.asarray(t, dtype=float)
        aw = np.abs(w)
        awq = aw**q
        value = mat2.mat(
            -(w**2) * awq / (2.0 + q),
            w,
            -w * awq * aw**2 / (3.0 + q),
            w**2 / 2.0,
        )
        d1 = mat2.mat(-w * awq, np.ones_like(w), -awq * aw**2, w)
        d2 = mat2.mat(
            -(1.0 + q) * awq,
            np.zeros_like(w),
            -(2.0 + q) * w * awq,
            np.ones_like(w),
        )
        return value, d1, d2

    return CurveSpec(
        domain_kind=ARC,
        jet=jet,
        family_tag="burgers_q",
        params={"q": q, "v_max": float(v_max)},
        domain=(-float(v_max), float(v_max)),
        unit_speed=False,
    )


def make_conformal_pair(c_modes: dict, a_modes: dict, tag: str = "conformal_pair") -> CurveSpec:
    """Closed curve [sum c_n e^{int}]_c + [sum a_n e^{int}]_a from Fourier amplitudes.

    ``c_modes`` / ``a_modes`` map integer frequencies to complex amplitudes.
    Not unit speed in general.
    """
    c_items = sorted((int(n), complex(z)) for n, z in c_modes.items())
    a_items = sorted((int(n), complex(z)) for n, z in a_modes.items())

    def series(items, t, order):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex)
        for n, z in items:
            out += z * (1j * n) ** order * np.exp(1j * n * t)
        return out

    def jet(t):
        value = mat2.assemble(series(c_items, t, 0), series(a_items, t, 0))
        d1 = mat2.assemble(series(c_items, t, 1), series(a_items, t, 1))
        d2 = mat2.assemble(series(c_items, t, 2), series(a_items, t, 2))
        return value, d1, d2

    return CurveSpec(
        domain_kind=CLOSED,
        jet=jet,
        family_tag=tag,
        params={
            "c_modes": {n: z for n, z in c_items},
            "a_modes": {n: z for n, z in a_items},
        },
        domain=(0.0, TWO_PI),
        unit_speed=False,
    )


# ---------------------------------------------------------------------------
# Periodic Fourier evaluation (supports phase-built curves and sampled loops)
# ---------------------------------------------------------------------------


class _FourierSeries:
    """Truncated Fourier series of a 2pi-periodic complex function.

    Built from uniform samples; evaluates the series and its exact
    antiderivative (requires vanishing mean) anywhere.
    """

    def __init__(self, samples: np.ndarray, keep_tol: float = 1e-15):
        samples = np.asarray(samples, dtype=complex)
        n = samples.size
        coeffs = np.fft.fft(samples) / n
        freqs = np.fft.fftfreq(n, d=1.0 / n).astype(int)
        keep = np.abs(coeffs) > keep_tol * max(1.0, np.abs(coeffs).max())
        self.freqs = freqs[keep]
        self.coeffs = coeffs[keep]
        self.mean = coeffs[0] if 0 in freqs[keep] else 0.0 + 0.0j

    def __call__(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = self.coeffs @ np.exp(1j * np.outer(self.freqs, t))
        return out

    def antiderivative(self, t):
        """Exact antiderivative with value 0 at t = 0 (mean term integrates linearly)."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.zeros(t.shape, dtype=complex)
        for n, c in zip(self.freqs, self.coeffs):
            if n == 0:
                out += c * t
            else:
                out += c * (np.exp(1j * n * t) - 1.0) / (1j * n)
        return out


# ---------------------------------------------------------------------------
# Planar curves (composite-construction ingredients)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PlanarCurve:
    """A planar curve t -> C with 2-jet evaluator; period 2pi when closed."""

    jet: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray, np.ndarray]]
    closed: bool
    label: str = "planar"

    def __call__(self, t):
        return self.jet(np.asarray(t, dtype=float))


def unit_circle(wraps: int = 1) -> PlanarCurve:
    """Closed unit-speed circle e^{i w t} / w traversed ``wraps`` times; curvature w."""
    if wraps < 1:
        raise ValueError("wraps must be a positive integer")
    w = int(wraps)

    def jet(t):
        z = np.exp(1j * w * t)
        return z / w, 1j * z, -w * z

    return PlanarCurve(jet=jet, closed=True, label=f"circle(wraps={w})")


def planar_from_phase(winding: int, harmonics: dict, n_modes: int = 2048) -> PlanarCurve:
    """Closed unit-speed planar curve with tangent phase w t + trigonometric polynomial.

    ``harmonics`` maps positive frequencies j to (cos, sin) amplitude pairs;
    closure of the curve requires the perturbation to be (2pi/M)-periodic for
    some M not dividing the winding, which is validated numerically.
    """
    w = int(winding)
    items = sorted((int(j), (float(a), float(b))) for j, (a, b) in harmonics.items())

    def phase(t):
        t = np.asarray(t, dtype=float)
        p = w * t
        for j, (a, b) in items:
            p = p + a * np.cos(j * t) + b * np.sin(j * t)
        return p

    def dphase(t):
        t = np.asarray(t, dtype=float)
        p = np.full(t.shape, float(w))
        for j, (a, b) in items:
            p = p - a * j * np.sin(j * t) + b * j * np.cos(j * t)
        return p

    tt = np.linspace(0.0, TWO_PI, n_modes, endpoint=False)
    series = _FourierSeries(np.exp(1j * phase(tt)))
    if abs(series.mean) > 1e-9:
        raise ValueError(
            f"tangent phase does not close the curve (mean tangent {abs(series.mean):.2e}); "
            "use harmonics sharing a common period that does not divide the winding"
        )

    def jet(t):
        t = np.asarray(t, dtype=float)
        dz = np.exp(1j * phase(t))
        return series.antiderivative(t).reshape(t.shape), dz, 1j * dphase(t) * dz

    return PlanarCurve(jet=jet, closed=True, label=f"phase(w={w})")


def _check_planar(c: PlanarCurve, unit_speed: bool, need_curvature: bool, name: str, n: int = 1024):
    tt = np.linspace(0.0, TWO_PI, n, endpoint=False)
    z, dz, ddz = c.jet(tt)
    z0, _, _ = c.jet(np.array([0.0]))
    z1, _, _ = c.jet(np.array([TWO_PI]))
    if not c.closed or abs(z1[0] - z0[0]) > 1e-8:
        raise ValueError(f"{name} must be a closed planar curve")
    if unit_speed and np.max(np.abs(np.abs(dz) - 1.0)) > 1e-8:
        raise ValueError(f"{name} must be unit speed")
    if need_curvature and np.min(np.abs(ddz)) < 1e-9:
        raise ValueError(f"{name} has a vanishing curvature sample")
    return tt, z, dz, ddz


def _check_simple(c: PlanarCurve, name: str, n: int = 1024):
    tt = np.linspace(0.0, TWO_PI, n, endpoint=False)
    z, _, _ = c.jet(tt)
    e = np.exp(1j * tt)
    dz = np.abs(z[:, None] - z[None, :])
    de = np.abs(e[:, None] - e[None, :])
    off = de > 1e-12
    if np.min(dz[off] / de[off]) < 1e-6:
        raise ValueError(f"{name} must be a simple closed curve")


def make_composite(base_c: PlanarCurve, base_a: PlanarCurve, k: int) -> CurveSpec:
    """Closed nowhere-elliptic curve ([base_c(t)]_c + [base_a(kt)]_a / k) / 2.

    The factor 1/2 is the homothety normalizing the constant speed 2 of the
    raw combination to arc length (recorded in ``scale``).  det(d1) vanishes
    identically by construction; det(d2) = (|base_c''|^2 - k^2 |base_a''|^2)/4
    is negative once k exceeds the curvature ratio, and the absence of
    rank-one connections holds for k at or above the bound computed by
    ``certify.estimate_k0``.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    k = int(k)
    _check_planar(base_c, unit_speed=True, need_curvature=False, name="base_c")
    _check_simple(base_c, "base_c")
    _check_planar(base_a, unit_speed=True, need_curvature=True, name="base_a")

    def jet(t):
        t = np.asarray(t, dtype=float)
        zc, dzc, ddzc = base_c.jet(t)
        za, dza, ddza = base_a.jet(k * t)
        value = 0.5 * (mat2.embed(zc, mat2.CONFORMAL) + mat2.embed(za / k, mat2.ANTICONFORMAL))
        d1 = 0.5 * (mat2.embed(dzc, mat2.CONFORMAL) + mat2.embed(dza, mat2.ANTICONFORMAL))
        d2 = 0.5 * (mat2.embed(ddzc, mat2.CONFORMAL) + mat2.embed(k * ddza, mat2.ANTICONFORMAL))
        return value, d1, d2

    return CurveSpec(
        domain_kind=CLOSED,
        jet=jet,
        family_tag="composite",
        params={"k": k, "base_c": base_c.label, "base_a": base_a.label},
        domain=(0.0, TWO_PI),
        unit_speed=True,
        scale=0.5,
        length=TWO_PI,
    )


def make_phase_curve(
    winding_c: int,
    winding_a: int,
    harmonics_c: dict | None = None,
    harmonics_a: dict | None = None,
    phase0_c: float = 0.5 * math.pi,
    phase0_a: float = 0.5 * math.pi,
    n_modes: int = 2048,
    tag: str = "phase_pair",
) -> CurveSpec:
    """Closed unit-speed nowhere-elliptic curve from two tangent phases.

    The conformal and anticonformal tangents are e^{i phi_c}/2 and
    e^{i phi_a}/2, which forces |d1| = 1 and det(d1) = 0 exactly;
    det(d2) = (phi_c'^2 - phi_a'^2)/4.  Each phase is
    ``winding * t + phase0 + trig polynomial`` with closure enforced as in
    :func:`planar_from_phase`.  ``gamma_k`` corresponds to windings (1, k+1)
    with no harmonics.
    """
    harmonics_c = harmonics_c or {}
    harmonics_a = harmonics_a or {}

    def build(winding, phase0, harmonics):
        items = sorted((int(j), (float(a), float(b))) for j, (a, b) in harmonics.items())

        def phase(t):
            t = np.asarray(t, dtype=float)
            p = winding * t + phase0
            for j, (a, b) in items:
                p = p + a * np.cos(j * t) + b * np.sin(j * t)
            return p

        def dphase(t):
            t = np.asarray(t, dtype=float)
            p = np.full(t.shape, float(winding))
            for j, (a, b) in items:
                p = p - a * j * np.sin(j * t) + b * j * np.cos(j * t)
            return p

        tt = np.linspace(0.0, TWO_PI, n_modes, endpoint=False)
        series = _FourierSeries(0.5 * np.exp(1j * phase(tt)))
        if abs(series.mean) > 1e-9:
            raise ValueError("phase harmonics do not close the loop")
        return phase, dphase, series

    phc, dphc, sc = build(int(winding_c), phase0_c, harmonics_c)
    pha, dpha, sa = build(int(winding_a), phase0_a, harmonics_a)

    def jet(t):
        t = np.asarray(t, dtype=float)
        dzc = 0.5 * np.exp(1j * phc(t))
        dza = 0.5 * np.exp(1j * pha(t))
        value = mat2.assemble(sc.antiderivative(t).reshape(t.shape), sa.antiderivative(t).reshape(t.shape))
        d1 = mat2.assemble(dzc, dza)
        d2 = mat2.assemble(1j * dphc(t) * dzc, 1j * dpha(t) * dza)
        return value, d1, d2

    return CurveSpec(
        domain_kind=CLOSED,
        jet=jet,
        family_tag=tag,
        params={
            "winding_c": int(winding_c),
            "winding_a": int(winding_a),
            "harmonics_c": harmonics_c,
            "harmonics_a": harmonics_a,
            "phase0_c": float(phase0_c),
            "phase0_a": float(phase0_a),
        },
        domain=(0.0, TWO_PI),
        unit_speed=True,
        length=TWO_PI,
    )


# ---------------------------------------------------------------------------
# Sampled curves
# ---------------------------------------------------------------------------


def make_sampled(values: np.ndarray, domain_kind: str, domain: tuple[float, float], tag: str = "sampled") -> CurveSpec:
    """Curve interpolated from matrix values on a uniform parameter grid.

    Closed loops use trigonometric interpolation (spectral jets); arcs use a
    cubic spline.  Accuracy is governed by the sample count.
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != 3 or values.shape[1:] != (2, 2):
        raise ValueError("values must have shape (n, 2, 2)")
    a, b = float(domain[0]), float(domain[1])
    n = values.shape[0]
    if domain_kind == CLOSED:
        if abs(b - a - TWO_PI) > 1e-12:
            raise ValueError("closed sampled curves use the domain (0, 2pi)")
        series = [[_FourierSeries(values[:, i, j]) for j in range(2)] for i in range(2)]

        def eval_order(t, order):
            t = np.atleast_1d(np.asarray(t, dtype=float))
            out = np.empty(t.shape + (2, 2))
            for i in range(2):
                for j in range(2):
                    s = series[i][j]
                    out[..., i, j] = ((s.coeffs * (1j * s.freqs) ** order) @ np.exp(1j * np.outer(s.freqs, t))).real
            return out

        def jet(t):
            return eval_order(t, 0), eval_order(t, 1), eval_order(t, 2)

    elif domain_kind == ARC:
        tt = np.linspace(a, b, n)
        spl = CubicSpline(tt, values.reshape(n, 4), axis=0)
        d1s = spl.derivative(1)
        d2s = spl.derivative(2)

        def jet(t):
            t = np.atleast_1d(np.asarray(t, dtype=float))
            return (
                spl(t).reshape(t.shape + (2, 2)),
                d1s(t).reshape(t.shape + (2, 2)),
                d2s(t).reshape(t.shape + (2, 2)),
            )

    else:
        raise ValueError(f"unknown domain kind {domain_kind!r}")

    return CurveSpec(
        domain_kind=domain_kind,
        jet=jet,
        family_tag=tag,
        params={"n_samples": n},
        domain=(a, b),
        unit_speed=False,
    )


# ---------------------------------------------------------------------------
# Arc-length reparametrization
# ---------------------------------------------------------------------------

_GAUSS5_NODES = np.array(
    [-0.906179845938664, -0.538469310105683, 0.0, 0.538469310105683, 0.906179845938664]
)
_GAUSS5_WEIGHTS = np.array(
    [0.236926885056189, 0.478628670499366, 0.568888888888889, 0.478628670499366, 0.236926885056189]
)


class _ArcLengthMap:
    """Monotone map between native parameter t and arc length s, with inverse.

    The forward table uses composite Simpson on a dense grid; inverse queries
    bracket in the table, seed with monotone interpolation, and polish with
    Newton steps against locally Gauss-integrated arc length.
    """

    def __init__(self, c: CurveSpec, n_samples: int):
        n = max(int(n_samples), 256)
        if n % 2 == 1:
            n += 1
        a, b = c.domain
        self.t_table = np.linspace(a, b, n + 1)
        _, d1, _ = c.jet(self.t_table)
        speed = mat2.frob(d1)
        if np.min(speed) < 1e-12:
            raise ValueError("curve is not an immersion: |d1| vanishes at a sample")
        self.speed_table = speed
        self.s_table = cumulative_simpson(speed, x=self.t_table, initial=0.0)
        self.total = float(self.s_table[-1])
        self._inv = PchipInterpolator(self.s_table, self.t_table)
        self._speed_of_t = c.jet

    def _speed(self, t):
        _, d1, _ = self._speed_of_t(t)
        return mat2.frob(d1)

    def t_of_s(self, s, newton_iters: int = 3):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        s = np.clip(s, 0.0, self.total)
        t = np.asarray(self._inv(s), dtype=float)
        idx = np.clip(np.searchsorted(self.s_table, s) - 1, 0, len(self.s_table) - 2)
        t0 = self.t_table[idx]
        s0 = self.s_table[idx]
        for _ in range(newton_iters):
            # s(t) = s0 + int_{t0}^{t} |d1|, via 5-point Gauss on the short bracket
            half = 0.5 * (t - t0)
            mid = 0.5 * (t + t0)
            nodes = mid[None, :] + half[None, :] * _GAUSS5_NODES[:, None]
            vals = self._speed(nodes.ravel()).reshape(nodes.shape)
            s_at_t = s0 + half * (_GAUSS5_WEIGHTS @ vals)
            t = t - (s_at_t - s) / self._speed(t)
        return t


def reparametrize_arclength(c: CurveSpec, n_samples: int = 4096) -> CurveSpec:
    """Return the same curve (up to a recorded homothety) at unit speed.

    Closed loops are rescaled so the total length is exactly 2pi (the new
    parameter must be 2pi-periodic); arcs are rescaled only when longer than
    the angular budget, keeping a small gap below 2pi.  Jets are obtained by
    the chain rule through the inverse arc-length map, so
    det(d2_new) = (dt/ds)^4 det(d2) wherever det(d1) = 0.
    """
    amap = _ArcLengthMap(c, n_samples)
    L = amap.total
    if c.closed:
        sigma = TWO_PI / L
    else:
        budget = TWO_PI - _ARC_ANGLE_GAP
        sigma = 1.0 if L <= budget else budget / L
    new_len = sigma * L
    base_jet = c.jet
    a0 = c.domain[0]

    def jet(s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        t = amap.t_of_s(s / sigma)
        value, d1, d2 = base_jet(t)
        speed = mat2.frob(d1)
        dd = mat2.frob_dot(d1, d2)
        inv2 = 1.0 / (speed * speed)
        new_value = sigma * value
        new_d1 = d1 / speed[..., None, None]
        new_d2 = (d2 - d1 * (dd * inv2)[..., None, None]) * (inv2 / sigma)[..., None, None]
        return new_value, new_d1, new_d2

    return CurveSpec(
        domain_kind=c.domain_kind,
        jet=jet,
        family_tag=c.family_tag,
        params={**c.params, "reparametrized": True, "native_domain": [float(c.domain[0]), float(c.domain[1])], "native_anchor": float(a0)},
        domain=(0.0, TWO_PI) if c.closed else (0.0, new_len),
        unit_speed=True,
        scale=c.scale * sigma,
        length=new_len,
    )


# ---------------------------------------------------------------------------
# Diagnostics
# ---------------------------------------------------------------------------


def check_invariants(c: CurveSpec, n: int = 256, rtol: float = CLOSURE_TOL) -> dict:
    """Sampled closure / unit-speed checks; returns the measured defects."""
    out = {}
    if c.closed:
        tt = np.linspace(0.0, TWO_PI, 17)
        v0, d10, _ = c.jet(tt)
        v1, d11, _ = c.jet(tt + TWO_PI)
        out["closure_value"] = float(np.max(mat2.frob(v1 - v0)))
        out["closure_d1"] = float(np.max(mat2.frob(d11 - d10)))
    if c.unit_speed:
        tt = c.grid(n)
        _, d1, _ = c.jet(tt)
        out["unit_speed_defect"] = float(np.max(np.abs(mat2.frob(d1) - 1.0)))
    return out
