"""Rank-one factorization of the tangent cofactor, cof(gamma') = lambda (x) psi.

For a unit-speed nowhere-elliptic curve both conformal tangent parts have
modulus 1/2, so with continuous phases

    gamma_c' = e^{i phi_c} / 2,   gamma_a' = e^{i phi_a} / 2,

the half-angle vectors

    lambda_hat = i e^{i (phi_c + phi_a) / 2},   psi_hat = i e^{i (phi_a - phi_c) / 2}

satisfy cof(gamma') = lambda_hat (x) psi_hat exactly.  On closed loops the
integers k = deg(gamma_a') - deg(gamma_c') and l = deg(gamma_a') + deg(gamma_c')
control the sign monodromy: psi_hat(t + 2pi) = e^{i k pi} psi_hat(t), and the
tangent-direction winding deg(psi) = k/2 is a half-integer.  Nondegeneracy of
the second derivative makes both phases strictly monotone, which is what the
branch inverses rely on.

Phases are unwrapped from the left endpoint with principal values in
[0, 2pi) there; the residual gauge (simultaneous sign flip of the pair) is
fixed by that choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import mat2
from .curve import TWO_PI, CurveSpec

PHASE_STEP_LIMIT = math.pi / 4.0
SPEED_HALF_TOL = 1e-6


class FactorizationError(ValueError):
    """Raised when the rank-one factorization preconditions fail."""


def _split_d1(c: CurveSpec, t):
    _, d1, d2 = c.jet(t)
    s1 = mat2.conformal_split(d1)
    s2 = mat2.conformal_split(d2)
    return s1.z_c, s1.z_a, s2.z_c, s2.z_a


def _principal(angle: float) -> float:
    """Representative in [0, 2pi)."""
    return float(np.mod(angle, TWO_PI))


@dataclass
class Factorization:
    """Unwrapped tangent phases and the factorization evaluators."""

    curve: CurveSpec
    grid_t: np.ndarray
    phi_c_table: np.ndarray
    phi_a_table: np.ndarray
    k_int: int | None
    l_int: int | None
    deg_psi: float | None
    orientable: bool
    min_phase_speed: float
    n: int

    # ----- continuous phase evaluation (table seed + principal-value snap) --

    def _phase_at(self, t, table, raw, winding):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if self.curve.closed:
            # extend by the loop monodromy: phi(t + 2pi m) = phi(t) + 2pi m deg
            m = np.floor(t / TWO_PI)
            tr = t - TWO_PI * m
            lift = TWO_PI * winding * m
        else:
            tr = t
            lift = 0.0
        seed = np.interp(tr, self.grid_t, table)
        exact = raw(tr)
        snapped = seed + np.mod(exact - seed + math.pi, TWO_PI) - math.pi
        return snapped + lift

    def _raw_phi_c(self, t):
        zc, _, _, _ = _split_d1(self.curve, self._wrap(t))
        return np.angle(zc)

    def _raw_phi_a(self, t):
        _, za, _, _ = _split_d1(self.curve, self._wrap(t))
        return np.angle(za)

    def _wrap(self, t):
        if self.curve.closed:
            return np.mod(t, TWO_PI)
        return t

    @property
    def deg_c(self) -> int | None:
        if self.k_int is None:
            return None
        return (self.l_int - self.k_int) // 2

    @property
    def deg_a(self) -> int | None:
        if self.k_int is None:
            return None
        return (self.l_int + self.k_int) // 2

    def phi_c(self, t):
        return self._phase_at(t, self.phi_c_table, self._raw_phi_c, self.deg_c or 0)

    def phi_a(self, t):
        return self._phase_at(t, self.phi_a_table, self._raw_phi_a, self.deg_a or 0)

    def phi_lambda(self, t):
        return 0.5 * (self.phi_c(t) + self.phi_a(t)) + 0.5 * math.pi

    def phi_psi(self, t):
        return 0.5 * (self.phi_a(t) - self.phi_c(t)) + 0.5 * math.pi

    def lambda_hat(self, t):
        """Unit complex left factor."""
        return np.exp(1j * self.phi_lambda(t))

    def psi_hat(self, t):
        """Unit complex tangent direction."""
        return np.exp(1j * self.phi_psi(t))

    # ----- exact phase derivatives from the 2-jet ---------------------------

    def dphi_c(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        zc, _, wc, _ = _split_d1(self.curve, self._wrap(t))
        return (np.conj(zc) * wc).imag / np.abs(zc) ** 2

    def dphi_a(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        _, za, _, wa = _split_d1(self.curve, self._wrap(t))
        return (np.conj(za) * wa).imag / np.abs(za) ** 2

    def dphi_lambda(self, t):
        return 0.5 * (self.dphi_c(t) + self.dphi_a(t))

    def dphi_psi(self, t):
        return 0.5 * (self.dphi_a(t) - self.dphi_c(t))

    # ----- ranges ------------------------------------------------------------

    def psi_phase_range(self) -> tuple[float, float]:
        a, b = self.curve.domain
        lo = float(self.phi_psi(a)[0])
        hi = float(self.phi_psi(b)[0])
        return lo, hi


def factorize(c: CurveSpec, n: int = 1024, max_refine: int = 8) -> Factorization:
    """Build the rank-one factorization on an adaptively refined phase grid.

    Fails when |gamma_c'| or |gamma_a'| strays from 1/2 (the curve is not
    unit-speed nowhere-elliptic) or when phase increments cannot be brought
    below pi/4 per step (which would leave the unwrapping ambiguous).
    """
    if not c.unit_speed:
        raise FactorizationError("factorize requires a unit-speed curve")
    a, b = c.domain
    for attempt in range(max_refine + 1):
        tt = np.linspace(a, b, n + 1)
        zc, za, _, _ = _split_d1(c, np.mod(tt, TWO_PI) if c.closed else tt)
        dev = max(float(np.max(np.abs(np.abs(zc) - 0.5))), float(np.max(np.abs(np.abs(za) - 0.5))))
        if dev > SPEED_HALF_TOL:
            raise FactorizationError(
                f"conformal tangent moduli deviate from 1/2 by {dev:.2e}; "
                "curve is not unit-speed nowhere-elliptic"
            )
        raw_c = np.angle(zc)
        raw_a = np.angle(za)
        phi_c = np.unwrap(raw_c)
        phi_a = np.unwrap(raw_a)
        step = max(float(np.max(np.abs(np.diff(phi_c)))), float(np.max(np.abs(np.diff(phi_a)))))
        if step < PHASE_STEP_LIMIT:
            break
        n *= 2
    else:
        raise FactorizationError("phase steps remain above pi/4 after refinement")

    phi_c += _principal(phi_c[0]) - phi_c[0]
    phi_a += _principal(phi_a[0]) - phi_a[0]

    if c.closed:
        wind_c = (phi_c[-1] - phi_c[0]) / TWO_PI
        wind_a = (phi_a[-1] - phi_a[0]) / TWO_PI
        if abs(wind_c - round(wind_c)) > 1e-6 or abs(wind_a - round(wind_a)) > 1e-6:
            raise FactorizationError("non-integer tangent winding on a closed loop")
        deg_c = int(round(wind_c))
        deg_a = int(round(wind_a))
        k_int = deg_a - deg_c
        l_int = deg_a + deg_c
        deg_psi = k_int / 2.0
        orientable = k_int % 2 == 0
    else:
        k_int = None
        l_int = None
        deg_psi = None
        orientable = True  # arcs always admit a global S^1-valued lift

    f = Factorization(
        curve=c,
        grid_t=tt,
        phi_c_table=phi_c,
        phi_a_table=phi_a,
        k_int=k_int,
        l_int=l_int,
        deg_psi=deg_psi,
        orientable=orientable,
        min_phase_speed=0.0,
        n=n,
    )
    fine = np.linspace(a, b, 4 * n + 1)
    speeds = np.minimum(np.abs(f.dphi_lambda(fine)), np.abs(f.dphi_psi(fine)))
    f.min_phase_speed = float(np.min(speeds))
    return f


@dataclass
class FactorizationReport:
    """Residuals of the defining identities on a fine grid."""

    max_outer_residual: float
    max_lambda_norm_dev: float
    max_psi_norm_dev: float
    max_d1_outer_residual: float
    min_phase_speed: float
    grid_n: int


def verify_factorization(f: Factorization, c: CurveSpec, n: int | None = None) -> FactorizationReport:
    """Measure || cof gamma' - lambda (x) psi || and companions on a fine grid."""
    n = int(n) if n else 4 * f.n
    a, b = c.domain
    tt = np.linspace(a, b, n, endpoint=not c.closed)
    _, d1, _ = c.jet(np.mod(tt, TWO_PI) if c.closed else tt)
    lam = f.lambda_hat(tt)
    psi = f.psi_hat(tt)
    outer = mat2.outer(mat2.as_vector(lam), mat2.as_vector(psi))
    res = float(np.max(mat2.frob(mat2.cof(d1) - outer)))
    # gamma' itself factors through the quarter-turned pair
    outer_d1 = mat2.outer(mat2.as_vector(1j * lam), mat2.as_vector(1j * psi))
    res_d1 = float(np.max(mat2.frob(d1 - outer_d1)))
    speeds = np.minimum(np.abs(f.dphi_lambda(tt)), np.abs(f.dphi_psi(tt)))
    return FactorizationReport(
        max_outer_residual=res,
        max_lambda_norm_dev=float(np.max(np.abs(np.abs(lam) - 1.0))),
        max_psi_norm_dev=float(np.max(np.abs(np.abs(psi) - 1.0))),
        max_d1_outer_residual=res_d1,
        min_phase_speed=float(np.min(speeds)),
        grid_n=n,
    )


def _target_angle(xi) -> float:
    xi = np.asarray(xi)
    if xi.shape == (2,):
        return math.atan2(float(xi[1]), float(xi[0]))
    return float(np.angle(complex(xi)))


def psi_inverse(f: Factorization, xi, branch: int = 0, tol: float = 1e-12) -> float:
    """Solve phi_psi(t) = arg(xi) + branch * pi on the monotone phase.

    ``xi`` is a unit vector (complex or length-2); RP^1 points are reached
    through the branch offset.  Raises when the phase is not strictly
    monotone or the branch falls outside the phase range of one period.
    """
    if f.min_phase_speed <= 0.0:
        raise FactorizationError("psi phase is not strictly monotone; no branch inverse")
    a, b = f.curve.domain
    target = _target_angle(xi) + branch * math.pi
    lo = float(f.phi_psi(np.array([a]))[0])
    hi = float(f.phi_psi(np.array([b]))[0])
    increasing = hi > lo
    span_lo, span_hi = (lo, hi) if increasing else (hi, lo)
    if f.curve.closed:
        # one period covers [lo, hi) (increasing) or (hi, lo] (decreasing)
        inside = span_lo - tol <= target < span_hi - tol if increasing else span_lo + tol < target <= span_hi + tol
    else:
        inside = span_lo - tol <= target <= span_hi + tol
    if not inside:
        raise FactorizationError(
            f"branch {branch} out of range: target phase {target:.6f} outside [{span_lo:.6f}, {span_hi:.6f}]"
        )

    t0, t1 = a, b
    for _ in range(80):
        tm = 0.5 * (t0 + t1)
        val = float(f.phi_psi(np.array([tm]))[0])
        if (val < target) == increasing:
            t0 = tm
        else:
            t1 = tm
        if t1 - t0 < 1e-15:
            break
    t = 0.5 * (t0 + t1)
    for _ in range(3):
        val = float(f.phi_psi(np.array([t]))[0])
        dv = float(f.dphi_psi(np.array([t]))[0])
        t -= (val - target) / dv
    t = min(max(t, a), b)
    if abs(float(f.phi_psi(np.array([t]))[0]) - target) > 1e-9:
        raise FactorizationError("branch inverse did not converge")
    return float(t)


def psi_preimages(f: Factorization, xi, tol: float = 1e-12) -> np.ndarray:
    """All parameters in one period with psi_hat(t) in {+-xi}, sorted."""
    if f.min_phase_speed <= 0.0:
        raise FactorizationError("psi phase is not strictly monotone")
    a, b = f.curve.domain
    base = _target_angle(xi)
    lo = float(f.phi_psi(np.array([a]))[0])
    hi = float(f.phi_psi(np.array([b]))[0])
    span_lo, span_hi = min(lo, hi), max(lo, hi)
    l0 = math.ceil((span_lo - base) / math.pi - 1e-12)
    out = []
    ell = l0
    while base + ell * math.pi <= span_hi + tol:
        target = base + ell * math.pi
        ok_hi = target < span_hi - tol if f.curve.closed else target <= span_hi + tol
        if target >= span_lo - tol and ok_hi:
            out.append(psi_inverse(f, xi, branch=ell))
        ell += 1
    return np.array(sorted(out))
