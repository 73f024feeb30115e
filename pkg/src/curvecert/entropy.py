"""Entropy families for a certified curve.

An entropy is a map Phi on the curve's angular domain J whose derivative is a
pointwise combination of the two rows of the tangent cofactor:

    d/dtheta Phi = alpha1 d/dtheta Gamma_1 + alpha2 d/dtheta Gamma_2,

where Gamma(e^{i theta}) = cof gamma(theta).  The weak divergence of Phi(m)
over a solution field is an entropy production; the constructions here are
the inputs of the verification suites.

Entropies are stored as dense tables with quintic spline interpolation
(derivative queries differentiate the interpolant); constructions with
closed-form coefficients also carry exact callables.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_simpson, simpson
from scipy.interpolate import make_interp_spline

from . import mat2
from .curve import ARC, CLOSED, TWO_PI, CurveSpec
from .factorize import Factorization, FactorizationError

LOOP_INTEGRAL_TOL = 1e-8
PERIODICITY_TOL = 1e-10


class EntropyConstructionError(ValueError):
    """Raised when an entropy construction precondition fails."""


# ---------------------------------------------------------------------------
# Curve flux rows
# ---------------------------------------------------------------------------


def gamma_rows(c: CurveSpec, theta) -> np.ndarray:
    """Rows of Gamma = cof gamma, shape (..., 2, 2) indexed [row, component]."""
    v, _, _ = c.jet(c.wrap(theta))
    return mat2.cof(v)


def dgamma_rows(c: CurveSpec, theta) -> np.ndarray:
    """Rows of d/dtheta Gamma = cof gamma', same layout."""
    _, d1, _ = c.jet(c.wrap(theta))
    return mat2.cof(d1)


def _bump_profile(x):
    """Standard smooth bump supported on (0, 1), unnormalized."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = (x > 0.0) & (x < 1.0)
    xi = x[inside]
    out[inside] = np.exp(-1.0 / (xi * (1.0 - xi)))
    return out


_BUMP_MASS = simpson(_bump_profile(np.linspace(0, 1, 4097)), dx=1.0 / 4096)

def recommended_table_n(span: float, width: float, floor: int = 2048, cap: int = 3_000_000) -> int:
    """Table size resolving bump features of the given angular width.

    Calibrated against the measured cubic convergence of the identity
    residual (cumulative Simpson error on the bump dominates): nodes per
    width ~ 1024 (0.46 / width)^(1/3) keeps the residual near 2.5e-7.
    Tables are capped; far narrower bumps degrade the identity check but
    keep value-level accuracy.
    """
    width = max(float(width), 1e-12)
    per = max(1024.0, 1024.0 * (0.46 / width) ** (1.0 / 3.0))
    n = int(math.ceil(per * span / width))
    return min(cap, max(floor, n))


def bump(x, width: float, periodic: bool = True):
    """Unit-mass bump supported on (0, width) (mod 2pi when periodic)."""
    x = np.asarray(x, dtype=float)
    if periodic:
        x = np.mod(x, TWO_PI)
    return _bump_profile(x / width) / (width * _BUMP_MASS)


# ---------------------------------------------------------------------------
# Entropy container
# ---------------------------------------------------------------------------


@dataclass
class Entropy:
    """Tabulated entropy with its coefficient pair."""

    theta: np.ndarray
    phi: np.ndarray
    alpha1: np.ndarray
    alpha2: np.ndarray
    domain_kind: str
    domain: tuple
    meta: dict = field(default_factory=dict)
    alpha_fns: tuple | None = None

    def __post_init__(self):
        periodic = self.domain_kind == CLOSED
        if periodic:
            gap = float(np.max(np.abs(self.phi[-1] - self.phi[0])))
            if gap > PERIODICITY_TOL:
                raise EntropyConstructionError(f"entropy table not periodic (gap {gap:.2e})")
            self.phi = self.phi.copy()
            self.phi[-1] = self.phi[0]
        bc = "periodic" if periodic else None
        k = 5 if len(self.theta) > 8 else 3
        self._phi_spline = make_interp_spline(self.theta, self.phi, k=k, bc_type=bc, axis=0)
        self._dphi_spline = self._phi_spline.derivative()
        if self.alpha_fns is None:
            a = np.stack([self.alpha1, self.alpha2], axis=1)
            if periodic:
                a = a.copy()
                a[-1] = a[0]
            self._alpha_spline = make_interp_spline(self.theta, a, k=min(k, 3), bc_type=bc, axis=0)
        else:
            self._alpha_spline = None

    def _wrap(self, theta):
        theta = np.asarray(theta, dtype=float)
        a, b = self.domain
        if self.domain_kind == CLOSED:
            return a + np.mod(theta - a, b - a)
        return np.clip(theta, a, b)

    def value(self, theta) -> np.ndarray:
        return self._phi_spline(self._wrap(theta))

    def dvalue(self, theta) -> np.ndarray:
        return self._dphi_spline(self._wrap(theta))

    def alpha(self, theta) -> np.ndarray:
        """Coefficient pair (alpha1, alpha2) at theta, shape (..., 2)."""
        if self.alpha_fns is not None:
            t = self._wrap(theta)
            return np.stack([np.asarray(self.alpha_fns[0](t)), np.asarray(self.alpha_fns[1](t))], axis=-1)
        return self._alpha_spline(self._wrap(theta))

    def identity_residual(self, c: CurveSpec, refine: int = 4) -> float:
        """max || dPhi - (alpha1 dGamma_1 + alpha2 dGamma_2) || on a finer grid."""
        n = refine * (len(self.theta) - 1)
        a, b = self.domain
        tq = np.linspace(a, b, n, endpoint=self.domain_kind == ARC)
        lhs = self.dvalue(tq)
        dg = dgamma_rows(c, tq)
        al = self.alpha(tq)
        rhs = al[..., 0, None] * dg[..., 0, :] + al[..., 1, None] * dg[..., 1, :]
        return float(np.max(np.linalg.norm(lhs - rhs, axis=-1)))

    def periodicity_gap(self) -> float:
        if self.domain_kind != CLOSED:
            return 0.0
        tq = np.linspace(0.0, TWO_PI, 17)
        return float(np.max(np.abs(self.value(tq + TWO_PI) - self.value(tq))))

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["theta", "phi1", "phi2", "alpha1", "alpha2"])
            al = self.alpha(self.theta)
            for i, t in enumerate(self.theta):
                w.writerow([f"{t:.17g}", f"{self.phi[i, 0]:.17g}", f"{self.phi[i, 1]:.17g}",
                            f"{al[i, 0]:.17g}", f"{al[i, 1]:.17g}"])


# ---------------------------------------------------------------------------
# Quadrature construction
# ---------------------------------------------------------------------------


def _integrand(c: CurveSpec, theta, alpha1, alpha2):
    dg = dgamma_rows(c, theta)
    a1 = np.asarray(alpha1(theta), dtype=float)
    a2 = np.asarray(alpha2(theta), dtype=float)
    return a1[..., None] * dg[..., 0, :] + a2[..., None] * dg[..., 1, :]


def loop_integral(c: CurveSpec, alpha1, alpha2, n: int = 2048) -> np.ndarray:
    """Integral of alpha1 dGamma_1 + alpha2 dGamma_2 over the closed domain."""
    tt = np.linspace(0.0, TWO_PI, n + 1)
    g = _integrand(c, tt, alpha1, alpha2)
    return simpson(g, x=tt, axis=0)


def integrate_entropy(
    c: CurveSpec,
    alpha1,
    alpha2,
    base_theta: float | None = None,
    base_value=(0.0, 0.0),
    n: int = 2048,
    meta: dict | None = None,
) -> Entropy:
    """Entropy by composite quadrature of the coefficient combination.

    On closed loops the loop integral must vanish (up to tolerance); a
    nonzero value is an error pointing at :func:`zero_average_correct`.
    The tiny residual drift is spread linearly over the period so the table
    is exactly periodic.
    """
    a, b = c.domain
    tt = np.linspace(a, b, int(n) + 1)
    g = _integrand(c, tt, alpha1, alpha2)
    phi = cumulative_simpson(g, x=tt, axis=0, initial=0.0)
    if c.closed:
        v = phi[-1].copy()
        scale = 1.0 + float(np.max(np.linalg.norm(g, axis=-1)))
        if np.linalg.norm(v) > LOOP_INTEGRAL_TOL * scale:
            raise EntropyConstructionError(
                f"nonzero loop integral |v| = {np.linalg.norm(v):.3e}; "
                "apply zero_average_correct to the coefficients first"
            )
        phi = phi - np.outer((tt - a) / (b - a), v)
    base_theta = a if base_theta is None else float(base_theta)
    offset = np.asarray(base_value, dtype=float) - _interp_rows(tt, phi, base_theta)
    phi = phi + offset
    return Entropy(
        theta=tt,
        phi=phi,
        alpha1=np.asarray(alpha1(tt), dtype=float),
        alpha2=np.asarray(alpha2(tt), dtype=float),
        domain_kind=c.domain_kind,
        domain=(a, b),
        meta=meta or {"kind": "quadrature"},
        alpha_fns=(alpha1, alpha2),
    )


def _interp_rows(tt, rows, x):
    out = np.empty(rows.shape[1])
    for j in range(rows.shape[1]):
        out[j] = np.interp(x, tt, rows[:, j])
    return out


def gamma_row_entropy(c: CurveSpec, row: int, n: int = 2048) -> Entropy:
    """The cofactor row Gamma_row itself, an entropy with constant coefficients."""
    if row not in (0, 1):
        raise ValueError("row must be 0 or 1")
    a, b = c.domain
    tt = np.linspace(a, b, int(n) + 1)
    rows = gamma_rows(c, tt)
    e_row = [lambda t: np.ones_like(np.asarray(t, dtype=float)), lambda t: np.zeros_like(np.asarray(t, dtype=float))]
    alpha1, alpha2 = (e_row[0], e_row[1]) if row == 0 else (e_row[1], e_row[0])
    phi = rows[:, row, :].copy()
    if c.closed:
        phi[-1] = phi[0]
    return Entropy(
        theta=tt,
        phi=phi,
        alpha1=np.asarray(alpha1(tt), dtype=float),
        alpha2=np.asarray(alpha2(tt), dtype=float),
        domain_kind=c.domain_kind,
        domain=(a, b),
        meta={"kind": "gamma_row", "row": row},
        alpha_fns=(alpha1, alpha2),
    )


# ---------------------------------------------------------------------------
# Zero-average correction
# ---------------------------------------------------------------------------


@dataclass
class CorrectedCoefficients:
    """Coefficients corrected to zero loop integral by localized bumps."""

    alpha1: object
    alpha2: object
    z1: float
    z2: float
    bump_width: float
    v_original: np.ndarray
    residual: float
    sup_deviation: float
    C_measured: float


def _in_intervals(theta, intervals):
    theta = np.mod(theta, TWO_PI)
    for lo, hi in intervals:
        lo_m = np.mod(lo, TWO_PI)
        hi_m = np.mod(hi, TWO_PI)
        if lo_m <= hi_m:
            if lo_m <= theta <= hi_m:
                return True
        elif theta >= lo_m or theta <= hi_m:
            return True
    return False


def zero_average_correct(
    c: CurveSpec,
    alpha1,
    alpha2,
    z1: float | None = None,
    z2: float | None = None,
    bump_width: float = 0.25,
    protected: list | None = None,
    n: int = 2048,
) -> CorrectedCoefficients:
    """Remove the loop integral of the coefficient combination by Dirac-like
    bumps at two well-conditioned angles.

    Solves the 2x2 system A b = v where the columns of A are the integrals
    of the bumps against the respective dGamma rows; the corrected
    coefficients agree with the originals away from (z_j, z_j + bump_width).
    The sup deviation scales like |b| / bump_width, i.e. proportionally to
    |v| with a constant reported as ``C_measured``.
    """
    if not c.closed:
        raise EntropyConstructionError("zero-average correction applies to closed loops only")
    v0 = loop_integral(c, alpha1, alpha2, n)
    if np.linalg.norm(v0) == 0.0:
        return CorrectedCoefficients(alpha1, alpha2, z1 or 0.0, z2 or 0.0, bump_width, v0, 0.0, 0.0, 0.0)

    if z1 is None or z2 is None:
        # scan a coarse angle grid for the best-conditioned pair of rows
        cand = np.linspace(0.0, TWO_PI, 96, endpoint=False)
        if protected:
            cand = np.array([t for t in cand if not any(
                _in_intervals(x, protected) for x in (t, t + bump_width))])
            if cand.size == 0:
                raise EntropyConstructionError("protected arcs leave no room for correction bumps")
        dg = dgamma_rows(c, cand)
        r1 = dg[:, 0, :]
        r2 = dg[:, 1, :]
        dets = np.abs(r1[:, None, 0] * r2[None, :, 1] - r1[:, None, 1] * r2[None, :, 0])
        i, j = np.unravel_index(int(np.argmax(dets)), dets.shape)
        if dets[i, j] < 1e-9:
            raise EntropyConstructionError(
                "no well-conditioned bump pair found outside the protected arc"
            )
        z1 = float(cand[i])
        z2 = float(cand[j])

    f1 = lambda t: bump(np.asarray(t, dtype=float) - z1, bump_width)
    f2 = lambda t: bump(np.asarray(t, dtype=float) - z2, bump_width)
    tt = np.linspace(0.0, TWO_PI, n + 1)
    dg = dgamma_rows(c, tt)
    col1 = simpson(f1(tt)[:, None] * dg[:, 0, :], x=tt, axis=0)
    col2 = simpson(f2(tt)[:, None] * dg[:, 1, :], x=tt, axis=0)
    A = np.stack([col1, col2], axis=1)
    if abs(np.linalg.det(A)) < 1e-12:
        raise EntropyConstructionError("correction system is singular at the selected pair")

    b_total = np.zeros(2)
    a1c, a2c = alpha1, alpha2
    for _ in range(2):  # second pass removes the quadrature residual of the first
        v = loop_integral(c, a1c, a2c, n)
        b = np.linalg.solve(A, v)
        b_total = b_total + b
        a1c = _subtract_bump(alpha1, f1, b_total[0])
        a2c = _subtract_bump(alpha2, f2, b_total[1])
    residual = float(np.linalg.norm(loop_integral(c, a1c, a2c, n)))
    sup_f = float(_bump_profile(np.array([0.5]))[0] / (bump_width * _BUMP_MASS))
    sup_dev = abs(b_total[0]) * sup_f + abs(b_total[1]) * sup_f
    return CorrectedCoefficients(
        alpha1=a1c,
        alpha2=a2c,
        z1=z1,
        z2=z2,
        bump_width=bump_width,
        v_original=v0,
        residual=residual,
        sup_deviation=sup_dev,
        C_measured=sup_dev / float(np.linalg.norm(v0)),
    )


def _subtract_bump(alpha, f, coef):
    def corrected(t):
        return np.asarray(alpha(t), dtype=float) - coef * f(t)

    return corrected


# ---------------------------------------------------------------------------
# Generalized (indicator) entropies
# ---------------------------------------------------------------------------


def generalized_entropy(
    c: CurveSpec,
    f: Factorization,
    xi,
    arc: tuple[float, float],
    delta: float,
    n: int | None = None,
) -> Entropy:
    """Smoothed indicator entropy converging to xi * 1_{theta in arc}.

    The arc endpoints must be tangent-direction preimages of {+-xi} (use
    ``psi_inverse``); the coefficients are bumps of width delta at the
    endpoints, scaled by the transversality factor at a direction t0 chosen
    to maximize |e^{i t0} . lambda| at both endpoints.  On closed loops the
    coefficients are zero-average corrected before integrating.
    """
    theta_a, theta_b = float(arc[0]), float(arc[1])
    if not theta_a < theta_b:
        raise EntropyConstructionError("arc must satisfy theta_a < theta_b")
    if delta >= (theta_b - theta_a) / 4.0:
        raise EntropyConstructionError("delta must be below a quarter of the arc length")
    xi_c = complex(xi) if np.isscalar(xi) or isinstance(xi, complex) else complex(xi[0], xi[1])
    xi_c = xi_c / abs(xi_c)

    def align(theta):
        psi = complex(f.psi_hat(np.array([theta]))[0])
        cross = (psi * np.conj(xi_c)).imag
        if abs(cross) > 1e-8:
            raise EntropyConstructionError(
                f"arc endpoint {theta:.6f} is not a preimage of +-xi (defect {abs(cross):.2e})"
            )
        return 1.0 if (psi * np.conj(xi_c)).real > 0 else -1.0

    tau = align(theta_a)
    sigma = align(theta_b)

    lam_a = complex(f.lambda_hat(np.array([theta_a]))[0])
    lam_b = complex(f.lambda_hat(np.array([theta_b]))[0])
    t0_grid = np.linspace(0.0, TWO_PI, 64, endpoint=False)
    e0 = np.exp(1j * t0_grid)
    prod = np.abs((e0 * np.conj(lam_a)).real) * np.abs((e0 * np.conj(lam_b)).real)
    i0 = int(np.argmax(prod))
    if prod[i0] < 1e-9:
        raise EntropyConstructionError("no transversal direction t0 found for the endpoint pair")
    t0 = float(t0_grid[i0])
    dot_a = (np.exp(1j * t0) * np.conj(lam_a)).real
    dot_b = (np.exp(1j * t0) * np.conj(lam_b)).real

    ca = tau * math.cos(t0) / dot_a
    cb = sigma * math.cos(t0) / dot_b
    sa = tau * math.sin(t0) / dot_a
    sb = sigma * math.sin(t0) / dot_b
    periodic = c.closed

    def alpha1(t):
        t = np.asarray(t, dtype=float)
        return ca * bump(t - theta_a, delta, periodic) - cb * bump(theta_b - t, delta, periodic)

    def alpha2(t):
        t = np.asarray(t, dtype=float)
        return sa * bump(t - theta_a, delta, periodic) - sb * bump(theta_b - t, delta, periodic)

    if n is None:
        n = recommended_table_n(c.span, delta)
    meta = {"kind": "generalized", "xi": [xi_c.real, xi_c.imag], "arc": [theta_a, theta_b],
            "delta": float(delta), "t0": t0, "tau": tau, "sigma": sigma}
    if c.closed:
        corr = zero_average_correct(c, alpha1, alpha2, bump_width=delta, n=n)
        meta["correction_sup"] = corr.sup_deviation
        return integrate_entropy(c, corr.alpha1, corr.alpha2, base_theta=theta_a,
                                 base_value=(0.0, 0.0), n=n, meta=meta)
    return integrate_entropy(c, alpha1, alpha2, base_theta=theta_a, base_value=(0.0, 0.0), n=n, meta=meta)


# ---------------------------------------------------------------------------
# Eikonal lifts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EikonalMap:
    """A map on S^1 whose angular derivative is tangent to ie^{i beta}.

    ``value(beta)`` and ``deriv(beta)`` return (..., 2) arrays; ``deriv`` is
    the derivative in beta of value(beta) and must satisfy
    deriv(beta) . e^{i beta} = 0.
    """

    value: object
    deriv: object
    label: str = "eikonal"

    def mu(self, beta):
        """Angular density: deriv(beta) = mu(beta) * i e^{i beta}."""
        beta = np.asarray(beta, dtype=float)
        d = np.asarray(self.deriv(beta))
        iv = mat2.as_vector(1j * np.exp(1j * beta))
        return np.sum(d * iv, axis=-1)

    def tangency_defect(self, n: int = 512) -> float:
        beta = np.linspace(0.0, TWO_PI, n, endpoint=False)
        d = np.asarray(self.deriv(beta))
        ev = mat2.as_vector(np.exp(1j * beta))
        return float(np.max(np.abs(np.sum(d * ev, axis=-1))))

    def evenness_defect(self, n: int = 512) -> float:
        beta = np.linspace(0.0, TWO_PI, n, endpoint=False)
        return float(np.max(np.abs(np.asarray(self.value(beta + math.pi)) - np.asarray(self.value(beta)))))


def eikonal_from_mu_modes(modes: dict, label: str | None = None) -> EikonalMap:
    """Closed-form eikonal map with trigonometric angular density.

    ``modes`` maps frequencies m >= 0 to (cos, sin) amplitude pairs of
    mu(beta) = sum a_m cos(m beta) + b_m sin(m beta).  Frequency 1 is
    rejected: it obstructs closing the map on S^1.
    """
    cplx = {}
    for m, (a, b) in modes.items():
        m = int(m)
        if m == 1:
            raise EntropyConstructionError("frequency-1 density does not close on S^1")
        if m == 0:
            cplx[0] = cplx.get(0, 0.0) + complex(a)
        else:
            cplx[m] = cplx.get(m, 0.0) + (a - 1j * b) / 2.0
            cplx[-m] = cplx.get(-m, 0.0) + (a + 1j * b) / 2.0

    def value(beta):
        beta = np.asarray(beta, dtype=float)
        out = np.zeros(beta.shape, dtype=complex)
        for m, cm in cplx.items():
            out += cm * np.exp(1j * (m + 1) * beta) / (m + 1)
        return mat2.as_vector(out)

    def deriv(beta):
        beta = np.asarray(beta, dtype=float)
        out = np.zeros(beta.shape, dtype=complex)
        for m, cm in cplx.items():
            out += cm * 1j * np.exp(1j * (m + 1) * beta)
        return mat2.as_vector(out)

    return EikonalMap(value=value, deriv=deriv, label=label or f"mu_modes{sorted(modes)}")


def lift_eikonal_entropy(c: CurveSpec, f: Factorization, tilde: EikonalMap, n: int = 2048) -> Entropy:
    """Lift an eikonal-type map through the tangent direction: Phi = tilde(i psi).

    Coefficients are the closed forms
        alpha_j(theta) = -phi_psi'(theta) mu(i psi(theta)) lambda_j(theta),
    periodic by the parity bookkeeping (odd-winding curves require an even
    ``tilde``; rejected otherwise).
    """
    if tilde.tangency_defect() > 1e-8:
        raise EntropyConstructionError("map is not tangent to ie^{i beta}; not an eikonal entropy")
    odd = f.k_int is not None and f.k_int % 2 == 1
    if odd and tilde.evenness_defect() > 1e-8:
        raise EntropyConstructionError("odd-winding curves require an even map on S^1")

    def beta_of(t):
        return f.phi_psi(t) + 0.5 * math.pi

    def alpha_pair(t):
        t = np.asarray(t, dtype=float)
        beta = beta_of(t)
        lam = mat2.as_vector(f.lambda_hat(t))
        factor = -f.dphi_psi(t) * tilde.mu(beta)
        return factor[..., None] * lam

    alpha1 = lambda t: alpha_pair(t)[..., 0]
    alpha2 = lambda t: alpha_pair(t)[..., 1]

    a, b = c.domain
    tt = np.linspace(a, b, int(n) + 1)
    phi = np.asarray(tilde.value(beta_of(tt)))
    if c.closed:
        gap = float(np.max(np.abs(phi[-1] - phi[0])))
        if gap > PERIODICITY_TOL:
            raise EntropyConstructionError(f"lifted table not periodic (gap {gap:.2e})")
        phi[-1] = phi[0]
    return Entropy(
        theta=tt,
        phi=phi,
        alpha1=alpha1(tt),
        alpha2=alpha2(tt),
        domain_kind=c.domain_kind,
        domain=(a, b),
        meta={"kind": "eikonal_lift", "map": tilde.label},
        alpha_fns=(alpha1, alpha2),
    )


# ---------------------------------------------------------------------------
# The transversal pair
# ---------------------------------------------------------------------------


@dataclass
class SpecialPair:
    """Two entropies whose coefficient rows form a negative-determinant
    system at a marked point (the conditioning witness)."""

    phi: Entropy
    phi_bar: Entropy
    m0: float
    witness_det: float
    protected: tuple


def special_pair(
    c: CurveSpec,
    f: Factorization,
    m0: float,
    protect_halfwidth: float = 0.6,
    bump_width: float = 0.25,
    n: int | None = None,
) -> SpecialPair:
    """Entropies with dPhi = lambda_1^2 lambda_2 psi and
    dPhi_bar = lambda_2^2 lambda_1 psi near the marked angle m0.

    Both derivatives equal (lambda_1 lambda_2) times one cofactor row, so the
    pair is built from the single coefficient lambda_1 lambda_2 placed on
    either row, zero-average corrected away from a protected interval around
    m0.  The reported witness is -|lambda'(m0)|^2 < 0, the determinant of the
    coefficient-derivative system at m0.
    """
    if f.min_phase_speed <= 0.0:
        raise FactorizationError("special pair requires strictly monotone phases")
    m0 = float(m0)
    if n is None:
        n = recommended_table_n(c.span, bump_width)

    def lam12(t):
        lam = f.lambda_hat(np.asarray(t, dtype=float))
        return lam.real * lam.imag

    zero = lambda t: np.zeros_like(np.asarray(t, dtype=float))
    protected = (m0 - protect_halfwidth, m0 + protect_halfwidth)
    meta = {"kind": "special_pair", "m0": m0}
    if c.closed:
        corr_a = zero_average_correct(c, lam12, zero, bump_width=bump_width, protected=[protected], n=n)
        corr_b = zero_average_correct(c, zero, lam12, bump_width=bump_width, protected=[protected], n=n)
        phi = integrate_entropy(c, corr_a.alpha1, corr_a.alpha2, base_theta=m0, n=n,
                                meta={**meta, "row": 0})
        phi_bar = integrate_entropy(c, corr_b.alpha1, corr_b.alpha2, base_theta=m0, n=n,
                                    meta={**meta, "row": 1})
    else:
        phi = integrate_entropy(c, lam12, zero, base_theta=m0, n=n, meta={**meta, "row": 0})
        phi_bar = integrate_entropy(c, zero, lam12, base_theta=m0, n=n, meta={**meta, "row": 1})
    witness = -float(f.dphi_lambda(np.array([m0]))[0]) ** 2
    return SpecialPair(phi=phi, phi_bar=phi_bar, m0=m0, witness_det=witness, protected=protected)


# ---------------------------------------------------------------------------
# Standard verification suite
# ---------------------------------------------------------------------------

_DEFAULT_MU_MODES = [
    {0: (1.0, 0.0)},
    {2: (1.0, 0.0)},
    {2: (0.0, 1.0)},
    {3: (1.0, 0.0)},
    {3: (0.0, 1.0)},
    {4: (1.0, 0.0)},
    {4: (0.0, 1.0)},
    {5: (1.0, 0.0)},
    {5: (0.0, 1.0)},
    {6: (1.0, 0.0)},
]


def standard_suite(c: CurveSpec, f: Factorization, n_lifts: int = 10, m0: float | None = None, n: int = 2048) -> list[Entropy]:
    """Cofactor rows, the transversal pair, and lifted eikonal entropies.

    Odd-winding curves keep only the even lifts; the suite is the default
    input of the entropy-production verifier.
    """
    suite = [gamma_row_entropy(c, 0, n), gamma_row_entropy(c, 1, n)]
    if m0 is None:
        m0 = c.domain[0] + 0.5 * c.span
    pair = special_pair(c, f, m0)
    suite.extend([pair.phi, pair.phi_bar])
    odd = f.k_int is not None and f.k_int % 2 == 1
    count = 0
    for modes in _DEFAULT_MU_MODES:
        if count >= n_lifts:
            break
        tilde = eikonal_from_mu_modes(modes)
        if odd and tilde.evenness_defect() > 1e-8:
            continue
        suite.append(lift_eikonal_entropy(c, f, tilde, n=n))
        count += 1
    return suite
