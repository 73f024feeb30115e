import numpy as np
import pytest

from conftest import random_ne_phase_curve
from curvecert import certify, curve as cv, mat2

TWO_PI = 2.0 * np.pi


def segment_curve():
    """Unit-speed straight segment t * E11: rank-one connected."""
    def jet(t):
        t = np.asarray(t, dtype=float)
        z = np.zeros_like(t)
        o = np.ones_like(t)
        return mat2.mat(t, z, z, z), mat2.mat(o, z, z, z), mat2.mat(z, z, z, z)

    return cv.CurveSpec(
        domain_kind=cv.ARC, jet=jet, family_tag="segment", params={},
        domain=(0.0, 1.0), unit_speed=True,
    )


# --------------------------- classification --------------------------------


@pytest.mark.parametrize("k", [1, 2, 3])
def test_gamma_k_nowhere_elliptic(k):
    cert = certify.classify_ellipticity(cv.make_gamma_k(k), 256)
    assert cert.ellipticity_class == certify.NOWHERE_ELLIPTIC
    assert cert.max_abs_det_d1 <= 1e-12
    assert cert.elliptic_components == []


def test_burgers_reparam_nowhere_elliptic():
    r = cv.reparametrize_arclength(cv.make_burgers(0.0, 1.0), 2048)
    cert = certify.classify_ellipticity(r, 256)
    assert cert.ellipticity_class == certify.NOWHERE_ELLIPTIC


def test_pure_conformal_circle_elliptic():
    # [e^{it}]_c / 2 has det(d1) = 1/4 > 0 everywhere (after arc-length it stays conformal)
    c = cv.make_conformal_pair({1: 0.5}, {})
    r = cv.reparametrize_arclength(c, 1024)
    cert = certify.classify_ellipticity(r, 256)
    assert cert.ellipticity_class == certify.ELLIPTIC
    assert len(cert.elliptic_components) == 1


def test_partially_elliptic_components():
    c = cv.make_conformal_pair({1: 0.5}, {2: 0.15, 3: 0.1 / 1.5})
    r = cv.reparametrize_arclength(c, 2048)
    cert = certify.classify_ellipticity(r, 512)
    assert cert.ellipticity_class == certify.PARTIALLY_ELLIPTIC
    assert len(cert.elliptic_components) >= 1


def test_classify_requires_unit_speed():
    with pytest.raises(certify.CertificationError):
        certify.classify_ellipticity(cv.make_burgers(0.0, 1.0), 128)


def test_burgers_q1_flags_degeneracy():
    r = cv.reparametrize_arclength(cv.make_burgers(1.0, 1.0), 2048)
    cert = certify.classify_ellipticity(r, 512)
    assert "degenerate_second_derivative" in cert.flags
    assert abs(cert.min_abs_det_d2) < 1e-6


# --------------------------- rank-one scan ---------------------------------


def test_gamma1_constant_ratio():
    for n in (64, 128, 256, 512):
        cert = certify.scan_rank_one(cv.make_gamma_k(1), n)
        assert abs(cert.c_hat - 0.0625) < 1e-9, n
    assert cert.certified


def test_gamma2_chat_and_near_diagonal():
    cert = certify.scan_rank_one(cv.make_gamma_k(2), 512)
    # the antipodal pair gives the global minimum (1 - 1/9)/16 = 1/18
    assert abs(cert.c_hat - 1.0 / 18.0) < 1e-6
    assert abs(cert.near_diagonal_limit_min - 8.0 / 48.0) < 1e-12
    gap = abs(cert.argmin_pair[0] - cert.argmin_pair[1])
    assert abs(min(gap, TWO_PI - gap) - np.pi) < 0.1


def test_gamma_k_near_diagonal_values():
    for k in (1, 2, 3, 4):
        cert = certify.scan_rank_one(cv.make_gamma_k(k), 256)
        assert abs(cert.near_diagonal_limit_min - ((k + 1) ** 2 - 1) / 48.0) < 1e-10
        assert cert.c_hat > 0
        assert not cert.reflected


def test_segment_curve_has_witness():
    cert = certify.scan_rank_one(segment_curve(), 128)
    assert cert.c_hat <= 0.0
    assert cert.witness is not None
    assert "rank_one_connection_witness" in cert.flags
    assert not cert.certified


def test_scan_rejects_coarse_grids():
    with pytest.raises(certify.CertificationError):
        certify.scan_rank_one(cv.make_gamma_k(1), 32)


def test_scan_monotone_in_n():
    vals = [certify.scan_rank_one(cv.make_gamma_k(3), n).c_hat for n in (64, 128, 256)]
    assert vals[1] <= vals[0] + 1e-9
    assert vals[2] <= vals[1] + 1e-9


def test_reflection_applied_to_flipped_curve():
    base = cv.make_gamma_k(2)

    def jet(t):
        v, d1, d2 = base.jet(t)
        refl = np.array([[1.0, 0.0], [0.0, -1.0]])
        return v @ refl, d1 @ refl, d2 @ refl

    flipped = cv.CurveSpec(
        domain_kind=cv.CLOSED, jet=jet, family_tag="gamma_k_reflected",
        params={"k": 2}, unit_speed=True,
    )
    cert = certify.scan_rank_one(flipped, 256)
    assert cert.reflected
    assert abs(cert.c_hat - 1.0 / 18.0) < 1e-6


def test_scan_matches_naive_oracle(rng):
    for _ in range(3):
        c = random_ne_phase_curve(rng)
        cert = certify.scan_rank_one(c, 128)
        ref, argmin = certify.scan_rank_one_naive(c, 128)
        assert abs(cert.c_hat - ref) < 1e-10


def test_scan_symmetry_full_grid_oracle():
    c = cv.make_gamma_k(2)
    tt = c.grid(128)
    v, _, _ = c.jet(tt)
    a, b, cc, d = v[..., 0, 0], v[..., 0, 1], v[..., 1, 0], v[..., 1, 1]
    det = (a[None] - a[:, None]) * (d[None] - d[:, None]) - (b[None] - b[:, None]) * (cc[None] - cc[:, None])
    assert np.max(np.abs(det - det.T)) < 1e-15


# --------------------------- composite k0 ----------------------------------


def test_k0_circle_pair_is_two():
    k0 = certify.estimate_k0(cv.unit_circle(), cv.unit_circle())
    assert k0 == 2


def test_k0_curvature_monotonicity():
    k_slow = certify.estimate_k0(cv.unit_circle(), cv.unit_circle(1))
    k_fast = certify.estimate_k0(cv.unit_circle(), cv.unit_circle(2))
    assert k_fast <= k_slow


def test_k0_certifies_on_corpus(rng):
    corpus = [
        (cv.unit_circle(), cv.unit_circle()),
        (cv.unit_circle(), cv.unit_circle(2)),
        (cv.planar_from_phase(1, {3: (0.08, -0.05)}), cv.unit_circle()),
        (cv.planar_from_phase(1, {2: (0.0, 0.1)}), cv.unit_circle(2)),
    ]
    for base_c, base_a in corpus:
        k0 = certify.estimate_k0(base_c, base_a)
        comp = cv.make_composite(base_c, base_a, k0)
        cert = certify.scan_rank_one(comp, 256)
        assert cert.certified, (base_c.label, base_a.label, k0, cert.c_hat)


def test_k0_below_estimate_can_fail():
    # with a single-wrap circle against a wiggly conformal base, k = 1 is
    # below the curvature bound and the scan reports the failure explicitly
    base_c = cv.planar_from_phase(1, {3: (0.2, 0.0)})
    k0 = certify.estimate_k0(base_c, cv.unit_circle())
    assert k0 >= 2
    comp = cv.make_composite(base_c, cv.unit_circle(), 1)
    cert = certify.scan_rank_one(comp, 256)
    assert not cert.certified


def test_k0_rejects_flat_base():
    flat = cv.PlanarCurve(
        jet=lambda t: (np.exp(1j * t), 1j * np.exp(1j * t), 0.0 * np.exp(1j * t)),
        closed=True,
    )
    with pytest.raises(certify.CertificationError):
        certify.estimate_k0(cv.unit_circle(), flat)


# --------------------------- openness --------------------------------------


def test_openness_zero_for_uncertified():
    cert = certify.scan_rank_one(segment_curve(), 128)
    est = certify.openness_radius(segment_curve(), cert)
    assert est.delta == 0.0


def test_openness_positive_for_gamma1():
    c = cv.make_gamma_k(1)
    cert = certify.scan_rank_one(c, 256)
    est = certify.openness_radius(c, cert)
    assert est.delta > 0.0
    assert est.kappa_bar == cert.c_hat


def test_openness_monte_carlo_small(rng):
    # small version of the acceptance-scale experiment: perturbations within
    # delta in C^2 recertify at a quarter of the seed constant
    c = cv.make_gamma_k(1)
    cert = certify.scan_rank_one(c, 256)
    est = certify.openness_radius(c, cert)
    for _ in range(5):
        pert = perturbed_gamma1(rng, est.delta)
        pc = certify.scan_rank_one(pert, 256)
        assert pc.c_hat >= est.kappa_bar / 4.0


def perturbed_gamma1(rng, delta):
    """Random phase perturbation of gamma_1 with ||d2 - seed d2||_inf <= delta."""
    mc = int(rng.integers(2, 4))
    ma = int(rng.integers(3, 5))
    raw_c = {mc: (rng.uniform(-1, 1), rng.uniform(-1, 1))}
    raw_a = {ma: (rng.uniform(-1, 1), rng.uniform(-1, 1))}
    trial = cv.make_phase_curve(1, 2, raw_c, raw_a)
    seed = cv.make_gamma_k(1)
    tt = np.linspace(0, TWO_PI, 512, endpoint=False)
    _, _, d2t = trial.jet(tt)
    _, _, d2s = seed.jet(tt)
    dev = float(np.max(mat2.frob(d2t - d2s)))
    scale = 0.9 * delta / dev
    harm_c = {m: (a * scale, b * scale) for m, (a, b) in raw_c.items()}
    harm_a = {m: (a * scale, b * scale) for m, (a, b) in raw_a.items()}
    out = cv.make_phase_curve(1, 2, harm_c, harm_a)
    _, _, d2o = out.jet(tt)
    assert np.max(mat2.frob(d2o - d2s)) <= delta
    return out
