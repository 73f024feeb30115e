import numpy as np
import pytest

from conftest import random_ne_phase_curve
from curvecert import curve as cv, factorize as fz, mat2

TWO_PI = 2.0 * np.pi


@pytest.fixture(scope="module")
def f2():
    return fz.factorize(cv.make_gamma_k(2), 512)


def test_gamma2_closed_forms(f2):
    tt = np.linspace(0, TWO_PI, 41, endpoint=False)
    assert np.max(np.abs(f2.phi_c(tt) - (tt + np.pi / 2))) < 1e-12
    assert np.max(np.abs(f2.phi_a(tt) - (3 * tt + np.pi / 2))) < 1e-12
    assert np.max(np.abs(f2.psi_hat(tt) - 1j * np.exp(1j * tt))) < 1e-12
    assert np.max(np.abs(f2.lambda_hat(tt) + np.exp(2j * tt))) < 1e-12
    assert f2.k_int == 2
    assert f2.deg_psi == 1.0
    assert f2.orientable


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_gamma_k_windings(k):
    f = fz.factorize(cv.make_gamma_k(k), 512)
    assert f.k_int == k
    assert f.l_int == k + 2
    assert f.deg_psi == k / 2.0
    assert f.orientable == (k % 2 == 0)
    # winding additivity: half-integer degree equals the phase-increment count
    lo, hi = f.psi_phase_range()
    assert abs((hi - lo) / TWO_PI - f.deg_psi) < 1e-12


def test_gamma1_unorientable():
    f = fz.factorize(cv.make_gamma_k(1), 512)
    assert f.k_int == 1
    assert not f.orientable
    # sign monodromy of the odd case: psi(t + 2pi) = -psi(t)
    tt = np.linspace(0, TWO_PI, 11)
    assert np.max(np.abs(f.psi_hat(tt + TWO_PI) + f.psi_hat(tt))) < 1e-10


def test_even_monodromy(f2):
    tt = np.linspace(0, TWO_PI, 11)
    assert np.max(np.abs(f2.psi_hat(tt + TWO_PI) - f2.psi_hat(tt))) < 1e-10
    assert np.max(np.abs(f2.lambda_hat(tt + TWO_PI) - f2.lambda_hat(tt))) < 1e-10


def test_outer_product_residual(f2):
    rep = fz.verify_factorization(f2, cv.make_gamma_k(2))
    assert rep.max_outer_residual < 1e-10
    assert rep.max_lambda_norm_dev < 1e-14
    assert rep.max_psi_norm_dev < 1e-14
    assert rep.max_d1_outer_residual < 1e-10
    assert rep.min_phase_speed > 0.9


def test_min_phase_speed_positive_for_random_ne(rng):
    for _ in range(3):
        c = random_ne_phase_curve(rng)
        f = fz.factorize(c, 512)
        assert f.min_phase_speed > 0.0
        rep = fz.verify_factorization(f, c)
        assert rep.max_outer_residual < 1e-8


def test_perturbed_lambda_detected(f2):
    c = cv.make_gamma_k(2)
    tt = np.linspace(0, TWO_PI, 256, endpoint=False)
    _, d1, _ = c.jet(tt)
    lam = mat2.as_vector(f2.lambda_hat(tt) * np.exp(1j * 1e-3))
    psi = mat2.as_vector(f2.psi_hat(tt))
    res = np.max(mat2.frob(mat2.cof(d1) - mat2.outer(lam, psi)))
    assert res >= 1e-4


def test_factorize_rejects_non_unit_speed():
    with pytest.raises(fz.FactorizationError):
        fz.factorize(cv.make_burgers(0.0, 1.0), 256)


def test_factorize_rejects_elliptic():
    c = cv.reparametrize_arclength(cv.make_conformal_pair({1: 0.5}, {}), 1024)
    with pytest.raises(fz.FactorizationError):
        fz.factorize(c, 256)


def test_arc_factorization_burgers():
    r = cv.reparametrize_arclength(cv.make_burgers(0.0, 1.0), 4096)
    f = fz.factorize(r, 512)
    assert f.k_int is None and f.deg_psi is None
    assert f.orientable
    rep = fz.verify_factorization(f, r)
    assert rep.max_outer_residual < 1e-7
    assert rep.min_phase_speed > 0.0


# ------------------------------- inverses ----------------------------------


def test_psi_inverse_gamma2_at_i(f2):
    t = fz.psi_inverse(f2, 1j, branch=0)
    assert abs(t) < 1e-10


def test_psi_inverse_round_trip(f2, rng):
    for t0 in rng.uniform(0, TWO_PI, 100):
        xi = complex(f2.psi_hat(np.array([t0]))[0])
        # recover the branch from the phase
        target = np.angle(xi)
        branch = int(round((float(f2.phi_psi(np.array([t0]))[0]) - target) / np.pi))
        t = fz.psi_inverse(f2, xi, branch=branch)
        assert abs(t - t0) < 1e-10


def test_psi_preimages_gamma3_three_branches(rng):
    f = fz.factorize(cv.make_gamma_k(3), 512)
    for _ in range(5):
        xi = np.exp(1j * rng.uniform(0, np.pi))
        pts = fz.psi_preimages(f, xi)
        assert len(pts) == 3
        gaps = np.diff(np.concatenate([pts, [pts[0] + TWO_PI]]))
        assert np.min(gaps) > 0.5  # uniformly separated branches
        vals = f.psi_hat(pts)
        align = np.abs(np.real(vals * np.conj(xi)))
        assert np.max(np.abs(align - 1.0)) < 1e-9


def test_psi_inverse_branch_out_of_range(f2):
    with pytest.raises(fz.FactorizationError):
        fz.psi_inverse(f2, 1j, branch=5)


def test_gamma1_two_rp1_preimages():
    # deg 1/2: each RP^1 point has exactly one S^1 pair {t: psi(t) = +-xi}
    f = fz.factorize(cv.make_gamma_k(1), 512)
    pts = fz.psi_preimages(f, np.exp(0.3j))
    assert len(pts) == 1
