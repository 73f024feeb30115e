import numpy as np

from curvecert import mat2


def test_cof_direct_formula():
    m = mat2.mat(1.0, 2.0, 3.0, 4.0)
    expected = mat2.mat(4.0, -3.0, -2.0, 1.0)
    assert np.array_equal(mat2.cof(m), expected)


def test_cof_identity_fixed_point():
    eye = np.eye(2)
    assert np.array_equal(mat2.cof(eye), eye)


def test_cof_involution():
    m = mat2.mat(1.0, 2.0, 3.0, 4.0)
    assert np.array_equal(mat2.cof(mat2.cof(m)), m)


def test_cof_preserves_det(rng):
    m = rng.standard_normal((50, 2, 2))
    assert np.allclose(mat2.det2(mat2.cof(m)), mat2.det2(m), atol=1e-14)


def test_split_identity():
    s = mat2.conformal_split(np.eye(2))
    assert s.z_c == 1.0 + 0.0j
    assert s.z_a == 0.0 + 0.0j


def test_split_anticonformal_diag():
    s = mat2.conformal_split(mat2.mat(1.0, 0.0, 0.0, -1.0))
    assert s.z_c == 0.0 + 0.0j
    assert s.z_a == 1.0 + 0.0j


def test_split_gamma1_at_zero():
    # gamma_1(0) = diag(3/4, 1/4): conformal part 1/2, anticonformal 1/4
    s = mat2.conformal_split(mat2.mat(0.75, 0.0, 0.0, 0.25))
    assert s.z_c == 0.5 + 0.0j
    assert s.z_a == 0.25 + 0.0j


def test_embed_i_conformal_is_rotation():
    assert np.array_equal(mat2.embed(1j, mat2.CONFORMAL), mat2.mat(0.0, -1.0, 1.0, 0.0))


def test_embed_i_anticonformal_is_reflection():
    assert np.array_equal(mat2.embed(1j, mat2.ANTICONFORMAL), mat2.mat(0.0, 1.0, 1.0, 0.0))


def test_embed_det_signs():
    z = np.exp(1j * np.pi / 2)
    assert abs(mat2.det2(mat2.embed(z, mat2.CONFORMAL)) - 1.0) < 1e-15
    assert abs(mat2.det2(mat2.embed(z, mat2.ANTICONFORMAL)) + 1.0) < 1e-15


def test_embed_rejects_unknown_kind():
    import pytest

    with pytest.raises(ValueError):
        mat2.embed(1.0, "diagonal")


def test_split_round_trip_random(rng):
    m = rng.standard_normal((200, 2, 2))
    s = mat2.conformal_split(m)
    back = mat2.assemble(s.z_c, s.z_a)
    assert np.max(np.abs(back - m)) < 1e-14


def test_frobenius_identity_random(rng):
    m = rng.standard_normal((200, 2, 2))
    s = mat2.conformal_split(m)
    lhs = mat2.frob(m) ** 2
    rhs = 2.0 * np.abs(s.z_c) ** 2 + 2.0 * np.abs(s.z_a) ** 2
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_det_split_identity_random(rng):
    z = rng.standard_normal(100) + 1j * rng.standard_normal(100)
    w = rng.standard_normal(100) + 1j * rng.standard_normal(100)
    m = mat2.assemble(z, w)
    assert np.max(np.abs(mat2.det2(m) - (np.abs(z) ** 2 - np.abs(w) ** 2))) < 1e-12


def test_outer_and_vector_round_trip(rng):
    u = rng.standard_normal((30, 2))
    v = rng.standard_normal((30, 2))
    m = mat2.outer(u, v)
    assert m.shape == (30, 2, 2)
    assert np.allclose(m[:, 0, 1], u[:, 0] * v[:, 1])
    z = mat2.as_complex(u)
    assert np.max(np.abs(mat2.as_vector(z) - u)) == 0.0
