import numpy as np
import pytest

from curvecert import curve as cv
from curvecert import mat2


@pytest.fixture
def rng():
    return np.random.default_rng(20240809)


def central_diff_jet(c, t, h=1e-3):
    """4th-order central differences of the curve value; an independent jet oracle."""
    t = np.asarray(t, dtype=float)

    def val(x):
        v, _, _ = c.jet(c.wrap(x))
        return v

    d1 = (8.0 * (val(t + h) - val(t - h)) - (val(t + 2 * h) - val(t - 2 * h))) / (12.0 * h)
    d2 = (
        16.0 * (val(t + h) + val(t - h))
        - (val(t + 2 * h) + val(t - 2 * h))
        - 30.0 * val(t)
    ) / (12.0 * h * h)
    return d1, d2


def random_ne_phase_curve(rng, max_amp=0.25):
    """Random closed unit-speed nowhere-elliptic curve from trig-polynomial phases."""
    mc = int(rng.integers(2, 5))
    ma = int(rng.integers(3, 6))
    amp = max_amp / 2.0
    harm_c = {mc: (rng.uniform(-amp, amp), rng.uniform(-amp, amp))}
    harm_a = {ma: (rng.uniform(-amp, amp), rng.uniform(-amp, amp))}
    # windings (1, 2): the base pair of the smallest nontrivial loop family
    return cv.make_phase_curve(1, 2, harm_c, harm_a)


def assert_mat_close(a, b, tol, msg=""):
    err = float(np.max(mat2.frob(np.asarray(a) - np.asarray(b))))
    assert err <= tol, f"{msg} max Frobenius error {err:.3e} > {tol:.1e}"
