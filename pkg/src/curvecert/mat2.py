"""2x2 matrix algebra and the conformal/anticonformal decomposition.

Matrices are numpy arrays of shape (..., 2, 2); all operations broadcast
over leading axes.  Planar vectors are identified with complex numbers
throughout (multiplication by i rotates by pi/2).

Every matrix splits uniquely as M = [z_c]_c + [z_a]_a with

    [z]_c = [[Re z, -Im z], [Im z, Re z]],
    [z]_a = [[Re z,  Im z], [Im z, -Re z]],

and det M = |z_c|^2 - |z_a|^2, |M|^2 = 2|z_c|^2 + 2|z_a|^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

CONFORMAL = "conformal"
ANTICONFORMAL = "anticonformal"


@dataclass(frozen=True)
class ConformalSplit:
    """Conformal part ``z_c`` and anticonformal part ``z_a`` of a matrix."""

    z_c: np.ndarray | complex
    z_a: np.ndarray | complex


def mat(a11, a12, a21, a22) -> np.ndarray:
    """Assemble a (..., 2, 2) array from four broadcastable entry arrays."""
    a11, a12, a21, a22 = np.broadcast_arrays(
        np.asarray(a11, dtype=float),
        np.asarray(a12, dtype=float),
        np.asarray(a21, dtype=float),
        np.asarray(a22, dtype=float),
    )
    out = np.empty(a11.shape + (2, 2))
    out[..., 0, 0] = a11
    out[..., 0, 1] = a12
    out[..., 1, 0] = a21
    out[..., 1, 1] = a22
    return out


def cof(m: np.ndarray) -> np.ndarray:
    """Cofactor matrix [[a22, -a21], [-a12, a11]]; an involution with det(cof M) = det M."""
    m = np.asarray(m, dtype=float)
    return mat(m[..., 1, 1], -m[..., 1, 0], -m[..., 0, 1], m[..., 0, 0])


def det2(m: np.ndarray) -> np.ndarray:
    """Determinant a11*a22 - a12*a21."""
    m = np.asarray(m, dtype=float)
    return m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]


def frob(m: np.ndarray) -> np.ndarray:
    """Frobenius norm."""
    m = np.asarray(m, dtype=float)
    return np.sqrt(np.sum(m * m, axis=(-2, -1)))


def frob_dot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Frobenius inner product A : B."""
    return np.sum(np.asarray(a, dtype=float) * np.asarray(b, dtype=float), axis=(-2, -1))


def conformal_split(m: np.ndarray) -> ConformalSplit:
    """Split M into conformal and anticonformal complex parts.

    z_c = ((a11 + a22) + i (a21 - a12)) / 2,
    z_a = ((a11 - a22) + i (a21 + a12)) / 2.

    The round trip ``embed(z_c, 'conformal') + embed(z_a, 'anticonformal')``
    reproduces M exactly.
    """
    m = np.asarray(m, dtype=float)
    z_c = 0.5 * ((m[..., 0, 0] + m[..., 1, 1]) + 1j * (m[..., 1, 0] - m[..., 0, 1]))
    z_a = 0.5 * ((m[..., 0, 0] - m[..., 1, 1]) + 1j * (m[..., 1, 0] + m[..., 0, 1]))
    return ConformalSplit(z_c=z_c, z_a=z_a)


def embed(z, kind: str) -> np.ndarray:
    """Embed a complex scalar as a conformal or anticonformal matrix.

    det(embed(z, 'conformal')) = |z|^2, det(embed(z, 'anticonformal')) = -|z|^2.
    """
    z = np.asarray(z, dtype=complex)
    if kind == CONFORMAL:
        return mat(z.real, -z.imag, z.imag, z.real)
    if kind == ANTICONFORMAL:
        return mat(z.real, z.imag, z.imag, -z.real)
    raise ValueError(f"kind must be {CONFORMAL!r} or {ANTICONFORMAL!r}, got {kind!r}")


def assemble(z_c, z_a) -> np.ndarray:
    """Inverse of :func:`conformal_split`."""
    return embed(z_c, CONFORMAL) + embed(z_a, ANTICONFORMAL)


def as_vector(z) -> np.ndarray:
    """Complex scalar(s) -> real (..., 2) vector(s)."""
    z = np.asarray(z, dtype=complex)
    return np.stack([z.real, z.imag], axis=-1)


def as_complex(v) -> np.ndarray:
    """Real (..., 2) vector(s) -> complex scalar(s)."""
    v = np.asarray(v, dtype=float)
    return v[..., 0] + 1j * v[..., 1]


def outer(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Outer product u (x) v of (..., 2) vectors, as a (..., 2, 2) matrix."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return u[..., :, None] * v[..., None, :]
