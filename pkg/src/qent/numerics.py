"""Fixed-size dense linear algebra for two-qubit work.

Everything here accepts stacked input: a ``(..., n, n)`` array is treated as a
batch of ``n x n`` matrices, so ensembles of states can be processed without a
Python loop.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "TOL",
    "Tolerances",
    "NotHermitian",
    "NotPSD",
    "kron",
    "eig_hermitian",
    "sqrtm_psd",
    "svd3",
    "trace_norm3",
]


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances shared by every module.

    ``boundary`` is the band around a criterion threshold inside which a
    verdict is reported as a boundary case rather than a detection.
    """

    hermitian: float = 1e-10
    psd_error: float = 1e-8
    jacobi_offdiag: float = 1e-13
    jacobi_max_sweeps: int = 100
    normalization: float = 1e-10
    trace: float = 1e-10
    density_min_eig: float = 1e-9
    boundary: float = 1e-8
    diagonal: float = 1e-8
    unit_vector: float = 1e-10
    tau_clip: float = 1e-14


TOL = Tolerances()


class NotHermitian(ValueError):
    pass


class NotPSD(ValueError):
    pass


def kron(a, b):
    """Kronecker product of two (stacks of) square matrices.

    ``kron(a, b)[.., d*i + k, d*j + l] == a[.., i, j] * b[.., k, l]`` with ``d``
    the size of ``b``.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    out = np.einsum("...ij,...kl->...ikjl", a, b)
    shape = out.shape[:-4] + (a.shape[-2] * b.shape[-2], a.shape[-1] * b.shape[-1])
    return out.reshape(shape)


def _hermitian_defect(m):
    return np.abs(m - np.conj(np.swapaxes(m, -1, -2))).max(initial=0.0)


def eig_hermitian(m, tol=None):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    m : array_like, shape (..., n, n)
        Hermitian matrix or stack of matrices.
    tol : Tolerances, optional

    Returns
    -------
    w : ndarray, shape (..., n)
        Real eigenvalues in descending order.
    v : ndarray, shape (..., n, n)
        Orthonormal eigenvectors as columns, ``v[..., :, k]`` pairs with
        ``w[..., k]``. Real when ``m`` is real.

    Raises
    ------
    NotHermitian
        If ``max |m - m^H|`` exceeds ``tol.hermitian``.
    """
    tol = tol or TOL
    real_input = np.isrealobj(m)
    m = np.asarray(m)
    if m.ndim < 2 or m.shape[-1] != m.shape[-2]:
        raise ValueError(f"expected square matrices, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    defect = _hermitian_defect(m)
    if defect > tol.hermitian:
        raise NotHermitian(f"Hermiticity defect {defect:.3e} exceeds {tol.hermitian:.1e}")

    n = m.shape[-1]
    batch_shape = m.shape[:-2]
    a = m.reshape(-1, n, n).astype(complex)
    a = 0.5 * (a + np.conj(np.swapaxes(a, -1, -2)))
    v = np.broadcast_to(np.eye(n, dtype=complex), a.shape).copy()

    scale = np.maximum(1.0, np.linalg.norm(a, axis=(-2, -1)))
    offdiag_mask = ~np.eye(n, dtype=bool)
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]

    for _ in range(tol.jacobi_max_sweeps):
        off = np.sqrt(np.sum(np.abs(a[:, offdiag_mask]) ** 2, axis=-1))
        if np.all(off < tol.jacobi_offdiag * scale):
            break
        for p, q in pairs:
            apq = a[:, p, q]
            r = np.abs(apq)
            # entries this small are already zero for every purpose; dividing by them overflows
            active = r > 1e-100 * scale
            safe_r = np.where(active, r, 1.0)
            phase = np.where(active, apq / safe_r, 1.0)
            theta = (a[:, q, q].real - a[:, p, p].real) / (2.0 * safe_r)
            t = np.where(theta >= 0.0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
            t = np.where(active, t, 0.0)
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c

            # rotation restricted to the (p, q) plane: phase fix then real Givens
            j2 = np.empty((a.shape[0], 2, 2), dtype=complex)
            j2[:, 0, 0] = c
            j2[:, 0, 1] = s
            j2[:, 1, 0] = -s * np.conj(phase)
            j2[:, 1, 1] = c * np.conj(phase)
            idx = [p, q]
            a[:, :, idx] = a[:, :, idx] @ j2
            a[:, idx, :] = np.conj(np.swapaxes(j2, -1, -2)) @ a[:, idx, :]
            a[:, p, q] = 0.0
            a[:, q, p] = 0.0
            v[:, :, idx] = v[:, :, idx] @ j2

    w = np.real(np.diagonal(a, axis1=-2, axis2=-1))
    order = np.argsort(-w, axis=-1, kind="stable")
    w = np.take_along_axis(w, order, axis=-1)
    v = np.take_along_axis(v, order[:, None, :], axis=-1)
    if real_input:
        v = v.real
    return w.reshape(batch_shape + (n,)), v.reshape(batch_shape + (n, n))


def sqrtm_psd(m, tol=None):
    """Principal square root of a Hermitian positive semidefinite matrix.

    Eigenvalues down to ``-tol.psd_error`` are treated as rounding and clipped
    to zero; anything more negative raises :class:`NotPSD`.
    """
    tol = tol or TOL
    w, v = eig_hermitian(m, tol=tol)
    lowest = w[..., -1].min(initial=np.inf)
    if lowest < -tol.psd_error:
        raise NotPSD(f"minimum eigenvalue {lowest:.3e} is below {-tol.psd_error:.1e}")
    root = np.sqrt(np.clip(w, 0.0, None))
    return (v * root[..., None, :]) @ np.conj(np.swapaxes(v, -1, -2))


def _complete_basis(u, filled):
    # Gram-Schmidt the standard basis into the columns of u not yet filled.
    n = u.shape[0]
    basis = [u[:, k] for k in range(n) if filled[k]]
    candidates = iter(np.eye(n))
    for k in range(n):
        if filled[k]:
            continue
        for e in candidates:
            x = e - sum(np.dot(b, e) * b for b in basis)
            norm = np.linalg.norm(x)
            if norm > 1e-6:
                u[:, k] = x / norm
                basis.append(u[:, k])
                break
    return u


def svd3(t, compute_vectors=False, tol=None):
    """Singular values of a real 3x3 matrix (or stack) in descending order.

    The right singular vectors come from the Jacobi eigendecomposition of
    ``t.T @ t``. Each singular value is then taken as ``|t @ v_k|`` rather
    than ``sqrt(lambda_k)``. The two agree, but the norm keeps absolute
    accuracy near zero, where the square root of a rounding-level eigenvalue
    would inflate it to ~1e-8.

    With ``compute_vectors=True`` returns ``(u, s, vh)`` with
    ``t == u @ diag(s) @ vh``; otherwise only ``s``.
    """
    tol = tol or TOL
    t = np.asarray(t, dtype=float)
    if t.shape[-2:] != (3, 3):
        raise ValueError(f"expected 3x3 matrices, got shape {t.shape}")
    gram = np.swapaxes(t, -1, -2) @ t
    _, v = eig_hermitian(gram, tol=tol)
    tv = t @ v
    s = np.linalg.norm(tv, axis=-2)
    order = np.argsort(-s, axis=-1, kind="stable")
    s = np.take_along_axis(s, order, axis=-1)
    if not compute_vectors:
        return s

    v = np.take_along_axis(v, order[..., None, :], axis=-1)
    tv = np.take_along_axis(tv, order[..., None, :], axis=-1)
    cutoff = 1e-12 * np.maximum(1.0, s[..., :1])
    filled = s > cutoff
    u = np.where(filled[..., None, :], tv / np.where(filled, s, 1.0)[..., None, :], 0.0)
    flat_u = u.reshape(-1, 3, 3)
    flat_filled = filled.reshape(-1, 3)
    for k in np.flatnonzero(~flat_filled.all(axis=-1)):
        _complete_basis(flat_u[k], flat_filled[k])
    u = flat_u.reshape(u.shape)
    return u, s, np.swapaxes(v, -1, -2)


def trace_norm3(t, tol=None):
    """Sum of the singular values of a real 3x3 matrix (or stack)."""
    return svd3(t, tol=tol).sum(axis=-1)
