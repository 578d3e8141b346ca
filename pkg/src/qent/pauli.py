"""Pauli-basis representation of two-qubit states.

A density matrix is expanded as ``rho = 1/4 sum_ij R_ij sigma_i (x) sigma_j``
with ``sigma_0`` the identity, so ``R_ij = Tr(rho sigma_i (x) sigma_j)``.
Index 0 on one side marks a single-qubit observable on the other side.
"""
from __future__ import annotations

import numpy as np

from .numerics import kron

__all__ = [
    "PAULI",
    "PAULI_PRODUCTS",
    "correlation_matrix",
    "t_matrix",
    "density_from_correlation",
    "bloch_vectors",
]

PAULI = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

# PAULI_PRODUCTS[i, j] = sigma_i (x) sigma_j
PAULI_PRODUCTS = kron(PAULI[:, None], PAULI[None, :])


def correlation_matrix(rho):
    """Real 4x4 matrix ``R_ij = Tr(rho sigma_i (x) sigma_j)``; stacks allowed."""
    rho = np.asarray(rho)
    # Tr(rho P) = sum_ab rho_ab P_ba
    return np.einsum("...ab,ijba->...ij", rho, PAULI_PRODUCTS).real


def t_matrix(r):
    """The 3x3 correlation block with both indices in 1..3."""
    return np.asarray(r)[..., 1:, 1:]


def density_from_correlation(r):
    """Inverse of :func:`correlation_matrix`.

    The result is Hermitian with trace ``R_00``. It is not projected onto
    the physical states: a noisy or made-up ``R`` can give a matrix with
    negative eigenvalues, which :func:`qent.states.validate` will report.
    """
    r = np.asarray(r, dtype=float)
    return 0.25 * np.einsum("...ij,ijab->...ab", r, PAULI_PRODUCTS)


def bloch_vectors(r):
    """Local Bloch vectors ``(R_10, R_20, R_30)`` of qubit A and ``(R_01, R_02, R_03)`` of B."""
    r = np.asarray(r)
    return r[..., 1:, 0], r[..., 0, 1:]
