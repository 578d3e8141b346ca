"""Concurrence, entanglement of formation and the correlation-matrix bound."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import TOL, eig_hermitian, sqrtm_psd, trace_norm3
from .pauli import PAULI, bloch_vectors, correlation_matrix, t_matrix
from .states import pure_state

__all__ = [
    "COutOfRange",
    "EntanglementSummary",
    "spin_flip",
    "wootters_tau",
    "concurrence",
    "concurrence_pure",
    "eof",
    "concurrence_lower_bound",
    "bloch_norm_check",
    "summarize",
]

_YY = np.kron(PAULI[2], PAULI[2])


class COutOfRange(ValueError):
    pass


@dataclass(frozen=True)
class EntanglementSummary:
    concurrence: float
    eof: float
    lower_bound: float
    tau: tuple

    def as_dict(self):
        return {
            "concurrence": self.concurrence,
            "eof": self.eof,
            "lower_bound": self.lower_bound,
            "tau": list(self.tau),
        }


def spin_flip(rho):
    """``(sigma_y (x) sigma_y) rho* (sigma_y (x) sigma_y)``."""
    return _YY @ np.conj(rho) @ _YY


def wootters_tau(rho, tol=None):
    """Square roots of the eigenvalues of ``rho rho~``, descending.

    Evaluated through the Hermitian matrix ``sqrt(rho) rho~ sqrt(rho)``, which
    has the same spectrum as the non-Hermitian product. Stacks allowed.
    """
    tol = tol or TOL
    rho = np.asarray(rho, dtype=complex)
    root = sqrtm_psd(rho, tol=tol)
    sandwich = root @ spin_flip(rho) @ root
    sandwich = 0.5 * (sandwich + np.conj(np.swapaxes(sandwich, -1, -2)))
    w, _ = eig_hermitian(sandwich, tol=tol)
    w = np.where(w < tol.tau_clip, 0.0, w)
    return np.sqrt(w)


def concurrence(rho, tol=None):
    """Wootters concurrence ``max(0, tau_1 - tau_2 - tau_3 - tau_4)``."""
    tau = wootters_tau(rho, tol=tol)
    c = tau[..., 0] - tau[..., 1:].sum(axis=-1)
    c = np.maximum(0.0, c)
    return float(c) if c.ndim == 0 else c


def concurrence_pure(psi):
    """``2 |ad - bc|`` for ``psi = (a, b, c, d)``."""
    a, b, c, d = pure_state(psi)
    return 2.0 * abs(a * d - b * c)


def _binary_entropy(x):
    return 0.0 - sum(q * math.log2(q) for q in (x, 1.0 - x) if q > 0.0)


def eof(c):
    """Entanglement of formation from the concurrence, in bits.

    Raises
    ------
    COutOfRange
        If ``c`` lies outside ``[0, 1]`` by more than rounding.
    """
    if not -1e-12 <= c <= 1.0 + 1e-12:
        raise COutOfRange(f"concurrence {c!r} is outside [0, 1]")
    c = min(1.0, max(0.0, c))
    return _binary_entropy(0.5 * (1.0 + math.sqrt(1.0 - c * c)))


def concurrence_lower_bound(t):
    """``(||T|| - 1) / 2``. Not clipped, so a negative value means no detection."""
    return 0.5 * (trace_norm3(t) - 1.0)


def bloch_norm_check(psi):
    """Both local Bloch-vector norms of a pure state and the value ``sqrt(1 - C^2)``
    they should equal.

    Returns
    -------
    (norm_a, norm_b, predicted)
    """
    psi = pure_state(psi)
    r = correlation_matrix(np.outer(psi, psi.conj()))
    va, vb = bloch_vectors(r)
    c = concurrence_pure(psi)
    return float(np.linalg.norm(va)), float(np.linalg.norm(vb)), math.sqrt(max(0.0, 1.0 - c * c))


def summarize(rho, tol=None):
    tau = wootters_tau(rho, tol=tol)
    c = max(0.0, float(tau[0] - tau[1:].sum()))
    lb = float(concurrence_lower_bound(t_matrix(correlation_matrix(rho))))
    return EntanglementSummary(
        concurrence=c,
        eof=eof(min(c, 1.0)),
        lower_bound=lb,
        tau=tuple(float(x) for x in tau),
    )
