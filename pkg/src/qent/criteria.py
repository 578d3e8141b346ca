"""Entanglement tests on two-qubit states and their correlation matrices.

Every test returns a :class:`CriterionReport` whose ``margin`` is positive
exactly when the test fires. Margins within ``boundary_tol`` of zero are
flagged as boundary cases and never count as a detection.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .measures import concurrence_lower_bound
from .numerics import TOL, eig_hermitian, svd3
from .pauli import PAULI_PRODUCTS, correlation_matrix, t_matrix

__all__ = [
    "ENTANGLED",
    "NOT_DETECTED",
    "NonUnitVector",
    "NotDiagonal",
    "CriterionReport",
    "criterion_report",
    "BellSettings",
    "trace_norm_test",
    "chsh_horodecki",
    "bell_expectation",
    "chsh_optimal_settings",
    "bell_maximize",
    "bell_maximize_many",
    "partial_transpose",
    "ppt_min_eigenvalue",
    "ppt_test",
    "witness_matrix",
    "witness_from_diagonal_signs",
    "witness_test",
    "lower_bound_test",
    "run_all",
]

ENTANGLED = "entangled"
NOT_DETECTED = "not_detected"


class NonUnitVector(ValueError):
    pass


class NotDiagonal(ValueError):
    pass


@dataclass(frozen=True)
class CriterionReport:
    name: str
    statistic: float
    threshold: float
    margin: float
    verdict: str
    boundary: bool = False

    @property
    def entangled(self):
        return self.verdict == ENTANGLED

    def as_dict(self):
        return {
            "name": self.name,
            "verdict": self.verdict,
            "statistic": self.statistic,
            "threshold": self.threshold,
            "margin": self.margin,
            "boundary": self.boundary,
        }


def criterion_report(name, statistic, threshold, boundary_tol=None):
    """Build a report; detection requires ``statistic - threshold > boundary_tol``."""
    if boundary_tol is None:
        boundary_tol = TOL.boundary
    statistic = float(statistic)
    margin = statistic - threshold
    boundary = abs(margin) <= boundary_tol
    verdict = ENTANGLED if margin > boundary_tol else NOT_DETECTED
    return CriterionReport(name, statistic, float(threshold), margin, verdict, boundary)


def _as_t(m):
    m = np.asarray(m, dtype=float)
    if m.shape == (4, 4):
        return t_matrix(m)
    if m.shape == (3, 3):
        return m
    raise ValueError(f"expected a 4x4 correlation matrix or its 3x3 block, got shape {m.shape}")


def trace_norm_test(t, boundary_tol=None):
    """Fires when the trace norm of the correlation block exceeds 1."""
    return criterion_report("trace_norm", svd3(_as_t(t)).sum(), 1.0, boundary_tol)


def chsh_horodecki(t, boundary_tol=None):
    """Fires when ``s1^2 + s2^2 > 1``, i.e. when some CHSH setting exceeds 2."""
    s = svd3(_as_t(t))
    return criterion_report("chsh", s[0] ** 2 + s[1] ** 2, 1.0, boundary_tol)


@dataclass(frozen=True)
class BellSettings:
    """Measurement directions: ``a``, ``b`` for qubit A and ``c``, ``d`` for qubit B."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        for name in "abcd":
            v = np.asarray(getattr(self, name), dtype=float)
            if v.shape != (3,):
                raise ValueError(f"setting {name} must be a 3-vector")
            if abs(np.linalg.norm(v) - 1.0) > TOL.unit_vector:
                raise NonUnitVector(f"setting {name} has norm {np.linalg.norm(v)!r}")
            object.__setattr__(self, name, v)


def bell_expectation(r, settings):
    """``<B> = a.T(c + d) + b.T(c - d)`` for the CHSH operator built on ``settings``."""
    t = _as_t(r)
    s = settings
    return float(s.a @ t @ (s.c + s.d) + s.b @ t @ (s.c - s.d))


def chsh_optimal_settings(t):
    """Closed-form maximizer of :func:`bell_expectation` from the singular frame of ``t``.

    Returns ``(value, settings)`` with ``value == 2 sqrt(s1^2 + s2^2)``.
    """
    u, s, vh = svd3(_as_t(t), compute_vectors=True)
    v = vh.T
    theta = math.atan2(s[1], s[0]) if s[0] > 0 else math.pi / 4
    c = math.cos(theta) * v[:, 0] + math.sin(theta) * v[:, 1]
    d = math.cos(theta) * v[:, 0] - math.sin(theta) * v[:, 1]
    settings = BellSettings(u[:, 0], u[:, 1], c, d)
    return 2.0 * math.hypot(s[0], s[1]), settings


def _unit_rows(x, fallback):
    norm = np.linalg.norm(x, axis=-1, keepdims=True)
    ok = norm > 1e-300
    return np.where(ok, x / np.where(ok, norm, 1.0), fallback)


def bell_maximize(r, restarts=50, seed=0, tol=1e-12, max_iter=20000):
    """Numerically maximize the CHSH expectation over all unit settings.

    Block-coordinate ascent from ``restarts`` random starting points: with
    ``c, d`` fixed the optimal ``a, b`` are the normalized ``T(c+d)`` and
    ``T(c-d)``, and symmetrically for ``c, d``. Each half-step is an exact
    block maximization, so the value never decreases. No singular value
    decomposition is used, so the result is an independent check of the
    closed form in :func:`chsh_optimal_settings`.

    Returns
    -------
    (value, settings)
    """
    values, vectors = bell_maximize_many(_as_t(r)[None], restarts, seed, tol, max_iter)
    return float(values[0]), BellSettings(*vectors[0])


def bell_maximize_many(rs, restarts=50, seed=0, tol=1e-12, max_iter=20000):
    """:func:`bell_maximize` over a stack of ``(n, 4, 4)`` or ``(n, 3, 3)`` matrices.

    Returns ``(values, vectors)`` with ``vectors[k] = (a, b, c, d)`` as a 4x3 array.
    """
    rs = np.asarray(rs, dtype=float)
    t = rs[..., 1:, 1:] if rs.shape[-2:] == (4, 4) else rs
    if t.ndim != 3 or t.shape[-2:] != (3, 3):
        raise ValueError(f"expected a stack of correlation matrices, got shape {rs.shape}")
    tt = np.swapaxes(t, -1, -2)
    rng = np.random.default_rng(seed)
    shape = (t.shape[0], restarts, 3)
    a, b, c, d = (_unit_rows(rng.standard_normal(shape), 0.0) for _ in range(4))

    def value(t, a, b, c, d):
        return np.einsum("nri,nij,nrj->nr", a, t, c + d) + np.einsum("nri,nij,nrj->nr", b, t, c - d)

    current = value(t, a, b, c, d)
    active = np.arange(t.shape[0])
    for _ in range(max_iter):
        if active.size == 0:
            break
        ta, tta = t[active], tt[active]
        aa, ba, ca, da = a[active], b[active], c[active], d[active]
        ca, da = _unit_rows((aa + ba) @ ta, ca), _unit_rows((aa - ba) @ ta, da)
        aa, ba = _unit_rows((ca + da) @ tta, aa), _unit_rows((ca - da) @ tta, ba)
        new = value(ta, aa, ba, ca, da)
        gain = np.max(new - current[active], axis=-1)
        a[active], b[active], c[active], d[active] = aa, ba, ca, da
        current[active] = new
        active = active[gain >= tol]
    best = np.argmax(current, axis=-1)
    pick = np.arange(t.shape[0])
    vectors = np.stack([x[pick, best] for x in (a, b, c, d)], axis=1)
    return current[pick, best], vectors


def partial_transpose(rho, side="A"):
    """Transpose one qubit's indices: ``rho[(i,k),(j,l)] -> rho[(j,k),(i,l)]`` for side A."""
    rho = np.asarray(rho)
    x = rho.reshape(rho.shape[:-2] + (2, 2, 2, 2))
    if side == "A":
        x = np.swapaxes(x, -4, -2)
    elif side == "B":
        x = np.swapaxes(x, -3, -1)
    else:
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    return x.reshape(rho.shape)


def ppt_min_eigenvalue(rho, side="A"):
    """Smallest eigenvalue of the partial transpose; stacks allowed."""
    w, _ = eig_hermitian(partial_transpose(np.asarray(rho, dtype=complex), side))
    return w[..., -1]


def ppt_test(rho, boundary_tol=None):
    """Fires when the partial transpose has a negative eigenvalue."""
    return criterion_report("ppt", -ppt_min_eigenvalue(rho), 0.0, boundary_tol)


def witness_matrix():
    """``I - XX - YY + ZZ``, written out in the computational basis."""
    return 2.0 * np.array(
        [[1, 0, 0, 0], [0, 0, -1, 0], [0, -1, 0, 0], [0, 0, 0, 1]],
        dtype=complex,
    )


def witness_from_diagonal_signs(t, tol=None):
    """``I - sum_i sgn(T_ii) sigma_i (x) sigma_i`` for a diagonal correlation block.

    For the state that produced ``t`` the expectation equals ``1 - ||T||``.
    """
    tol = tol or TOL
    t = _as_t(t)
    off = np.abs(t - np.diag(np.diag(t))).max()
    if off > tol.diagonal:
        raise NotDiagonal(f"off-diagonal correlation {off:.3e} exceeds {tol.diagonal:.1e}")
    w = PAULI_PRODUCTS[0, 0].copy()
    for i in range(1, 4):
        w -= np.sign(t[i - 1, i - 1]) * PAULI_PRODUCTS[i, i]
    return w


def witness_test(rho, w=None, boundary_tol=None):
    """Fires when ``Tr(W rho) < 0``; the statistic is ``-Tr(W rho)``. Defaults
    to :func:`witness_matrix`."""
    if w is None:
        w = witness_matrix()
    return criterion_report("witness", -np.trace(w @ rho).real, 0.0, boundary_tol)


def lower_bound_test(t, boundary_tol=None):
    """Fires when the concurrence lower bound ``(||T|| - 1)/2`` is positive."""
    return criterion_report("concurrence_lower_bound", concurrence_lower_bound(_as_t(t)), 0.0, boundary_tol)


def run_all(rho, boundary_tol=None):
    """Every test on ``rho``, in a fixed order: trace norm, CHSH, PPT,
    witness, concurrence lower bound."""
    t = t_matrix(correlation_matrix(rho))
    return [
        trace_norm_test(t, boundary_tol),
        chsh_horodecki(t, boundary_tol),
        ppt_test(rho, boundary_tol),
        witness_test(rho, boundary_tol=boundary_tol),
        lower_bound_test(t, boundary_tol),
    ]
