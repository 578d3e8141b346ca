"""Construction, sampling and validation of two-qubit states.

Pure states are length-4 complex arrays ``(a, b, c, d)`` in the basis
``|00>, |01>, |10>, |11>``; density matrices are 4x4 complex arrays. Every
random constructor takes an explicit ``seed`` (anything accepted by
:func:`numpy.random.default_rng`) and owns its generator.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .numerics import TOL, eig_hermitian, kron
from .pauli import PAULI

__all__ = [
    "NotNormalized",
    "ParamOutOfRange",
    "StateFormatError",
    "StateDiagnostics",
    "BELL_STATES",
    "pure_state",
    "bell_state",
    "density_from_pure",
    "depolarized_schmidt",
    "werner",
    "random_pure",
    "random_mixed",
    "random_separable",
    "random_local_unitary",
    "validate",
    "state_from_json",
    "load_state",
    "density_to_json",
]


class NotNormalized(ValueError):
    pass


class ParamOutOfRange(ValueError):
    pass


class StateFormatError(ValueError):
    """A state description that does not match the JSON schema."""


_S = 1 / math.sqrt(2)
BELL_STATES = {
    "phi+": np.array([_S, 0, 0, _S], dtype=complex),
    "phi-": np.array([_S, 0, 0, -_S], dtype=complex),
    "psi+": np.array([0, _S, _S, 0], dtype=complex),
    "psi-": np.array([0, _S, -_S, 0], dtype=complex),
}


def pure_state(amplitudes, tol=None):
    """Checked copy of four amplitudes as a complex array."""
    tol = tol or TOL
    psi = np.asarray(amplitudes, dtype=complex).reshape(-1)
    if psi.shape != (4,):
        raise ValueError(f"a two-qubit pure state has 4 amplitudes, got {psi.size}")
    norm2 = float(np.vdot(psi, psi).real)
    if abs(norm2 - 1.0) > tol.normalization:
        raise NotNormalized(f"squared norm is {norm2!r}, expected 1")
    return psi


def bell_state(name="phi+"):
    return BELL_STATES[name].copy()


def density_from_pure(psi, tol=None):
    psi = pure_state(psi, tol=tol)
    return np.outer(psi, psi.conj())


def depolarized_schmidt(a, p):
    """``p |psi><psi| + (1 - p) I/4`` with ``|psi> = a|00> + b|11>``, ``b = sqrt(1 - a^2)``.

    Parameters
    ----------
    a : float
        Schmidt coefficient in [0, 1].
    p : float
        Weight of the pure component in [0, 1].
    """
    if not 0.0 <= a <= 1.0:
        raise ParamOutOfRange(f"Schmidt coefficient a={a!r} is outside [0, 1]")
    if not 0.0 <= p <= 1.0:
        raise ParamOutOfRange(f"mixing weight p={p!r} is outside [0, 1]")
    b = math.sqrt(max(0.0, 1.0 - a * a))
    psi = np.array([a, 0.0, 0.0, b], dtype=complex)
    return p * np.outer(psi, psi.conj()) + (1.0 - p) * np.eye(4) / 4


def werner(p):
    """Depolarized maximally entangled state, ``depolarized_schmidt(1/sqrt(2), p)``."""
    return depolarized_schmidt(_S, p)


def random_pure(seed=None):
    """Pure state uniform on the unit sphere of C^4 (normalized complex Gaussian)."""
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    return z / np.linalg.norm(z)


def random_mixed(seed=None, rank=4):
    """``G G^+ / Tr(G G^+)`` for a 4 x rank complex Gaussian ``G``."""
    if rank not in (1, 2, 3, 4):
        raise ValueError(f"rank must be 1..4, got {rank!r}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((4, rank)) + 1j * rng.standard_normal((4, rank))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def _bloch_projector(n):
    return 0.5 * (PAULI[0] + np.einsum("k,kab->ab", n, PAULI[1:]))


def random_separable(seed=None, terms=1):
    """Convex mixture of ``terms`` random pure product states.

    Each side's Bloch vector is uniform on the sphere; mixture weights are
    uniform on the probability simplex.
    """
    if terms < 1:
        raise ValueError("terms must be at least 1")
    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(terms))
    rho = np.zeros((4, 4), dtype=complex)
    for w in weights:
        na, nb = rng.standard_normal((2, 3))
        na /= np.linalg.norm(na)
        nb /= np.linalg.norm(nb)
        rho += w * kron(_bloch_projector(na), _bloch_projector(nb))
    return rho


def _haar_unitary(rng, n=2):
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_local_unitary(seed=None):
    """Haar-random ``U_A (x) U_B``."""
    rng = np.random.default_rng(seed)
    return kron(_haar_unitary(rng), _haar_unitary(rng))


@dataclass(frozen=True)
class StateDiagnostics:
    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float

    def is_valid(self, tol=None):
        tol = tol or TOL
        return (
            self.hermiticity_defect <= tol.hermitian
            and self.trace_defect <= tol.trace
            and self.min_eigenvalue >= -tol.density_min_eig
        )

    def as_dict(self):
        return {
            "hermiticity_defect": self.hermiticity_defect,
            "trace_defect": self.trace_defect,
            "min_eigenvalue": self.min_eigenvalue,
        }


def validate(rho):
    """Report how far ``rho`` is from a valid density matrix. Never raises
    on numeric content; the spectrum is taken from the Hermitian part."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {rho.shape}")
    herm = 0.5 * (rho + rho.conj().T)
    w, _ = eig_hermitian(herm)
    return StateDiagnostics(
        hermiticity_defect=float(np.abs(rho - rho.conj().T).max()),
        trace_defect=float(abs(np.trace(rho) - 1.0)),
        min_eigenvalue=float(w[-1]),
    )


def _complex_array(data, shape, what):
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise StateFormatError(f"{what}: entries must be [re, im] number pairs") from exc
    if arr.shape != shape + (2,):
        raise StateFormatError(f"{what}: expected shape {list(shape)} of [re, im] pairs, got {list(arr.shape)}")
    return arr[..., 0] + 1j * arr[..., 1]


def _real_param(obj, key):
    value = obj.get(key)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise StateFormatError(f"'{key}' must be a number")
    return float(value)


def state_from_json(obj):
    """Density matrix from a parsed state description.

    Accepted forms (exactly one top-level kind)::

        {"pure": [[re, im] x 4]}
        {"density": [[[re, im] x 4] x 4]}
        {"family": "depolarized_schmidt", "a": <real>, "p": <real>}
        {"family": "werner", "p": <real>}
    """
    if not isinstance(obj, dict):
        raise StateFormatError("state description must be a JSON object")
    kinds = [k for k in ("pure", "density", "family") if k in obj]
    if len(kinds) != 1:
        raise StateFormatError("state description needs exactly one of 'pure', 'density', 'family'")
    kind = kinds[0]
    try:
        if kind == "pure":
            return density_from_pure(_complex_array(obj["pure"], (4,), "pure"))
        if kind == "density":
            return _complex_array(obj["density"], (4, 4), "density")
        family = obj["family"]
        if family == "depolarized_schmidt":
            return depolarized_schmidt(_real_param(obj, "a"), _real_param(obj, "p"))
        if family == "werner":
            return werner(_real_param(obj, "p"))
    except (NotNormalized, ParamOutOfRange) as exc:
        raise StateFormatError(str(exc)) from exc
    raise StateFormatError(f"unknown family {obj['family']!r}")


def load_state(path):
    """Read a state file; returns ``(rho, description)``."""
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise StateFormatError(f"{path}: malformed JSON ({exc})") from exc
    return state_from_json(obj), obj


def density_to_json(rho):
    """Nested ``[re, im]`` lists, the inverse of the ``density`` form."""
    rho = np.asarray(rho, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in rho]
