"""Finite-shot simulation of local Pauli measurements and statistical verdicts.

A setting ``(i, j)`` measures ``sigma_i`` on qubit A and ``sigma_j`` on qubit
B, each shot giving a pair of +/-1 outcomes. Index 0 stands for the identity:
that side always reports +1, so ``(0, j)`` is a single-qubit measurement of B.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import trace_norm3
from .pauli import PAULI

__all__ = [
    "STRATEGIES",
    "TOMOGRAPHY_COST",
    "InvalidSetting",
    "IncompletePlan",
    "MeasurementPlan",
    "SettingRecord",
    "MeasurementRecord",
    "StatVerdict",
    "stat_verdict",
    "make_plan",
    "outcome_probabilities",
    "sample_setting",
    "run_plan",
    "estimate_trace_norm",
    "estimate_schmidt_family",
    "estimate_pure_concurrence",
    "cost_accounting",
]

OUTCOMES = ("pp", "pm", "mp", "mm")
_PRODUCT_SIGN = np.array([1, -1, -1, 1])

STRATEGIES = {
    "full9": tuple((i, j) for i in (1, 2, 3) for j in (1, 2, 3)),
    "schmidt3": ((1, 1), (2, 2), (3, 3)),
    "schmidt2": ((1, 1), (3, 3)),
    "pure3_local": ((0, 1), (0, 2), (0, 3)),
}
_ALIASES = {"pure3": "pure3_local"}

# full state tomography: 15 parameters, each needing as many copies
TOMOGRAPHY_COST = 15 * 15


class InvalidSetting(ValueError):
    pass


class IncompletePlan(ValueError):
    """The record lacks settings the requested estimator needs."""


@dataclass(frozen=True)
class MeasurementPlan:
    strategy: str
    settings: tuple
    shots_per_setting: int

    def __post_init__(self):
        if self.shots_per_setting < 1:
            raise ValueError("shots_per_setting must be positive")
        for s in self.settings:
            _check_setting(*s)


def make_plan(strategy, shots):
    name = _ALIASES.get(strategy, strategy)
    if name not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {sorted(STRATEGIES)}")
    return MeasurementPlan(name, STRATEGIES[name], int(shots))


def _check_setting(i, j):
    if not (0 <= i <= 3 and 0 <= j <= 3) or (i, j) == (0, 0):
        raise InvalidSetting(f"({i}, {j}) is not a measurable setting")


@dataclass(frozen=True)
class SettingRecord:
    i: int
    j: int
    shots: int
    counts: dict

    def __post_init__(self):
        _check_setting(self.i, self.j)
        if set(self.counts) != set(OUTCOMES):
            raise ValueError(f"counts need exactly the keys {OUTCOMES}")
        if any(int(n) < 0 for n in self.counts.values()):
            raise ValueError("counts must be nonnegative")
        if sum(int(n) for n in self.counts.values()) != self.shots:
            raise ValueError(f"counts for setting ({self.i}, {self.j}) do not sum to {self.shots} shots")

    @property
    def tally(self):
        return np.array([self.counts[k] for k in OUTCOMES], dtype=np.int64)

    @property
    def estimate(self):
        """Mean of the outcome products."""
        return float(_PRODUCT_SIGN @ self.tally) / self.shots

    @property
    def std_error(self):
        r = self.estimate
        return math.sqrt(max(0.0, 1.0 - r * r) / self.shots)

    def as_dict(self):
        return {"i": self.i, "j": self.j, "shots": self.shots, "counts": {k: int(self.counts[k]) for k in OUTCOMES}}


@dataclass(frozen=True)
class MeasurementRecord:
    settings: tuple

    @property
    def total_shots(self):
        return sum(s.shots for s in self.settings)

    def lookup(self):
        return {(s.i, s.j): s for s in self.settings}

    def estimates(self):
        return {(s.i, s.j): s.estimate for s in self.settings}

    def to_json(self):
        return {"settings": [s.as_dict() for s in self.settings]}

    @classmethod
    def from_json(cls, obj):
        try:
            entries = obj["settings"]
            records = tuple(
                SettingRecord(int(e["i"]), int(e["j"]), int(e["shots"]), {k: int(e["counts"][k]) for k in OUTCOMES})
                for e in entries
            )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed measurement record: {exc}") from exc
        pairs = [(s.i, s.j) for s in records]
        if len(set(pairs)) != len(pairs):
            raise ValueError("measurement record lists a setting twice")
        return cls(records)


def _side_projectors(k):
    if k == 0:
        return PAULI[0], np.zeros((2, 2), dtype=complex)
    return 0.5 * (PAULI[0] + PAULI[k]), 0.5 * (PAULI[0] - PAULI[k])


def outcome_probabilities(rho, i, j):
    """Probabilities of the joint outcomes in the order ``pp, pm, mp, mm``."""
    _check_setting(i, j)
    pa = _side_projectors(i)
    pb = _side_projectors(j)
    probs = np.array([np.trace(rho @ np.kron(x, y)).real for x in pa for y in pb])
    probs = np.clip(probs, 0.0, None)
    return probs / probs.sum()


def sample_setting(rho, i, j, shots, seed=None):
    """Simulate ``shots`` independent measurements of setting ``(i, j)``."""
    if shots < 1:
        raise ValueError("shots must be positive")
    rng = np.random.default_rng(seed)
    tally = rng.multinomial(shots, outcome_probabilities(rho, i, j))
    return SettingRecord(i, j, int(shots), dict(zip(OUTCOMES, (int(n) for n in tally))))


def run_plan(rho, plan, seed=None):
    """Run every setting of ``plan``. Setting ``k`` draws from child ``k`` of
    ``SeedSequence(seed)``, so results do not depend on execution order."""
    children = np.random.SeedSequence(seed).spawn(len(plan.settings))
    return MeasurementRecord(
        tuple(
            sample_setting(rho, i, j, plan.shots_per_setting, child)
            for (i, j), child in zip(plan.settings, children)
        )
    )


@dataclass(frozen=True)
class StatVerdict:
    name: str
    statistic: float
    sigma: float
    threshold: float
    z_margin: float
    z_required: float
    verdict: str

    def as_dict(self):
        return {
            "name": self.name,
            "verdict": self.verdict,
            "statistic": self.statistic,
            "sigma": self.sigma,
            "threshold": self.threshold,
            "z_margin": self.z_margin,
            "z_required": self.z_required,
        }


def stat_verdict(name, statistic, sigma, threshold, z_required):
    margin = statistic - threshold
    if sigma > 0:
        z = margin / sigma
    else:
        z = math.copysign(math.inf, margin) if margin != 0 else 0.0
    if z >= z_required:
        verdict = "entangled"
    elif z <= -z_required:
        verdict = "not_detected"
    else:
        verdict = "inconclusive"
    return StatVerdict(name, float(statistic), float(sigma), float(threshold), float(z), float(z_required), verdict)


def _require(record, pairs, what):
    table = record.lookup()
    missing = [p for p in pairs if p not in table]
    if missing:
        raise IncompletePlan(f"{what} needs settings {missing}")
    return [table[p] for p in pairs]


def _bootstrap_estimates(entries, reps, rng):
    # resample each setting's tally from its empirical outcome distribution
    out = np.empty((reps, len(entries)))
    for k, e in enumerate(entries):
        tallies = rng.multinomial(e.shots, e.tally / e.shots, size=reps)
        out[:, k] = tallies @ _PRODUCT_SIGN / e.shots
    return out


def _bootstrap_sigma(entries, statistic, reps, seed):
    if reps < 2:
        raise ValueError("bootstrap needs at least 2 replicates")
    rng = np.random.default_rng(seed)
    replicates = statistic(_bootstrap_estimates(entries, reps, rng))
    return float(np.std(replicates, ddof=1))


def estimate_trace_norm(record, bootstrap_reps=1000, z_required=3.0, seed=0, assume_diagonal=False):
    """Trace norm of the estimated correlation block against the threshold 1.

    Needs all nine ``(i, j)`` settings with ``i, j`` in 1..3. With
    ``assume_diagonal=True`` the three diagonal settings suffice and the
    off-diagonal correlations are taken to be zero.
    """
    table = record.lookup()
    full = STRATEGIES["full9"]
    if all(p in table for p in full):
        entries = _require(record, full, "trace-norm estimate")

        def statistic(r):
            return trace_norm3(r.reshape(r.shape[:-1] + (3, 3)))
    elif assume_diagonal:
        entries = _require(record, STRATEGIES["schmidt3"], "diagonal trace-norm estimate")

        def statistic(r):
            return np.abs(r).sum(axis=-1)
    else:
        raise IncompletePlan("trace-norm estimate needs the nine settings (i, j), i, j in 1..3")

    point = statistic(np.array([e.estimate for e in entries]))
    sigma = _bootstrap_sigma(entries, statistic, bootstrap_reps, seed)
    return stat_verdict("trace_norm", float(point), sigma, 1.0, z_required)


def estimate_schmidt_family(record, strategy="schmidt2", bootstrap_reps=1000, z_required=3.0, seed=0):
    """Trace norm for a state known to be a depolarized Schmidt state.

    ``schmidt3`` sums ``|r11| + |r22| + |r33|``; ``schmidt2`` skips the
    ``(2, 2)`` setting and uses ``2|r11| + |r33|``, relying on
    ``|T11| == |T22|`` in that family.
    """
    if strategy == "schmidt3":
        entries = _require(record, STRATEGIES["schmidt3"], strategy)

        def statistic(r):
            return np.abs(r).sum(axis=-1)
    elif strategy == "schmidt2":
        entries = _require(record, STRATEGIES["schmidt2"], strategy)

        def statistic(r):
            return 2.0 * np.abs(r[..., 0]) + np.abs(r[..., 1])
    else:
        raise ValueError(f"strategy must be 'schmidt3' or 'schmidt2', got {strategy!r}")

    point = statistic(np.array([e.estimate for e in entries]))
    sigma = _bootstrap_sigma(entries, statistic, bootstrap_reps, seed)
    return stat_verdict(f"trace_norm_{strategy}", float(point), sigma, 1.0, z_required)


def estimate_pure_concurrence(record, bootstrap_reps=1000, seed=0):
    """Concurrence of a state known to be pure, from qubit B's Bloch vector.

    Returns ``(c_estimate, sigma)`` with ``c_estimate = sqrt(max(0, 1 - |r|^2))``.
    """
    entries = _require(record, STRATEGIES["pure3_local"], "pure-state concurrence")

    def statistic(r):
        return np.sqrt(np.clip(1.0 - np.sum(r * r, axis=-1), 0.0, None))

    point = float(statistic(np.array([e.estimate for e in entries])))
    return point, _bootstrap_sigma(entries, statistic, bootstrap_reps, seed)


def cost_accounting(plan):
    """Measurement cost ``f``: settings measured times copies per setting,
    with the copy count equal to the number of settings."""
    n = len(plan.settings)
    return n * n
