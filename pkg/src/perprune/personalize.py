"""Per-participant ensemble selection from a Pareto archive, and the
end-to-end pruning variants (BF, OMF and the per-participant PEPs baseline)."""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

from .learners import PredictionMatrix
from .objectives import ObjectiveMode
from .solver import ArchiveEntry, ParetoArchive, SolverConfig, solve

VARIANTS = ("bf", "omf", "peps")


@dataclass(frozen=True)
class TradeoffProfile:
    alphas: np.ndarray

    def __post_init__(self):
        alphas = np.asarray(self.alphas, dtype=float).reshape(-1)
        if alphas.size < 1:
            raise ValueError("need at least one participant")
        if not np.all(np.isfinite(alphas)) or np.any(alphas < 0):
            raise ValueError("trade-off levels must be finite and non-negative")
        object.__setattr__(self, "alphas", alphas)

    @property
    def n(self) -> int:
        return self.alphas.shape[0]

    @classmethod
    def uniform(cls, n: int, low: float = 0.01, high: float = 0.2, seed: int = 0) -> "TradeoffProfile":
        if low > high:
            raise ValueError("alpha range needs low <= high")
        return cls(np.random.default_rng(seed).uniform(low, high, size=n))


@dataclass
class Assignment:
    """Chosen archive entry per participant, in original participant order."""

    alphas: np.ndarray
    entries: list[ArchiveEntry]
    losses: np.ndarray

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def mean_loss(self) -> float:
        return float(self.losses.mean())

    @property
    def max_loss(self) -> float:
        return float(self.losses.max())

    def sizes(self) -> np.ndarray:
        return np.array([e.size for e in self.entries])

    def to_json(self) -> list[dict]:
        return [
            {
                "participant": j,
                "alpha": float(a),
                "mask": e.bits,
                "error": e.error,
                "size": e.size,
                "loss": float(loss),
            }
            for j, (a, e, loss) in enumerate(zip(self.alphas, self.entries, self.losses))
        ]

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)


def _assignment(alphas: np.ndarray, chosen: list[ArchiveEntry]) -> Assignment:
    losses = np.array([e.error + a * e.cost for a, e in zip(alphas, chosen)])
    return Assignment(alphas, chosen, losses)


def select_sorted(archive: ParetoArchive, profile: TradeoffProfile, pm: PredictionMatrix | None = None) -> Assignment:
    """Two-pointer sweep: archive by size descending, alphas ascending.

    The pointer advances while the next (smaller) ensemble has a loss no
    greater than the current one, so equal-loss neighbours resolve toward the
    smaller ensemble. Only adjacent entries are compared; on non-convex fronts
    this can stop short of the global argmin (see :func:`select_exact`).
    """
    if len(archive) == 0:
        raise ValueError("empty archive")
    front = sorted(archive.entries, key=lambda e: (-e.size, e.error, e.bits))
    alphas = profile.alphas
    order = np.argsort(alphas, kind="stable")
    chosen: list[ArchiveEntry | None] = [None] * profile.n
    i, last = 0, len(front) - 1
    for j in order:
        a = alphas[j]
        while i < last and front[i + 1].error + a * front[i + 1].cost <= front[i].error + a * front[i].cost:
            i += 1
        chosen[j] = front[i]
    return _assignment(alphas, chosen)


def select_exact(archive: ParetoArchive, profile: TradeoffProfile, pm: PredictionMatrix | None = None) -> Assignment:
    """Full scan per participant; ties go to the smaller ensemble, then the
    lexicographically smaller mask."""
    if len(archive) == 0:
        raise ValueError("empty archive")
    keyed = [(e.size, e.bits, e) for e in archive.entries]
    chosen = []
    for a in profile.alphas:
        best = min(keyed, key=lambda k: (k[2].error + a * k[2].cost, k[0], k[1]))
        chosen.append(best[2])
    return _assignment(profile.alphas, chosen)


SELECTORS = {"sorted": select_sorted, "exact": select_exact}


def framework_mode(variant: str, profile: TradeoffProfile, c_min: float = 0.3, c_max: float = 1.7) -> ObjectiveMode:
    if variant == "bf":
        return ObjectiveMode.plain()
    if variant == "omf":
        return ObjectiveMode.mixture(profile.alphas.min(), profile.alphas.max(), c_min, c_max)
    raise ValueError(f"unknown framework variant {variant!r}")


def run_framework(
    pm: PredictionMatrix,
    profile: TradeoffProfile,
    config: SolverConfig = SolverConfig(),
    variant: str = "bf",
    c_min: float = 0.3,
    c_max: float = 1.7,
    select: str = "sorted",
) -> tuple[Assignment, ParetoArchive]:
    """Solve once, then pick an ensemble per participant.

    ``bf`` searches (E, cost); ``omf`` searches the mixture objectives with
    alpha_min/alpha_max taken from the profile. Reported losses are always the
    plain E + alpha*cost.
    """
    mode = framework_mode(variant, profile, c_min, c_max)
    archive = solve(pm, replace(config, mode=mode))
    return SELECTORS[select](archive, profile, pm), archive


def run_peps_baseline(
    pm: PredictionMatrix,
    profile: TradeoffProfile,
    config: SolverConfig = SolverConfig(),
    select: str = "sorted",
    objective: str = "plain",
) -> tuple[Assignment, list[ParetoArchive]]:
    """Rerun the pruner once per participant, seeded ``config.seed + j``.

    With ``objective="plain"`` each run is the same (E, cost) search the
    basic framework uses, followed by selection at that participant's alpha,
    so n=1 reproduces a BF run exactly. ``objective="combined"`` instead runs
    a single-objective search on E + alpha_j*cost (both mixture objectives
    pinned to alpha_j).
    """
    if objective not in ("plain", "combined"):
        raise ValueError(f"unknown baseline objective {objective!r}")
    chosen, archives = [], []
    for j, a in enumerate(profile.alphas):
        if objective == "plain":
            mode = ObjectiveMode.plain()
        else:
            mode = ObjectiveMode.mixture(a, a, 1.0, 1.0)
        archive = solve(pm, replace(config, mode=mode, seed=config.seed + j))
        chosen.append(SELECTORS[select](archive, TradeoffProfile([a])).entries[0])
        archives.append(archive)
    return _assignment(profile.alphas, chosen), archives


def run_variant(
    variant: str,
    pm: PredictionMatrix,
    profile: TradeoffProfile,
    config: SolverConfig = SolverConfig(),
    c_min: float = 0.3,
    c_max: float = 1.7,
    select: str = "sorted",
    peps_objective: str = "plain",
) -> tuple[Assignment, list[ParetoArchive]]:
    if variant == "peps":
        return run_peps_baseline(pm, profile, config, select, peps_objective)
    assignment, archive = run_framework(pm, profile, config, variant, c_min, c_max, select)
    return assignment, [archive]
