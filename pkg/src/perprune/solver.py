"""Evolutionary Pareto archive over ensemble masks, plus an exhaustive oracle."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from .learners import PredictionMatrix
from .objectives import ObjectiveMode, Objectives, dominates, mask_to_bits

MAX_ENUMERATION_M = 20


@dataclass(frozen=True)
class ArchiveEntry:
    mask: np.ndarray
    objectives: Objectives
    error: float
    cost: float
    born_at: int = 0

    @property
    def size(self) -> int:
        return int(np.count_nonzero(self.mask))

    @property
    def bits(self) -> str:
        return mask_to_bits(self.mask)

    def loss(self, alpha: float) -> float:
        return self.error + alpha * self.cost

    def to_dict(self) -> dict:
        return {
            "mask": self.bits,
            "error": self.error,
            "size": self.size,
            "cost": self.cost,
            "o1": self.objectives.o1,
            "o2": self.objectives.o2,
        }


@dataclass
class ParetoArchive:
    entries: list[ArchiveEntry] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[ArchiveEntry]:
        return iter(self.entries)

    def __getitem__(self, i: int) -> ArchiveEntry:
        return self.entries[i]

    @property
    def l(self) -> int:  # noqa: E743
        return len(self.entries)

    def objective_set(self) -> set[Objectives]:
        return {e.objectives for e in self.entries}

    def offer(self, entry: ArchiveEntry) -> bool:
        """Insert ``entry`` unless it is dominated or duplicates an existing
        objective vector; evict everything it dominates. Returns whether it
        was inserted."""
        f = entry.objectives
        for e in self.entries:
            if e.objectives == f or dominates(e.objectives, f):
                return False
        self.entries = [e for e in self.entries if not dominates(f, e.objectives)]
        self.entries.append(entry)
        return True

    def check_invariants(self) -> None:
        seen = set()
        for i, a in enumerate(self.entries):
            if not a.mask.any():
                raise AssertionError(f"entry {i} has an empty mask")
            if a.objectives in seen:
                raise AssertionError(f"duplicate objective vector {a.objectives}")
            seen.add(a.objectives)
            for j, b in enumerate(self.entries):
                if i != j and dominates(a.objectives, b.objectives):
                    raise AssertionError(f"entry {i} dominates entry {j}")

    def to_json(self) -> list[dict]:
        return [e.to_dict() for e in self.entries]

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)


@dataclass(frozen=True)
class SolverConfig:
    iterations: int = 80
    seed: int = 0
    mode: ObjectiveMode = ObjectiveMode()
    mutation_rate: float | None = None  # None -> 1/m

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.mutation_rate is not None and not 0 < self.mutation_rate <= 1:
            raise ValueError("mutation_rate must lie in (0, 1]")


class _Evaluator:
    """Memoised (error, cost) per mask for one solver run."""

    def __init__(self, pm: PredictionMatrix):
        self.pm = pm
        self._cache: dict[bytes, tuple[float, float]] = {}

    def __call__(self, mask: np.ndarray) -> tuple[float, float]:
        key = mask.tobytes()
        hit = self._cache.get(key)
        if hit is None:
            pm = self.pm
            counts = pm.votes[mask].sum(axis=0)
            wrong = np.count_nonzero(np.argmax(counts, axis=1) != pm.labels)
            c = float(np.count_nonzero(mask)) if pm.unit_costs else float(pm.costs[mask].sum())
            hit = self._cache[key] = (wrong / pm.v, c)
        return hit


def solve(
    pm: PredictionMatrix,
    config: SolverConfig = SolverConfig(),
    callback: Callable[[int, ParetoArchive], None] | None = None,
) -> ParetoArchive:
    """Single-parent evolutionary archive search.

    Start from one uniformly random non-empty mask; each iteration picks an
    archive member uniformly, flips every bit with probability
    ``mutation_rate`` and offers the offspring to the archive. Empty offspring
    are discarded but still use up the iteration. ``callback(t, archive)``
    runs after every iteration.
    """
    m = pm.m
    if m == 0:
        raise ValueError("prediction matrix has no classifiers")
    rate = config.mutation_rate if config.mutation_rate is not None else 1.0 / m
    rng = np.random.default_rng(config.seed)
    evaluate = _Evaluator(pm)
    mode = config.mode

    def make_entry(mask: np.ndarray, t: int) -> ArchiveEntry:
        err, c = evaluate(mask)
        return ArchiveEntry(mask, mode.combine(err, c), err, c, t)

    mask = rng.random(m) < 0.5
    while not mask.any():
        mask = rng.random(m) < 0.5
    archive = ParetoArchive([make_entry(mask, 0)])

    for t in range(1, config.iterations + 1):
        parent = archive.entries[rng.integers(len(archive))]
        child = parent.mask ^ (rng.random(m) < rate)
        if child.any():
            archive.offer(make_entry(child, t))
        if callback is not None:
            callback(t, archive)
    return archive


def _all_masks(m: int) -> np.ndarray:
    codes = np.arange(1, 2**m, dtype=np.int64)
    # bit 0 of the mask is the first character of its bitstring
    return ((codes[:, None] >> np.arange(m - 1, -1, -1)) & 1).astype(bool)


def true_pareto_front(pm: PredictionMatrix, mode: ObjectiveMode = ObjectiveMode(), chunk: int = 4096) -> ParetoArchive:
    """Exhaustive non-dominated set over all 2^m - 1 non-empty masks.

    Masks sharing an objective vector collapse to the lexicographically
    smallest bitstring.
    """
    m = pm.m
    if m == 0:
        raise ValueError("prediction matrix has no classifiers")
    if m > MAX_ENUMERATION_M:
        raise ValueError(f"enumeration guard: m = {m} exceeds {MAX_ENUMERATION_M}")
    masks = _all_masks(m)  # ascending integer code == ascending bitstring
    errors = np.empty(len(masks))
    votes = pm.votes.astype(np.int32)
    for start in range(0, len(masks), chunk):
        block = masks[start : start + chunk].astype(np.int32)
        counts = np.einsum("bm,mvk->bvk", block, votes)
        errors[start : start + chunk] = (np.argmax(counts, axis=2) != pm.labels).sum(axis=1) / pm.v
    costs = masks.sum(axis=1).astype(float) if pm.unit_costs else masks @ pm.costs

    objs = [mode.combine(float(e), float(c)) for e, c in zip(errors, costs)]
    first: dict[Objectives, int] = {}
    for i, f in enumerate(objs):
        first.setdefault(f, i)
    # sweep by (o1, o2): keep points whose o2 strictly improves
    front, best_o2 = [], np.inf
    for f in sorted(first):
        if f.o2 < best_o2:
            front.append(f)
            best_o2 = f.o2
    entries = []
    for f in front:
        i = first[f]
        entries.append(ArchiveEntry(masks[i].copy(), f, float(errors[i]), float(costs[i]), 0))
    return ParetoArchive(entries)
