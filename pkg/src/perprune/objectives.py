"""Ensemble masks, majority-vote error, combined loss and Pareto dominance."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .learners import PredictionMatrix


class Objectives(NamedTuple):
    o1: float
    o2: float


@dataclass(frozen=True)
class ObjectiveMode:
    """Plain mode optimises (E, cost). Mixture mode optimises
    (E + c_min*alpha_min*cost, E + c_max*alpha_max*cost)."""

    variant: str = "plain"
    alpha_min: float = 0.0
    alpha_max: float = 0.0
    c_min: float = 1.0
    c_max: float = 1.0

    def __post_init__(self):
        if self.variant not in ("plain", "mixture"):
            raise ValueError(f"unknown objective variant {self.variant!r}")
        if self.variant == "mixture":
            if not 0 <= self.alpha_min <= self.alpha_max:
                raise ValueError("mixture needs 0 <= alpha_min <= alpha_max")
            if self.c_min > 1.0 or self.c_max < 1.0 or self.c_min < 0:
                raise ValueError("mixture needs 0 <= c_min <= 1 <= c_max")
            if self.c_min * self.alpha_min > self.c_max * self.alpha_max:
                raise ValueError("mixture needs c_min*alpha_min <= c_max*alpha_max")

    @classmethod
    def plain(cls) -> "ObjectiveMode":
        return cls("plain")

    @classmethod
    def mixture(cls, alpha_min: float, alpha_max: float, c_min: float = 1.0, c_max: float = 1.0):
        return cls("mixture", float(alpha_min), float(alpha_max), float(c_min), float(c_max))

    def combine(self, error: float, cost: float) -> Objectives:
        if self.variant == "plain":
            return Objectives(error, cost)
        return Objectives(
            error + self.c_min * self.alpha_min * cost,
            error + self.c_max * self.alpha_max * cost,
        )


def as_mask(mask, m: int | None = None) -> np.ndarray:
    mask = np.asarray(mask, dtype=bool)
    if mask.ndim != 1:
        raise ValueError("mask must be a 1-D boolean vector")
    if m is not None and mask.shape[0] != m:
        raise ValueError(f"mask length {mask.shape[0]} does not match pool size {m}")
    return mask


def mask_to_bits(mask) -> str:
    return "".join("1" if b else "0" for b in np.asarray(mask, dtype=bool))


def bits_to_mask(bits: str) -> np.ndarray:
    if set(bits) - {"0", "1"}:
        raise ValueError(f"not a bitstring: {bits!r}")
    return np.array([c == "1" for c in bits], dtype=bool)


def _checked(mask, pm: PredictionMatrix) -> np.ndarray:
    mask = as_mask(mask, pm.m)
    if not mask.any():
        raise ValueError("empty ensemble: E(S) is undefined for |S| = 0")
    return mask


def vote(mask, pm: PredictionMatrix) -> np.ndarray:
    """Plurality vote of the selected classifiers; ties go to the lowest class."""
    mask = _checked(mask, pm)
    counts = pm.votes[mask].sum(axis=0)
    return np.argmax(counts, axis=1)


def error_rate(mask, pm: PredictionMatrix) -> float:
    return float(np.count_nonzero(vote(mask, pm) != pm.labels)) / pm.v


def cost(mask, pm: PredictionMatrix) -> float:
    mask = as_mask(mask, pm.m)
    if pm.unit_costs:
        return float(np.count_nonzero(mask))
    return float(pm.costs[mask].sum())


def combined_loss(mask, pm: PredictionMatrix, alpha: float) -> float:
    if alpha < 0:
        raise ValueError("trade-off level must be non-negative")
    return error_rate(mask, pm) + alpha * cost(mask, pm)


def evaluate(mask, pm: PredictionMatrix, mode: ObjectiveMode = ObjectiveMode()) -> Objectives:
    return mode.combine(error_rate(mask, pm), cost(mask, pm))


def dominates(a, b) -> bool:
    """True iff ``a`` is no worse than ``b`` in both objectives and strictly
    better in at least one. Exact float comparison."""
    return a[0] <= b[0] and a[1] <= b[1] and (a[0] < b[0] or a[1] < b[1])
