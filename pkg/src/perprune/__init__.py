"""Personalized ensemble pruning by bi-objective Pareto search."""

from .dataset import Dataset, LoadReport, Split, load_csv, split, synthesize
from .learners import (
    ClassifierPool,
    DecisionTree,
    PredictionMatrix,
    fit_bagging,
    fit_tree,
    predict_matrix,
    simulate_predictions,
)
from .objectives import (
    ObjectiveMode,
    Objectives,
    bits_to_mask,
    combined_loss,
    cost,
    dominates,
    error_rate,
    evaluate,
    mask_to_bits,
)
from .personalize import (
    Assignment,
    TradeoffProfile,
    run_framework,
    run_peps_baseline,
    run_variant,
    select_exact,
    select_sorted,
)
from .solver import ArchiveEntry, ParetoArchive, SolverConfig, solve, true_pareto_front

__version__ = "0.1.0"
