import itertools
from collections import Counter

import numpy as np
import pytest

from perprune import PredictionMatrix, fit_bagging, predict_matrix, split, synthesize


def brute_force_error(mask, preds, labels):
    """Per-example vote recount with plain Python containers."""
    chosen = [i for i, bit in enumerate(mask) if bit]
    wrong = 0
    for j, truth in enumerate(labels):
        tally = Counter(int(preds[i][j]) for i in chosen)
        top = max(tally.values())
        winner = min(c for c, k in tally.items() if k == top)
        wrong += winner != truth
    return wrong / len(labels)


def brute_force_front(pm, combine=lambda e, c: (e, c)):
    """Enumerate every non-empty mask; return {objective vector: smallest bitstring}."""
    best = {}
    for bits in itertools.product("01", repeat=pm.m):
        s = "".join(bits)
        if "1" not in s:
            continue
        mask = [c == "1" for c in s]
        f = combine(brute_force_error(mask, pm.preds, pm.labels), float(sum(mask)))
        if f not in best or s < best[f]:
            best[f] = s
    keep = {}
    for f, s in best.items():
        if not any(g[0] <= f[0] and g[1] <= f[1] and g != f for g in best):
            keep[f] = s
    return keep


@pytest.fixture
def toy_pm():
    labels = [0, 1, 1, 0]
    preds = [[0, 1, 0, 0], [0, 0, 1, 1], [1, 1, 1, 0]]
    return PredictionMatrix(preds, labels, 2)


@pytest.fixture(scope="session")
def small_pool_pm():
    data = synthesize(600, 8, 3, seed=3, separation=0.8)
    parts = split(data, seed=3)
    pool = fit_bagging(parts.train, 10, max_depth=5, seed=3)
    return predict_matrix(pool, parts.validation)


def _front_entries(sizes, errors, m, rng):
    from perprune import ObjectiveMode, ParetoArchive
    from perprune.solver import ArchiveEntry

    entries = []
    for s, e in zip(sizes, errors):
        mask = np.zeros(m, bool)
        mask[rng.choice(m, size=int(s), replace=False)] = True
        entries.append(ArchiveEntry(mask, ObjectiveMode.plain().combine(e, float(s)), e, float(s)))
    rng.shuffle(entries)
    return ParetoArchive(entries)


def convex_front(rng, m=30, max_len=12):
    """Non-dominated front whose error is a strictly convex function of size,
    so every alpha sees a unimodal loss along the size-sorted sequence."""
    l = int(rng.integers(1, max_len + 1))
    sizes = np.sort(rng.choice(np.arange(1, m + 1), size=l, replace=False))
    slopes = np.sort(rng.choice(np.arange(1, 300), size=l - 1, replace=False))[::-1]
    drops = slopes * np.diff(sizes)
    milli = np.concatenate([[0], np.cumsum(drops)])
    top = int(milli[-1]) + int(rng.integers(0, 100))
    errors = (top - milli) / 1000.0
    return _front_entries(sizes, errors, m, rng)


def random_front(rng, m=30, max_len=12):
    """Arbitrary non-dominated front: error strictly decreasing in size."""
    l = int(rng.integers(1, max_len + 1))
    sizes = np.sort(rng.choice(np.arange(1, m + 1), size=l, replace=False))
    errors = np.sort(rng.choice(np.arange(0, 1000), size=l, replace=False))[::-1] / 1000.0
    return _front_entries(sizes, errors, m, rng)


ACCEPTANCE_LINES: list[str] = []


def record(criterion: str, ok: bool, detail: str) -> bool:
    line = f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
