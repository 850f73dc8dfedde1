import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_force_error
from perprune import (
    ObjectiveMode,
    PredictionMatrix,
    bits_to_mask,
    combined_loss,
    cost,
    dominates,
    error_rate,
    evaluate,
    mask_to_bits,
    simulate_predictions,
)


def test_full_toy_ensemble_is_perfect(toy_pm):
    assert error_rate([1, 1, 1], toy_pm) == 0.0
    assert brute_force_error([1, 1, 1], toy_pm.preds, toy_pm.labels) == 0.0


def test_toy_pair_ties_break_low(toy_pm):
    assert error_rate([1, 1, 0], toy_pm) == 0.5
    assert brute_force_error([1, 1, 0], toy_pm.preds, toy_pm.labels) == 0.5


def test_single_classifier_error(toy_pm):
    for i, raw in enumerate(toy_pm.individual_errors()):
        mask = np.zeros(3, bool)
        mask[i] = True
        assert error_rate(mask, toy_pm) == raw


def test_empty_mask_is_infeasible(toy_pm):
    for fn in (lambda m: error_rate(m, toy_pm), lambda m: combined_loss(m, toy_pm, 0.1),
               lambda m: evaluate(m, toy_pm)):
        with pytest.raises(ValueError, match="empty"):
            fn([0, 0, 0])


def test_mask_length_checked(toy_pm):
    with pytest.raises(ValueError, match="length"):
        error_rate([1, 1], toy_pm)


def test_combined_loss(toy_pm):
    mask = [1, 0, 1]
    assert combined_loss(mask, toy_pm, 0.0) == error_rate(mask, toy_pm)
    assert combined_loss(mask, toy_pm, 0.1) == pytest.approx(0.25 + 0.2)
    with pytest.raises(ValueError):
        combined_loss(mask, toy_pm, -0.1)


def test_combined_loss_direct_substitution():
    # 5 examples, one wrong under the 4-classifier vote -> E = 0.2
    labels = [0, 0, 0, 0, 1]
    preds = [[0, 0, 0, 0, 0]] * 4
    pm = PredictionMatrix(preds, labels, 2)
    assert error_rate([1, 1, 1, 1], pm) == 0.2
    assert combined_loss([1, 1, 1, 1], pm, 0.1) == pytest.approx(0.6)


def test_mode_combine_examples():
    assert ObjectiveMode.plain().combine(0.2, 4.0) == (0.2, 4.0)
    o = ObjectiveMode.mixture(0.01, 0.2).combine(0.2, 4.0)
    assert o.o1 == pytest.approx(0.24) and o.o2 == pytest.approx(1.0)
    o = ObjectiveMode.mixture(0.01, 0.2, 0.3, 1.7).combine(0.2, 4.0)
    assert o.o1 == pytest.approx(0.212) and o.o2 == pytest.approx(1.56)


def test_mode_validation():
    with pytest.raises(ValueError):
        ObjectiveMode.mixture(0.2, 0.1)
    with pytest.raises(ValueError):
        ObjectiveMode.mixture(0.1, 0.2, c_min=1.5)
    with pytest.raises(ValueError):
        ObjectiveMode.mixture(0.1, 0.2, c_max=0.5)
    with pytest.raises(ValueError):
        ObjectiveMode("weighted")


def test_weighted_costs():
    pm = PredictionMatrix([[0, 1], [0, 1], [1, 1]], [0, 1], costs=[0.5, 2.0, 1.0])
    assert cost([1, 0, 1], pm) == 1.5
    assert evaluate([1, 1, 0], pm) == (0.0, 2.5)


def test_bits_roundtrip():
    mask = np.array([True, False, True, True])
    assert mask_to_bits(mask) == "1011"
    assert np.array_equal(bits_to_mask("1011"), mask)
    with pytest.raises(ValueError):
        bits_to_mask("10x1")


def test_dominates_examples():
    assert dominates((0.2, 3), (0.3, 5))
    assert not dominates((0.2, 3), (0.1, 5))
    assert not dominates((0.1, 5), (0.2, 3))
    assert not dominates((0.2, 3), (0.2, 3))
    assert dominates((0.2, 3), (0.2, 4))


def test_plain_incomparable_but_loss_ordered(toy_pm):
    # ({t1}, (0.25, 1)) and ({t1,t2,t3}, (0.0, 3)) are Pareto-incomparable,
    # yet at alpha = 0.2 the smaller ensemble strictly wins on combined loss.
    small, full = [1, 0, 0], [1, 1, 1]
    fs, ff = evaluate(small, toy_pm), evaluate(full, toy_pm)
    assert not dominates(fs, ff) and not dominates(ff, fs)
    assert combined_loss(small, toy_pm, 0.2) < combined_loss(full, toy_pm, 0.2)


vec = st.tuples(st.integers(0, 6), st.integers(0, 6)).map(lambda t: (t[0] / 6, float(t[1])))


@settings(max_examples=500)
@given(vec, vec, vec)
def test_dominates_is_strict_partial_order(a, b, c):
    assert not dominates(a, a)
    assert not (dominates(a, b) and dominates(b, a))
    if dominates(a, b) and dominates(b, c):
        assert dominates(a, c)


@settings(max_examples=200, deadline=None)
@given(
    m=st.integers(1, 8),
    v=st.integers(1, 50),
    k=st.integers(2, 5),
    seed=st.integers(0, 2**31),
)
def test_error_rate_matches_recount(m, v, k, seed):
    rng = np.random.default_rng(seed)
    preds = rng.integers(0, k, size=(m, v))
    labels = rng.integers(0, k, size=v)
    pm = PredictionMatrix(preds, labels, k)
    mask = rng.random(m) < 0.5
    mask[rng.integers(m)] = True
    assert error_rate(mask, pm) == brute_force_error(mask, preds, labels)


@settings(max_examples=100, deadline=None)
@given(m=st.integers(2, 8), seed=st.integers(0, 2**31))
def test_adding_a_classifier(m, seed):
    pm = simulate_predictions(m, 40, 3, seed=seed)
    rng = np.random.default_rng(seed)
    mask = rng.random(m) < 0.5
    off = np.flatnonzero(~mask)
    if not mask.any() or off.size == 0:
        return
    bigger = mask.copy()
    bigger[off[0]] = True
    assert cost(bigger, pm) == cost(mask, pm) + 1
    assert abs(error_rate(bigger, pm) - error_rate(mask, pm)) <= 1


@settings(max_examples=200, deadline=None)
@given(
    seed=st.integers(0, 2**31),
    lo=st.floats(0, 0.5),
    span=st.floats(0, 0.5),
)
def test_mixture_dominance_implies_loss_order(seed, lo, span):
    hi = lo + span
    pm = simulate_predictions(6, 30, 3, seed=seed)
    rng = np.random.default_rng(seed)
    mode = ObjectiveMode.mixture(lo, hi)
    a, b = (rng.random(6) < 0.5 for _ in range(2))
    a[0] = b[1] = True
    fa, fb = evaluate(a, pm, mode), evaluate(b, pm, mode)
    if dominates(fa, fb):
        for alpha in np.append(np.linspace(lo, hi, 11), [lo, hi]):
            assert combined_loss(a, pm, alpha) <= combined_loss(b, pm, alpha) + 1e-12
