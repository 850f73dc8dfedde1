import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from perprune import Dataset, load_csv, split, synthesize


def write(tmp_path, text, name="d.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_first_appearance_label_mapping(tmp_path):
    p = write(tmp_path, "a,b,act\n1,2,walk\n3,4,sit\n5,6,walk\n")
    data, report = load_csv(p, "act")
    assert data.labels.tolist() == [0, 1, 0]
    assert data.n_classes == 2
    assert report.class_map == {"walk": 0, "sit": 1}
    assert data.features.tolist() == [[1, 2], [3, 4], [5, 6]]


def test_label_by_index_without_header(tmp_path):
    p = write(tmp_path, "x,1.5,2\ny,0.5,3\n")
    data, _ = load_csv(p, 0, has_header=False)
    assert data.labels.tolist() == [0, 1]
    assert data.features.tolist() == [[1.5, 2], [0.5, 3]]


def test_single_class_rejected(tmp_path):
    p = write(tmp_path, "a,y\n1,k\n2,k\n")
    with pytest.raises(ValueError, match="fewer than 2 classes"):
        load_csv(p, "y")


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_csv(tmp_path / "nope.csv")


def test_dirty_rows_dropped_and_counted(tmp_path):
    p = write(tmp_path, "a,b,y\n1,2,u\n1,abc,v\n3,nan,u\n4,5,v\n6,inf,u\n")
    data, report = load_csv(p, "y")
    assert len(data) == 2
    assert report.rows_dropped == 3
    assert report.dropped_cells == [(3, 1), (4, 1), (6, 1)]


def test_strict_reports_location(tmp_path):
    p = write(tmp_path, "a,b,y\n1,2,u\n1,abc,v\n")
    with pytest.raises(ValueError, match=r"line 3, column 1"):
        load_csv(p, "y", strict=True)


def test_unknown_label_name(tmp_path):
    p = write(tmp_path, "a,y\n1,u\n2,v\n")
    with pytest.raises(ValueError, match="not in header"):
        load_csv(p, "label")


def test_dataset_invariants():
    with pytest.raises(ValueError):
        Dataset(np.zeros((3, 2)), [0, 1], 2)
    with pytest.raises(ValueError):
        Dataset(np.zeros((2, 2)), [0, 2], 2)
    with pytest.raises(ValueError):
        Dataset(np.zeros((2, 2)), [0, 0], 1)
    with pytest.raises(ValueError):
        Dataset(np.array([[0.0], [np.nan]]), [0, 1], 2)


def test_split_sizes_exact():
    data = synthesize(10, 2, 2, seed=0)
    parts = split(data, (0.6, 0.2, 0.2), seed=7)
    assert (len(parts.train), len(parts.validation), len(parts.test)) == (6, 2, 2)


def test_split_rejects_empty_part():
    data = synthesize(10, 2, 2, seed=0)
    with pytest.raises(ValueError, match="empty part"):
        split(data, (0.5, 0.5, 0.0), seed=1)


def test_split_rejects_bad_sum():
    data = synthesize(10, 2, 2, seed=0)
    with pytest.raises(ValueError, match="sum to 1"):
        split(data, (0.5, 0.3, 0.3))


def test_split_deterministic():
    data = synthesize(50, 3, 2, seed=0)
    a, b = split(data, seed=5), split(data, seed=5)
    for x, y in zip((a.train, a.validation, a.test), (b.train, b.validation, b.test)):
        assert np.array_equal(x.features, y.features)
        assert np.array_equal(x.labels, y.labels)


def test_paper_shaped_split_sizes():
    data = synthesize(4944, 43, 6, seed=1)
    parts = split(data, seed=0)
    assert (len(parts.train), len(parts.validation), len(parts.test)) == (2966, 989, 989)


def _rows_as_set(d):
    return {tuple(r) for r in np.column_stack([d.features, d.labels])}


@settings(max_examples=40, deadline=None)
@given(
    n=st.integers(6, 80),
    seed=st.integers(0, 10_000),
    stratify=st.booleans(),
)
def test_split_partitions_rows(n, seed, stratify):
    data = synthesize(n, 3, 2, seed=seed)
    try:
        parts = split(data, (0.6, 0.2, 0.2), seed=seed, stratify=stratify)
    except ValueError as exc:
        assert "empty part" in str(exc)
        return
    sizes = [len(parts.train), len(parts.validation), len(parts.test)]
    assert sum(sizes) == n
    rows = [_rows_as_set(p) for p in (parts.train, parts.validation, parts.test)]
    assert not (rows[0] & rows[1]) and not (rows[0] & rows[2]) and not (rows[1] & rows[2])
    assert rows[0] | rows[1] | rows[2] == _rows_as_set(data)
    if not stratify:
        for size, r in zip(sizes, (0.6, 0.2, 0.2)):
            assert abs(size - r * n) <= 1


def test_synthesize_shape_and_coverage():
    data = synthesize(100, 5, 3, seed=1)
    assert data.features.shape == (100, 5)
    assert set(data.labels.tolist()) == {0, 1, 2}


def test_synthesize_paper_shape():
    data = synthesize(4944, 43, 6, seed=1)
    assert data.features.shape == (4944, 43)
    assert data.n_classes == 6


def test_synthesize_deterministic():
    a, b = synthesize(50, 4, 3, seed=9), synthesize(50, 4, 3, seed=9)
    assert a.features.tobytes() == b.features.tobytes()


@settings(max_examples=30, deadline=None)
@given(k=st.integers(2, 8), extra=st.integers(0, 5), seed=st.integers(0, 1000))
def test_synthesize_covers_every_class(k, extra, seed):
    data = synthesize(k + extra, 2, k, seed=seed)
    assert set(data.labels.tolist()) == set(range(k))


def test_synthesize_preconditions():
    with pytest.raises(ValueError):
        synthesize(1, 2, 2)
    with pytest.raises(ValueError):
        synthesize(10, 0, 2)
