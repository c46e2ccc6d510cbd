import numpy as np
import pytest

from netchange import (
    BoundsError,
    DegenerateColumnError,
    DimensionError,
    ParseError,
    Segment,
    as_timeseries,
    correlation,
    load_matrix,
    split,
)


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_load_plain_csv(tmp_path):
    Y = load_matrix(write(tmp_path, "y.csv", "1,2\n3,4\n5,6\n"))
    np.testing.assert_array_equal(Y, [[1, 2], [3, 4], [5, 6]])


def test_load_with_header(tmp_path):
    Y = load_matrix(write(tmp_path, "y.csv", "a,b\n1,2\n3,4\n"), header=True)
    np.testing.assert_array_equal(Y, [[1, 2], [3, 4]])


def test_load_tsv_by_extension(tmp_path):
    Y = load_matrix(write(tmp_path, "y.tsv", "1\t2\n3\t4\n"))
    assert Y.shape == (2, 2)


def test_non_numeric_cell_names_row(tmp_path):
    with pytest.raises(ParseError, match="row 1"):
        load_matrix(write(tmp_path, "y.csv", "1,x\n3,4\n"))


def test_ragged_rows_rejected(tmp_path):
    with pytest.raises((ParseError, DimensionError)):
        load_matrix(write(tmp_path, "y.csv", "1,2\n3\n"))


def test_non_finite_rejected():
    with pytest.raises(ParseError):
        as_timeseries([[1.0, np.nan], [2.0, 3.0]])


def test_timeseries_is_read_only():
    Y = as_timeseries(np.ones((3, 2)) * [[1], [2], [3]])
    with pytest.raises(ValueError):
        Y[0, 0] = 5


def test_split_midpoint():
    left, right = split(200, 100)
    assert (left.start, left.end) == (1, 100)
    assert (right.start, right.end) == (101, 200)


def test_split_minimal_left():
    left, right = split(10, 2)
    assert (left.length, right.length) == (2, 8)


def test_split_right_too_short():
    with pytest.raises(BoundsError):
        split(10, 9)


def test_split_inside_segment_uses_local_offset():
    left, right = split(100, 5, Segment(11, 30))
    assert (left.start, left.end, right.start, right.end) == (11, 15, 16, 30)


def test_segment_rows_are_inclusive():
    Y = np.arange(20.0).reshape(10, 2)
    np.testing.assert_array_equal(Segment(3, 4).rows(Y), Y[2:4])


def test_segment_too_short():
    with pytest.raises(BoundsError):
        Segment(5, 5)


def test_identical_columns_correlate_perfectly():
    x = np.array([1.0, 3.0, 2.0, 5.0])
    R = correlation(np.column_stack([x, x]))
    assert R[0, 1] == pytest.approx(1.0)


def test_negated_column_anticorrelates():
    x = np.array([1.0, 3.0, 2.0, 5.0])
    R = correlation(np.column_stack([x, -x]))
    assert R[0, 1] == pytest.approx(-1.0)


def test_pearson_hand_value():
    # deviations (-1.5,-.5,.5,1.5) and (-.5,-1.5,1.5,.5): 3 / sqrt(5 * 5)
    R = correlation(np.array([[1, 2], [2, 1], [3, 4], [4, 3]], dtype=float))
    assert R[0, 1] == pytest.approx(0.6, abs=1e-12)
    np.testing.assert_array_equal(np.diag(R), [1.0, 1.0])


def test_correlation_restricted_to_segment():
    rng = np.random.default_rng(0)
    Y = rng.standard_normal((30, 4))
    np.testing.assert_allclose(correlation(Y, Segment(5, 20)), np.corrcoef(Y[4:20].T), atol=1e-12)


def test_constant_column_names_column():
    Y = np.column_stack([np.arange(5.0), np.full(5, 2.0), np.arange(5.0) ** 2])
    with pytest.raises(DegenerateColumnError) as err:
        correlation(Y)
    assert err.value.column == 2
