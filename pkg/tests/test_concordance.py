import pytest
from hypothesis import given
from hypothesis import strategies as st

from dcbam.concordance import RatingMatrix, consistency_report, kendalls_w
from dcbam.errors import DomainError, InvariantError

from .oracles import kendalls_w_direct

# frozen from direct formula evaluation
PINNED_3X3 = 0.4444444444444444
PINNED_TIED = 0.9285714285714286


def test_identical_rankings_give_one():
    matrix = RatingMatrix(ranks=((1, 2, 3, 4),) * 3)
    assert kendalls_w(matrix) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_reversed_pair_gives_zero(n):
    forward = tuple(float(i) for i in range(1, n + 1))
    matrix = RatingMatrix(ranks=(forward, forward[::-1]))
    assert kendalls_w(matrix) == pytest.approx(0.0, abs=1e-12)


def test_pinned_3x3_case():
    rows = ((1, 2, 3), (1, 3, 2), (2, 1, 3))
    matrix = RatingMatrix(ranks=rows)
    w = kendalls_w(matrix)
    assert w == pytest.approx(PINNED_3X3, abs=1e-9)
    assert w == pytest.approx(kendalls_w_direct(rows), abs=1e-12)


def test_tie_correction():
    rows = ((1.5, 1.5, 3.0), (1.0, 2.0, 3.0))
    matrix = RatingMatrix(ranks=rows)
    w = kendalls_w(matrix)
    assert w == pytest.approx(PINNED_TIED, abs=1e-9)
    assert w == pytest.approx(kendalls_w_direct(rows), abs=1e-12)


def test_all_tied_degenerate_is_zero():
    matrix = RatingMatrix(ranks=((2.0, 2.0, 2.0), (2.0, 2.0, 2.0)))
    assert kendalls_w(matrix) == 0.0


def test_row_sum_invariant():
    with pytest.raises(InvariantError, match="sums to"):
        RatingMatrix(ranks=((1, 2, 3), (1, 1, 1)))


def test_ragged_rows_rejected():
    with pytest.raises(InvariantError, match="ranked"):
        RatingMatrix(ranks=((1, 2, 3), (1, 2)))


def test_too_few_raters():
    matrix = RatingMatrix(ranks=((1, 2, 3),))
    with pytest.raises(DomainError, match="at least 2"):
        kendalls_w(matrix)


def test_too_few_items():
    matrix = RatingMatrix(ranks=((1.0,), (1.0,)))
    with pytest.raises(DomainError, match="at least 2"):
        kendalls_w(matrix)


class TestConsistencyReport:
    def test_maximum_is_consistent(self):
        assert consistency_report(1.0).verdict == "consistent"

    def test_minimum_is_inconsistent(self):
        assert consistency_report(0.0).verdict == "inconsistent"

    def test_threshold_inclusive(self):
        report = consistency_report(0.7, threshold=0.7)
        assert report.verdict == "consistent"
        assert report.w == 0.7
        assert report.threshold == 0.7

    def test_bad_threshold(self):
        with pytest.raises(DomainError):
            consistency_report(0.5, threshold=1.5)

    def test_bad_w(self):
        with pytest.raises(DomainError):
            consistency_report(-0.1)


# -- properties ---------------------------------------------------------------

@st.composite
def rank_matrices(draw):
    n = draw(st.integers(min_value=2, max_value=6))
    m = draw(st.integers(min_value=2, max_value=5))
    rows = []
    for _ in range(m):
        row = draw(st.permutations(list(range(1, n + 1))))
        rows.append(tuple(float(v) for v in row))
    return RatingMatrix(ranks=tuple(rows))


@given(rank_matrices())
def test_w_in_unit_interval(matrix):
    assert 0.0 <= kendalls_w(matrix) <= 1.0


@given(rank_matrices(), st.randoms())
def test_w_invariant_under_item_relabeling(matrix, rng):
    n = matrix.items
    perm = list(range(n))
    rng.shuffle(perm)
    relabeled = RatingMatrix(
        ranks=tuple(tuple(row[perm[i]] for i in range(n)) for row in matrix.ranks)
    )
    assert kendalls_w(relabeled) == pytest.approx(kendalls_w(matrix), abs=1e-12)


@given(rank_matrices(), st.randoms())
def test_w_invariant_under_rater_permutation(matrix, rng):
    rows = list(matrix.ranks)
    rng.shuffle(rows)
    assert kendalls_w(RatingMatrix(ranks=tuple(rows))) == pytest.approx(
        kendalls_w(matrix), abs=1e-12
    )


@given(st.integers(min_value=2, max_value=6), st.integers(min_value=2, max_value=5))
def test_duplicating_agreeing_rater_keeps_perfect_concordance(n, m):
    row = tuple(float(i) for i in range(1, n + 1))
    assert kendalls_w(RatingMatrix(ranks=(row,) * m)) == pytest.approx(1.0, abs=1e-12)
    assert kendalls_w(RatingMatrix(ranks=(row,) * (m + 1))) == pytest.approx(1.0, abs=1e-12)


@given(rank_matrices())
def test_w_matches_direct_formula(matrix):
    assert kendalls_w(matrix) == pytest.approx(
        kendalls_w_direct(matrix.ranks), abs=1e-12
    )
