from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import oracles
from qonsager.errors import DenominatorOutOfDomain, ResourceBudgetExceeded
from qonsager.linalg import bareiss, kernel, rank, solve
from qonsager.scalars import Scalar, q

frac = st.builds(Fraction, st.integers(-5, 5), st.integers(1, 3))


@st.composite
def rational_matrix(draw, max_rows=5, max_cols=6):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    # low rank is the interesting case: combine a few random rows
    base = [[draw(frac) for _ in range(c)] for _ in range(draw(st.integers(1, r)))]
    rows = []
    for _ in range(r):
        coeffs = [draw(st.integers(-2, 2)) for _ in base]
        rows.append([sum((k * b[j] for k, b in zip(coeffs, base)), Fraction(0)) for j in range(c)])
    return rows


@given(rational_matrix())
def test_rank_matches_dense_oracle(rows):
    assert rank(rows) == oracles.dense_rank(rows)


@given(rational_matrix())
def test_kernel_is_a_basis_of_the_null_space(rows):
    vecs, ech = kernel(rows)
    n = len(rows[0])
    assert len(vecs) == n - oracles.dense_rank(rows)
    for v in vecs:
        assert v.normalized
        for row in rows:
            assert sum(a * x for a, x in zip(row, v.entries)) == 0
    if vecs:
        assert oracles.dense_rank([v.entries for v in vecs]) == len(vecs)


@given(rational_matrix(), st.lists(frac, min_size=6, max_size=6))
def test_solve_matches_dense_oracle(rows, x):
    n = len(rows[0])
    rhs = [sum((a * b for a, b in zip(row, x[:n])), Fraction(0)) for row in rows]
    sol = solve(rows, rhs)
    assert sol.consistent
    assert sol.particular == oracles.dense_solve(rows, rhs)
    assert sol.nullity == n - sol.rank


def test_inconsistent_system():
    sol = solve([[1, 1], [2, 2]], [1, 3])
    assert not sol.consistent
    assert sol.augmented_rank == sol.rank + 1


def test_end_state_is_scaled_rref():
    rows = [[2, 4, 1], [1, 3, 0], [3, 7, 1]]
    ech = bareiss(rows)
    d = ech.det
    for i, pc in enumerate(ech.pivots):
        for j, r in enumerate(ech.rows[: ech.rank]):
            assert r[pc] == (d if i == j else 0)


def symbolic_rows():
    v, k = Scalar.var("v"), Scalar.var("k+")
    return [
        [q, v, q * v + 1, k],
        [1, q**-1 * v, v + q**-1, q**-1 * k],
        [k, 0, 1, q + v],
    ]


def test_symbolic_rank_and_kernel_specialize():
    rows = symbolic_rows()
    vecs, ech = kernel(rows)
    assert ech.ring == "poly" and ech.rank == 2 and len(vecs) == 2
    for v in vecs:
        for row in rows:
            assert sum((a * x for a, x in zip(row, v.entries)), Scalar(0)).is_zero()
    pt = {"q": Fraction(3), "v": Fraction(-2, 7), "k+": Fraction(5)}
    num = [[Scalar(x).evaluate(pt) for x in r] for r in rows]
    assert oracles.dense_rank(num) == ech.rank


def test_symbolic_solution_with_q_denominator():
    rows = [[q - 1, Scalar(0)], [Scalar(0), q**2 + 1]]
    sol = solve(rows, [Scalar(1), Scalar.var("k+")])
    assert sol.particular[0] == Scalar(1) / (q - 1)
    assert sol.particular[1] == Scalar.var("k+") / (q**2 + 1)


def test_non_q_denominator_is_reported():
    with pytest.raises(DenominatorOutOfDomain):
        solve([[Scalar.var("k+")]], [Scalar(1)])
    vecs, _ = kernel([[Scalar.var("k+"), Scalar(1)]])
    assert not vecs[0].normalized
    assert vecs[0].entries == [Scalar(1), -Scalar.var("k+")]


def test_term_budget():
    x = sum((Scalar.var("v", i) * Scalar.var("k+", i % 3) for i in range(6)), Scalar(0))
    rows = [[x, x * q + 1, Scalar(1)], [x + 1, x * x, q], [x * q, Scalar(2), x]]
    with pytest.raises(ResourceBudgetExceeded):
        rank(rows, budget=5)
    assert rank(rows) == 3
