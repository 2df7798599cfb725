import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from wildrank.exactlin import (F101, QQ, Field, Mat, ShapeMismatchError,
                               find_invertible_in_span, jordan_nilpotent,
                               kernel_basis, nilpotency_index,
                               nilpotent_hom_basis, rank, solve_linear,
                               _jordan_shift)


def test_field_validation():
    with pytest.raises(ValueError):
        Field.prime(4)
    with pytest.raises(ValueError):
        Field.prime(3)   # characteristic must be >= 5
    assert Field.prime(101).char == 101
    assert Field.rationals().char == 0


def test_field_scalar_ops():
    f = Field.prime(7)
    assert f.coerce(Fraction(1, 2)) == 4          # 1/2 = 4 mod 7
    assert f.inv(3) == 5
    assert QQ.inv(Fraction(2, 3)) == Fraction(3, 2)


def test_rank_examples():
    assert rank(Mat.zeros(QQ, 0, 0)) == 0
    assert rank(Mat.identity(F101, 2)) == 2
    assert rank(Mat.from_rows(QQ, [[1, 2], [2, 4]])) == 1


def test_kernel_examples():
    assert kernel_basis(Mat.identity(F101, 3)) == []
    assert len(kernel_basis(Mat.zeros(QQ, 2, 3))) == 3
    ker = kernel_basis(Mat.from_rows(QQ, [[1, 1]]))
    assert len(ker) == 1
    v = ker[0]
    assert v.entry(0, 0) == -v.entry(1, 0) != 0


def test_solve_examples():
    x, ker = solve_linear(Mat.identity(QQ, 2), Mat.column(QQ, [1, 2]))
    assert x.column_entries(0) == [1, 2] and ker == []
    got = solve_linear(Mat.from_rows(QQ, [[1, 1]]), Mat.column(QQ, [0]))
    assert got is not None
    x, ker = got
    assert x.column_entries(0) == [0, 0] and len(ker) == 1
    assert solve_linear(Mat.from_rows(QQ, [[0]]), Mat.column(QQ, [1])) is None
    with pytest.raises(ShapeMismatchError):
        solve_linear(Mat.identity(QQ, 2), Mat.column(QQ, [1, 2, 3]))


def test_find_invertible_examples():
    ident = Mat.identity(F101, 2)
    coeffs, combo = find_invertible_in_span([ident], 4, seed=0)
    assert combo.is_invertible() and coeffs == [1]
    nil = Mat.from_rows(F101, [[0, 1], [0, 0]])
    assert find_invertible_in_span([nil], 16, seed=0) is None
    e11 = Mat.from_rows(QQ, [[1, 0], [0, 0]])
    e22 = Mat.from_rows(QQ, [[0, 0], [0, 1]])
    coeffs, combo = find_invertible_in_span([e11, e22], 16, seed=0)
    assert combo.is_invertible()
    assert all(c != 0 for c in coeffs)
    assert find_invertible_in_span([], 4, seed=1) is None


def test_find_invertible_deterministic():
    rng = random.Random(9)
    basis = [Mat.random(F101, 3, 3, rng) for _ in range(3)]
    a = find_invertible_in_span(basis, 8, seed=123)
    b = find_invertible_in_span(basis, 8, seed=123)
    assert a[0] == b[0]


@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 10 ** 6))
@settings(max_examples=40, deadline=None)
def test_rank_nullity(m, n, seed):
    rng = random.Random(seed)
    a = Mat.random(F101, m, n, rng)
    assert rank(a) + len(kernel_basis(a)) == n
    for v in kernel_basis(a):
        assert (a @ v).is_zero()


@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 10 ** 6))
@settings(max_examples=25, deadline=None)
def test_rational_rank_row_order_invariance(m, n, seed):
    rng = random.Random(seed)
    a = Mat.random(QQ, m, n, rng)
    rows = a.row_list()
    rng.shuffle(rows)
    b = Mat.from_rows(QQ, rows)
    assert a.rank() == b.rank()


def test_solve_residual_exact():
    rng = random.Random(4)
    for field in (F101, QQ):
        a = Mat.random(field, 4, 6, rng)
        x0 = Mat.random(field, 6, 1, rng)
        b = a @ x0
        x, ker = solve_linear(a, b)
        assert (a @ x - b).is_zero()


def test_inverse_and_solve_matrix():
    rng = random.Random(11)
    for field in (F101, QQ):
        while True:
            a = Mat.random(field, 4, 4, rng)
            if a.is_invertible():
                break
        assert (a @ a.inverse()) == Mat.identity(field, 4)
        b = Mat.random(field, 4, 3, rng)
        x = a.solve_matrix(b)
        assert (a @ x) == b


def test_solve_matrix_batched_consistency():
    rng = random.Random(13)
    for field in (F101, QQ):
        for _ in range(8):
            m, n, k = rng.randint(1, 7), rng.randint(1, 7), rng.randint(1, 4)
            a = Mat.random(field, m, n, rng)
            x0 = Mat.random(field, n, k, rng)
            b = a @ x0
            x = a.solve_matrix(b)
            assert x is not None and (a @ x) == b
    # inconsistent batch: one bad column poisons the whole solve
    a = Mat.from_rows(F101, [[1, 0], [0, 0]])
    b = Mat.from_rows(F101, [[1, 1], [0, 1]])
    assert a.solve_matrix(b) is None
    # zero-width batch
    z = Mat.zeros(F101, 2, 0)
    out = a.solve_matrix(z)
    assert out is not None and out.shape == (2, 0)


def _random_nilpotent(field, n, rng):
    rows = [[field.random_scalar(rng) if j > i else field.zero
             for j in range(n)] for i in range(n)]
    s = Mat(field, n, n, rows) if field.char == 0 else Mat.from_rows(field, rows)
    while True:
        g = Mat.random(field, n, n, rng)
        if g.is_invertible():
            return g @ s @ g.inverse()


def test_nilpotency_index():
    assert nilpotency_index(Mat.zeros(F101, 3, 3)) == 1
    assert nilpotency_index(Mat.identity(F101, 2)) is None
    j = Mat.from_rows(QQ, [[0, 1], [0, 0]])
    assert nilpotency_index(j) == 2


@pytest.mark.parametrize("field", [F101, QQ])
def test_jordan_nilpotent(field):
    rng = random.Random(5)
    for n in (1, 2, 4, 6):
        s = _random_nilpotent(field, n, rng)
        p, sizes = jordan_nilpotent(s)
        assert sum(sizes) == n
        assert s @ p == p @ _jordan_shift(field, sizes)


@pytest.mark.parametrize("field", [F101, QQ])
def test_nilpotent_hom_basis_matches_kron_kernel(field):
    rng = random.Random(6)
    for _ in range(6):
        n1, n2 = rng.randint(1, 5), rng.randint(1, 5)
        s = _random_nilpotent(field, n1, rng)
        t = _random_nilpotent(field, n2, rng)
        basis = nilpotent_hom_basis(s, t)
        for g in basis:
            assert g @ s == t @ g
        big = s.T.kron(Mat.identity(field, n2)) - Mat.identity(field, n1).kron(t)
        assert big.kernel().cols == len(basis)
