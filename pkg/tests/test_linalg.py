from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pervmat.linalg import (
    QQ,
    ChainComplex,
    ChainComplexError,
    FieldSpec,
    Fp,
    Matrix,
    ShapeError,
    chain_map_defect,
    compose,
    induced_on_cohomology,
    is_invertible,
    kernel_basis,
    parse_rational,
    rank,
    sign_of_det,
    transpose,
)

F2 = FieldSpec(2)
F5 = FieldSpec(5)


@st.composite
def int_matrices(draw, max_rows=5, max_cols=5, lo=-4, hi=4):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    rows = draw(st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r))
    return Matrix.from_rows(rows, QQ, c)


# ---------------------------------------------------------------- examples


def test_empty_matrices():
    assert rank(Matrix.zeros(0, 3)) == 0
    assert rank(Matrix.zeros(3, 0)) == 0
    assert is_invertible(Matrix.zeros(0, 0))
    assert not is_invertible(Matrix.zeros(0, 1))
    assert Matrix.zeros(0, 0).inverse() == Matrix.zeros(0, 0)


def test_rank_small_examples():
    m = [[1, 2], [2, 4]]
    assert rank(Matrix.from_rows(m)) == 1
    assert rank(Matrix.from_rows(m, F2)) == 1
    assert rank(Matrix.from_rows([[1, 1], [1, -1]])) == 2
    assert rank(Matrix.from_rows([[1, 1], [1, -1]], F2)) == 1


def test_shape_errors():
    with pytest.raises(ShapeError):
        compose(Matrix.zeros(2, 3), Matrix.zeros(2, 3))
    with pytest.raises(ShapeError):
        Matrix.identity(2) + Matrix.identity(3)
    with pytest.raises(ShapeError):
        Matrix.from_rows([[1, 2]]).inverse()


def test_inverse_and_solve():
    m = Matrix.from_rows([[2, 1], [1, 1]])
    assert m @ m.inverse() == Matrix.identity(2)
    with pytest.raises(ZeroDivisionError):
        Matrix.from_rows([[1, 2], [2, 4]]).inverse()
    rhs = Matrix.from_rows([[3], [2]])
    x = m.solve(rhs)
    assert m @ x == rhs
    assert Matrix.from_rows([[1, 2], [2, 4]]).solve(Matrix.from_rows([[1], [0]])) is None


def test_field_spec_parsing():
    assert FieldSpec.parse("Q") == QQ
    assert FieldSpec.parse("Fp:7") == FieldSpec(7)
    assert str(FieldSpec(7)) == "Fp:7"
    for bad in ("Fp:4", "Fp:x", "R", "Fp:1"):
        with pytest.raises(ValueError):
            FieldSpec.parse(bad)


def test_prime_field_arithmetic():
    a, b = Fp(3, 5), Fp(4, 5)
    assert a + b == Fp(2, 5)
    assert a * b == Fp(2, 5)
    assert a / b * b == a
    assert -a == Fp(2, 5)
    assert F5("1/2") == Fp(3, 5)
    with pytest.raises(ValueError):
        F5("1/5")


def test_parse_rational():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational("−2") == -2
    assert parse_rational(4) == 4
    for bad in ("1/0", "x", True, 1.5):
        with pytest.raises(ValueError):
            parse_rational(bad)


def test_json_round_trip():
    m = Matrix.from_rows([["1/2", -3], [0, 7]])
    assert m.to_json() == [["1/2", "-3"], ["0", "7"]]
    assert Matrix.from_json(m.to_json(), 2, 2) == m
    with pytest.raises(ShapeError):
        Matrix.from_json([["1"]], 2, 2)


def test_sign_of_det():
    assert sign_of_det(Matrix.identity(3)) == 1
    assert sign_of_det(Matrix.from_rows([[0, 1], [1, 0]])) == -1
    assert sign_of_det(Matrix.from_rows([[1, 2], [2, 4]])) == 0
    assert sign_of_det(Matrix.zeros(0, 0)) == 1


def test_block_assembly():
    m = Matrix.block([1, 2], [2, 1], {(0, 0): Matrix.from_rows([[1, 2]]), (1, 1): Matrix.from_rows([[3], [4]])})
    assert m == Matrix.from_rows([[1, 2, 0], [0, 0, 3], [0, 0, 4]])


# ---------------------------------------------------------------- chain complexes


def test_cohomology_examples():
    one = Matrix.identity(1)
    assert ChainComplex(0, (1, 1), {0: one}).cohomology_dims() == {0: 0, 1: 0}
    assert ChainComplex(0, (1, 1), {}).cohomology_dims() == {0: 1, 1: 1}
    fan = ChainComplex(0, (1, 2), {0: Matrix.from_rows([[1], [-1]])})
    assert fan.cohomology_dims() == {0: 0, 1: 1}


def test_square_defect_reports_degree():
    one = Matrix.identity(1)
    c = ChainComplex(3, (1, 1, 1), {3: one, 4: one})
    assert c.square_defect() == 3
    with pytest.raises(ChainComplexError) as e:
        c.cohomology_dims()
    assert e.value.degree == 3


def test_chain_map_and_induced():
    src = ChainComplex(0, (1, 1), {0: Matrix.identity(1)})
    dst = ChainComplex(0, (1, 1), {})
    assert chain_map_defect({0: Matrix.identity(1), 1: Matrix.identity(1)}, src, dst) == 0
    assert chain_map_defect({1: Matrix.identity(1)}, dst, dst) is None
    ind = induced_on_cohomology({0: Matrix.identity(1), 1: Matrix.identity(1)}, dst, dst)
    assert ind == {0: (1, 1, 1), 1: (1, 1, 1)}


# ---------------------------------------------------------------- properties


@given(int_matrices())
def test_rank_of_transpose(m):
    assert rank(m) == rank(transpose(m))


@given(int_matrices())
def test_rank_nullity(m):
    k = kernel_basis(m)
    assert k.rows == m.cols
    assert k.cols + rank(m) == m.cols
    assert (m @ k).is_zero()
    assert rank(k) == k.cols


@given(int_matrices())
def test_fraction_free_rank_matches_reduction(m):
    assert rank(m) == len(m.rref()[1])


@given(int_matrices(), st.sampled_from([2, 3, 5, 7]))
def test_rank_over_prime_field_is_at_most_rational_rank(m, p):
    rows = [[int(x) for x in r] for r in m.entries]
    mp = Matrix.from_rows(rows, FieldSpec(p), m.cols)
    assert rank(mp) <= rank(m)
    assert rank(mp) == len(mp.rref()[1])


@given(int_matrices(max_rows=4, max_cols=4))
def test_invertible_iff_full_rank_square(m):
    assert is_invertible(m) == (m.rows == m.cols and rank(m) == m.rows)
    if is_invertible(m):
        assert m.inverse() @ m == Matrix.identity(m.rows)


@st.composite
def complexes(draw):
    """Random three-term complexes with d1 d0 = 0 built from the cokernel of d0."""
    a = draw(int_matrices(max_rows=4, max_cols=4))
    c0, c1 = a.cols, a.rows
    ann = a.T.kernel().T  # rows vanish on the image of a
    c2 = draw(st.integers(0, 3))
    r = draw(st.lists(st.lists(st.integers(-3, 3), min_size=ann.rows, max_size=ann.rows), min_size=c2, max_size=c2))
    mix = Matrix.from_rows(r, QQ, ann.rows)
    d1 = mix @ ann if ann.rows else Matrix.zeros(c2, c1)
    lo = draw(st.integers(-2, 2))
    return ChainComplex(lo, (c0, c1, c2), {lo: a, lo + 1: d1})


@given(complexes())
def test_euler_characteristic_of_cohomology(c):
    h = c.cohomology_dims()
    assert all(v >= 0 for v in h.values())
    assert sum((-1) ** i * v for i, v in h.items()) == c.euler_characteristic()


@given(complexes())
def test_identity_is_quasi_isomorphism(c):
    ident = {i: Matrix.identity(c.dim(i)) for i in c.degrees()}
    assert chain_map_defect(ident, c, c) is None
    h = c.cohomology_dims()
    ind = induced_on_cohomology(ident, c, c)
    assert all(ind[i] == (h[i], h[i], h[i]) for i in c.degrees())
