from __future__ import annotations

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pervmat.arrangement import ArrangementError, flats, points_on_line, tits_product
from pervmat.strata import (
    ProductCell,
    ProductIndex,
    complex_stratum_key,
    s1_classes,
    s1_direct_partition,
    s1_membership_direct,
    same_complex_stratum,
    stratum_keys,
    tau,
)

from strategies import central_arrangements


def _cell(index, imag, real):
    return ProductCell(index.imag[imag], index.real[real])


def test_line_keys(line):
    keys = {(c.imag.signs, c.real.signs): complex_stratum_key(line, c) for c in line.cells()}
    assert keys.pop(("0", "0")).key == {0}
    assert all(k.key == frozenset() and k.codim == 0 for k in keys.values())
    assert len(keys) == 8
    assert [k.label() for k in stratum_keys(line)] == ["{}", "{0}"]


def test_same_stratum_examples(line):
    assert same_complex_stratum(line, _cell(line, "+", "0"), _cell(line, "0", "+"))
    assert not same_complex_stratum(line, _cell(line, "0", "0"), _cell(line, "0", "+"))


def test_affine_keys_on_fifteen_cells(affine01):
    cells = list(affine01.cells())
    assert len(cells) == 15
    labels = {c.label(): complex_stratum_key(affine01, c).label() for c in cells}
    # real faces of {x=0, x=1}: "0-" is the point 0, "+0" the point 1, "+-" the open interval
    assert labels["0-|0"] == "{0}"
    assert labels["+0|0"] == "{1}"
    assert labels["+-|0"] == "{}"
    assert labels["0-|+"] == "{}"
    assert sum(1 for v in labels.values() if v != "{}") == 2


def test_affine_keys_are_saturated(affine_indexes):
    for idx in affine_indexes.values():
        for c in idx.cells():
            k = complex_stratum_key(idx, c)
            assert idx.saturate(k.key) == k.key
            assert k.codim == len(k.key)


def test_s1_examples(line):
    z, p, m = (line.real[s] for s in "0+-")
    assert s1_classes(line, z) == [frozenset({z}), frozenset({p}), frozenset({m})]
    assert s1_classes(line, p) == [frozenset({z, p, m})]


def test_s1_rejects_affine(affine01):
    with pytest.raises(ArrangementError):
        s1_classes(affine01, affine01.imag.faces[0])


def test_s1_direct_membership_examples(line):
    poset = line.real
    z, p, m = (poset[s] for s in "0+-")
    assert s1_membership_direct(poset, z, p, p)
    assert not s1_membership_direct(poset, z, p, m)
    assert all(s1_membership_direct(poset, p, p, x) for x in poset.faces)
    with pytest.raises(ArrangementError):
        s1_membership_direct(poset, p, z, z)


def test_s1_class_of_c_contains_c(central_indexes):
    for idx in central_indexes.values():
        for c in idx.real.faces:
            assert any(c in cls for cls in s1_classes(idx, c))


def test_s1_closure_matches_direct_partition(central_indexes):
    for idx in central_indexes.values():
        for c in idx.real.faces:
            assert s1_classes(idx, c) == s1_direct_partition(idx.real, c)


def test_s1_refines_keys(central_indexes):
    for idx in central_indexes.values():
        for c in idx.real.faces:
            for cls in s1_classes(idx, c):
                assert len({idx.key(c, b).key for b in cls}) == 1


def test_tau_involution_and_key_invariance(central_indexes):
    for idx in central_indexes.values():
        for cell in idx.cells():
            t = tau(idx, cell)
            assert (t.imag, t.real) == (cell.real, cell.imag)
            assert tau(idx, t) == cell
            assert complex_stratum_key(idx, t) == complex_stratum_key(idx, cell)
            assert same_complex_stratum(idx, t, cell)


def test_tau_rejects_affine(affine01):
    with pytest.raises(ArrangementError):
        tau(affine01, next(affine01.cells()))


def test_tau_moves_s1_strata_off_s1(line):
    strata = {frozenset(ProductCell(c, b) for b in cls) for c in line.real.faces for cls in s1_classes(line, c)}
    assert sorted(len(s) for s in strata) == [1, 1, 1, 3, 3]
    swapped = {frozenset(tau(line, x) for x in s) for s in strata}
    assert swapped != strata
    rim = frozenset(ProductCell(line.imag["+"], b) for b in line.real.faces)
    assert rim in strata and frozenset(tau(line, x) for x in rim) not in strata


def test_keys_are_flats(central_indexes):
    for idx in central_indexes.values():
        assert {k.key for k in stratum_keys(idx)} == {fl.hyperplanes for fl in flats(idx.real)}


def test_tits_criterion_on_three_lines(three):
    faces = three.real.faces
    for b in faces:
        for a1, a2 in itertools.product(faces, repeat=2):
            if three.real.leq(a1, a2):
                by_key = three.key(a1, b).key == three.key(a2, b).key
                assert by_key == (tits_product(three.real, b, a1) == tits_product(three.real, b, a2))


@given(central_arrangements())
def test_strata_properties_on_random_arrangements(arr):
    idx = ProductIndex.of(arr)
    poset = idx.real
    for c in poset.faces:
        assert s1_classes(idx, c) == s1_direct_partition(poset, c)
    for c1, c2, d in itertools.product(poset.faces, repeat=3):
        if idx.key(d, c1).key == idx.key(d, c2).key:
            for a in poset.above(d):
                assert idx.key(a, c1).key == idx.key(a, c2).key


@given(st.lists(st.integers(-4, 4), min_size=1, max_size=4, unique=True))
def test_affine_point_cells_have_their_own_keys(points):
    idx = ProductIndex.of(points_on_line(points))
    zero = idx.imag["0"]
    nonempty = [c for c in idx.cells() if complex_stratum_key(idx, c).key]
    assert len(nonempty) == len(points)
    assert all(c.imag == zero and c.real.dim == 0 for c in nonempty)
