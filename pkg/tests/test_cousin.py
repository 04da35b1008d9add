from __future__ import annotations

from collections import Counter

import pytest

from pervmat import catalog
from pervmat.cousin import (
    build_cousin,
    cell_euler_sum,
    compact_cohomology,
    compact_cohomology_via_column,
    compact_complex,
    constructibility_report,
    dual_tube_complexes,
    perversity_report,
    stalk_cohomology,
)
from pervmat.diagram import MatrixDiagram, dualize, required_isos, zero_diagram
from pervmat.linalg import Matrix

CENTRAL = [n for n, e in catalog.ENTRIES.items() if e.arrangement != "affine01"]
POSITIVE = [n for n, e in catalog.ENTRIES.items() if e.perverse]


def _stalk(c, real, imag):
    idx = c.index
    return c.stalk(idx.real[real], idx.imag[imag]).complex


@pytest.fixture(scope="module")
def lonely_corner(line):
    p = line.real["+"]
    return MatrixDiagram(line, {(p, p): 1})


@pytest.fixture(scope="module")
def low_edge(line):
    """k at imaginary part 0, real part + only: degree-1 class on a codim-0 cell."""
    return MatrixDiagram(line, {(line.imag["0"], line.real["+"]): 1})


# ---------------------------------------------------------------- stalks


def test_skyscraper_stalks():
    c = build_cousin(catalog.build("line_skyscraper"))
    nonzero = {k: t.complex for k, t in c.stalks.items() if any(t.complex.dims)}
    assert len(nonzero) == 1
    ((b, dface), cx), = nonzero.items()
    assert (b.signs, dface.signs) == ("0", "0")
    assert cx.dims == (0, 1)


def test_constant_stalks():
    c = build_cousin(catalog.build("line_constant"))
    for b in "-0+":
        cx = _stalk(c, b, "0")
        assert cx.dims == (2, 1)
        assert cx.d(0).rank() == 1
        assert cx.cohomology_dims() == {0: 1, 1: 0}
        assert _stalk(c, b, "+").dims == (1, 0)


def test_shriek_and_star_origin_stalks():
    assert _stalk(build_cousin(catalog.build("line_shriek")), "0", "0").cohomology_dims() == {0: 0, 1: 0}
    assert _stalk(build_cousin(catalog.build("line_star")), "0", "0").cohomology_dims() == {0: 1, 1: 1}


def test_stalk_summands_are_faces_above_imaginary_part(three):
    d = catalog.build("three_lines_constant")
    c = build_cousin(d)
    for (b, dface), t in c.stalks.items():
        faces = [f for deg in t.summands for f in deg]
        assert sorted(faces, key=lambda f: f.signs) == sorted(three.imag.above(dface), key=lambda f: f.signs)
        for p, deg in enumerate(t.summands):
            assert all(three.ambient_dim - f.dim == p for f in deg)


# ---------------------------------------------------------------- constructibility


def test_constant_is_constructible():
    rep = constructibility_report(build_cousin(catalog.build("line_constant")))
    assert rep.ok and rep.failures == [] and rep.structure.ok


def test_skyscraper_is_constructible():
    assert constructibility_report(build_cousin(catalog.build("line_skyscraper"))).ok


def test_broken_rim_witness():
    rep = constructibility_report(build_cousin(catalog.build("line_broken_rim")))
    assert not rep.ok
    witnesses = {(f["direction"], f["from"], f["to"]) for f in rep.failures}
    assert ("real", "0|-", "+|-") in witnesses
    assert all(f["key"] == "{}" for f in rep.failures)


def test_lonely_corner_not_constructible(lonely_corner):
    rep = constructibility_report(build_cousin(lonely_corner))
    assert rep.structure.ok
    assert not rep.ok
    assert ("imag", "+|0", "+|-") in {(f["direction"], f["from"], f["to"]) for f in rep.failures}


def test_center2_bad_reports_chain_defects():
    rep = perversity_report(catalog.build("line_center2_bad"))
    assert not rep.perverse
    defects = rep.constructibility.structure.chain_map_defects
    assert {(f["from"], f["to"]) for f in defects} == {("0|0", "+|0"), ("0|0", "-|0")}


# ---------------------------------------------------------------- perversity


@pytest.mark.parametrize("name", POSITIVE)
def test_positive_entries_are_perverse(name):
    rep = perversity_report(catalog.build(name))
    assert rep.perverse, rep.to_json()
    assert rep.p_minus_violations == [] and rep.p_plus_violations == []


def test_skyscraper_support():
    rep = perversity_report(catalog.build("line_skyscraper"))
    assert rep.supports == {1: [{"cell": "0|0", "dim": 1, "key": "{0}", "codim": 1}]}


def test_low_edge_violates_p_minus(low_edge):
    rep = perversity_report(low_edge)
    assert rep.p_minus is False
    assert [(v["cell"], v["degree"]) for v in rep.p_minus_violations] == [("+|0", 1)]
    assert not rep.perverse


def test_negative_entries_are_rejected():
    for name, e in catalog.ENTRIES.items():
        if not e.perverse:
            assert not perversity_report(catalog.build(name)).perverse


def _violation_multiset(vs):
    return Counter((v["cell"], v["degree"], v["dim"]) for v in vs)


def _swap_cell(label):
    b, dface = label.split("|")
    return f"{dface}|{b}"


def test_duality_compatibility(lonely_corner, low_edge):
    diagrams = [catalog.build(n) for n in CENTRAL] + [lonely_corner, low_edge]
    for d in diagrams:
        rep, rep_dual = perversity_report(d), perversity_report(dualize(d))
        if rep.p_plus is not None and rep_dual.p_minus is not None:
            assert _violation_multiset(rep.p_plus_violations) == _violation_multiset(rep_dual.p_minus_violations)
        assert rep.perverse == rep_dual.perverse


def test_dual_routes_agree(lonely_corner, low_edge):
    """The dual tube complex at (C, D) computes the dual diagram's Cousin stalk at (D, C)."""
    diagrams = [catalog.build(n) for n in CENTRAL if catalog.ENTRIES[n].perverse] + [lonely_corner, low_edge]
    for d in diagrams:
        tubes = dual_tube_complexes(d)
        other = stalk_cohomology(build_cousin(dualize(d)))
        for (c, dface), t in tubes.items():
            mine = {k: v for k, v in t.complex.cohomology_dims().items() if v}
            theirs = {k: v for k, v in other[(dface, c)].items() if v}
            assert mine == theirs


def test_affine_dual_route_is_used():
    rep = perversity_report(catalog.build("affine01_identity"))
    assert rep.dual_route == "dual tube complex" and rep.p_plus


def test_parallel_reports_match():
    for name in ("line_shriek", "boolean2_shriek_x_constant", "line_broken_rim"):
        d = catalog.build(name)
        assert perversity_report(d, jobs=4).to_json() == perversity_report(d, jobs=1).to_json()


# ---------------------------------------------------------------- compact cohomology


def test_compact_cohomology_anchors(line):
    assert compact_cohomology(catalog.build("line_skyscraper")) == {1: 1}
    assert compact_cohomology(catalog.build("line_constant")) == {2: 1}
    assert compact_cohomology(zero_diagram(line)) == {}
    assert compact_cohomology(catalog.build("boolean2_constant")) == {4: 1}


@pytest.mark.parametrize("name", POSITIVE)
def test_compact_cohomology_matches_column_route(name):
    d = catalog.build(name)
    assert compact_cohomology(d) == compact_cohomology_via_column(d)


@pytest.mark.parametrize("name", sorted(catalog.ENTRIES))
def test_euler_identity(name):
    d = catalog.build(name)
    assert compact_complex(d).euler_characteristic() == cell_euler_sum(d)


def test_total_complex_squares_to_zero_without_m3(lonely_corner, low_edge):
    for d in (lonely_corner, low_edge, catalog.build("three_lines_constant")):
        assert compact_complex(d).square_defect() is None


# ---------------------------------------------------------------- mutation sensitivity


def _mutants(d):
    for iso in required_isos(d.index):
        m = iso.matrix(d)
        if not m.rows:
            continue
        yield iso, Matrix.zeros(m.rows, m.cols, d.field)
        if m.rows >= 2:
            cols = [list(r) for r in m.entries]
            for r in cols:
                r[0] = d.field.zero()
            yield iso, Matrix.from_rows(cols, d.field, m.cols)


@pytest.mark.parametrize("name", [n for n in POSITIVE if catalog.ENTRIES[n].arrangement == "line"])
def test_mutations_flip_a_cousin_verdict(name):
    d = catalog.build(name)
    count = 0
    for iso, bad in _mutants(d):
        mutated = d.replace(**{iso.kind: {iso.storage_key: bad}})
        rep = perversity_report(mutated)
        flipped = not (rep.constructibility.ok and rep.p_minus and rep.p_plus)
        assert flipped, iso.label()
        count += 1
    assert count > 0 or d.total_dim() == 1
