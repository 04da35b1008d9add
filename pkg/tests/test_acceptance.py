"""Acceptance criteria 1-11. Each test records one PASS/FAIL line."""
from __future__ import annotations

import itertools
import random

from conftest import record

from pervmat import catalog
from pervmat.arrangement import boolean, concurrent_lines, enumerate_faces, three_lines, tits_by_sampling, tits_product
from pervmat.cli import EXIT_OK, EXIT_REJECTED, run_check
from pervmat.cousin import cell_euler_sum, compact_cohomology, compact_complex
from pervmat.diagram import cokernel, dualize, image_dims, kernel, required_isos, validate
from pervmat.dirac import to_dirac, validate_dirac
from pervmat.fan import build_orientation, compact_cochains, constant_sheaf, costalk_complex, interval_sheaf
from pervmat.linalg import Matrix
from pervmat.strata import ProductIndex, s1_classes, s1_direct_partition

TEST_ARRANGEMENTS = {
    "line": boolean(1),
    "boolean2": boolean(2),
    "three_lines": three_lines(),
    "boolean3": boolean(3),
}


def _swap(label: str, kind: str) -> str:
    if kind == "dprime":
        a, rest = label.split("|")
        b1, b2 = rest.split("->")
        return f"{b2}->{b1}|{a}"
    arrow, b = label.split("|")
    a2, a1 = arrow.split("->")
    return f"{b}|{a1}->{a2}"


def test_criterion_01_face_counts():
    got = {f"boolean{n}": len(enumerate_faces(boolean(n))) for n in (1, 2, 3)}
    got.update({f"concurrent{m}": len(enumerate_faces(concurrent_lines(m))) for m in (2, 3, 4)})
    want = {"boolean1": 3, "boolean2": 9, "boolean3": 27, "concurrent2": 9, "concurrent3": 13, "concurrent4": 17}
    ok = got == want
    record(1, ok, f"face counts {got}")
    assert ok


def test_criterion_02_tits_product():
    bad = []
    for name, arr in TEST_ARRANGEMENTS.items():
        p = enumerate_faces(arr)
        prod = {(b, a): tits_product(p, b, a) for b, a in itertools.product(p.faces, repeat=2)}
        for a, b, c in itertools.product(p.faces, repeat=3):
            if prod[(prod[(a, b)], c)] != prod[(a, prod[(b, c)])]:
                bad.append((name, "assoc", a.signs, b.signs, c.signs))
            if p.leq(a, c) and not p.leq(prod[(b, a)], prod[(b, c)]):
                bad.append((name, "monotone", a.signs, b.signs, c.signs))
        for (b, a), ba in prod.items():
            if ba.zero_set != b.zero_set & a.zero_set:
                bad.append((name, "zero sets", b.signs, a.signs))
    rng = random.Random(20240611)
    posets = {name: enumerate_faces(TEST_ARRANGEMENTS[name]) for name in ("boolean2", "three_lines", "boolean3")}
    sampled = 0
    for _ in range(1000):
        name = rng.choice(sorted(posets))
        p = posets[name]
        b, a = rng.choice(p.faces), rng.choice(p.faces)
        sampled += 1
        if tits_product(p, b, a) != tits_by_sampling(p, b, a):
            bad.append((name, "sampling", b.signs, a.signs))
    ok = not bad and sampled >= 1000
    record(2, ok, f"exhaustive on {len(TEST_ARRANGEMENTS)} arrangements, {sampled} sampled pairs, {len(bad)} failures")
    assert ok, bad[:5]


def test_criterion_03_strata():
    bad = []
    for name, arr in TEST_ARRANGEMENTS.items():
        idx = ProductIndex.of(arr)
        poset = idx.real
        for c in poset.faces:
            if s1_classes(idx, c) != s1_direct_partition(poset, c):
                bad.append((name, "s1", c.signs))
        for b in poset.faces:
            for a1, a2 in itertools.product(poset.faces, repeat=2):
                if not poset.leq(a1, a2):
                    continue
                by_key = idx.key(a1, b).key == idx.key(a2, b).key
                if by_key != (tits_product(poset, b, a1) == tits_product(poset, b, a2)):
                    bad.append((name, "key", b.signs, a1.signs, a2.signs))
        for c1, c2, d in itertools.product(poset.faces, repeat=3):
            if idx.key(d, c1).key == idx.key(d, c2).key:
                if any(idx.key(a, c1).key != idx.key(a, c2).key for a in poset.above(d)):
                    bad.append((name, "enlarge", c1.signs, c2.signs, d.signs))
    ok = not bad
    record(3, ok, f"S(1) closure, key/Tits equivalence and enlargement, {len(bad)} failures")
    assert ok, bad[:5]


def test_criterion_04_orientation_and_constant_fan():
    bad = []
    for name, arr in TEST_ARRANGEMENTS.items():
        poset = enumerate_faces(arr)
        o = build_orientation(poset)
        if o.anticommutativity_failures():
            bad.append((name, "anticommutativity"))
        if arr.ambient_dim <= 2:
            c = compact_cochains(constant_sheaf(poset), o)
            if c.square_defect() is not None:
                bad.append((name, "d^2"))
            h = {k: v for k, v in c.cohomology_dims().items() if v}
            if h != {arr.ambient_dim: 1}:
                bad.append((name, h))
    ok = not bad
    record(4, ok, f"anticommutativity and constant fan compact cohomology, failures {bad}")
    assert ok


def test_criterion_05_interval_costalks():
    bad = []
    checked = 0
    for name in ("line", "boolean2"):
        poset = enumerate_faces(TEST_ARRANGEMENTS[name])
        o = build_orientation(poset)
        for a, d in itertools.product(poset.faces, repeat=2):
            h = {k: v for k, v in costalk_complex(interval_sheaf(poset, a), d, o).cohomology_dims().items() if v}
            checked += 1
            if h != ({0: 1} if d == a else {}):
                bad.append((name, a.signs, d.signs, h))
    ok = not bad
    record(5, ok, f"{checked} interval costalks, {len(bad)} failures")
    assert ok, bad


def test_criterion_06_duality():
    bad = []
    names = [n for n, e in catalog.ENTRIES.items() if catalog.build(n).is_central]
    for name in names:
        d = catalog.build(name)
        dd = dualize(d)
        if dualize(dd).to_json() != d.to_json():
            bad.append((name, "involution"))
        r, rd = validate(d), validate(dd)
        if r.ok != rd.ok:
            bad.append((name, "validity"))
        if sorted(_swap(f["map"], "dprime") for f in r.m3_prime) != sorted(f["map"] for f in rd.m3_second):
            bad.append((name, "M3' -> M3''"))
        if sorted(_swap(f["map"], "dsecond") for f in r.m3_second) != sorted(f["map"] for f in rd.m3_prime):
            bad.append((name, "M3'' -> M3'"))
    ok = not bad
    record(6, ok, f"{len(names)} central catalog entries, failures {bad}")
    assert ok


def test_criterion_07_positive_decisions():
    codes = {name: run_check(catalog.build(name))[0] for name in ("line_constant", "line_skyscraper", "boolean2_constant", "affine01_identity")}
    ok = all(c == EXIT_OK for c in codes.values())
    record(7, ok, f"exit codes {codes}")
    assert ok


def _mutants(d):
    for iso in required_isos(d.index):
        m = iso.matrix(d)
        if not m.rows:
            continue
        yield iso, Matrix.zeros(m.rows, m.cols, d.field)
        if m.rows >= 2:
            rows = [list(r) for r in m.entries]
            for r in rows:
                r[0] = d.field.zero()
            yield iso, Matrix.from_rows(rows, d.field, m.cols)


def test_criterion_08_mutation_kill_rate():
    total = killed = 0
    survivors = []
    for name in catalog.ENTRIES:
        d = catalog.build(name)
        for iso, bad in _mutants(d):
            mutated = d.replace(**{iso.kind: {iso.storage_key: bad}})
            total += 1
            if run_check(mutated, fail_fast=True)[0] == EXIT_REJECTED:
                killed += 1
            else:
                survivors.append((name, iso.label()))
    ok = total > 0 and killed == total
    record(8, ok, f"{killed}/{total} mutants rejected")
    assert ok, survivors[:5]


def test_criterion_09_dirac():
    names = [n for n, e in catalog.ENTRIES.items() if e.arrangement == "line" and e.perverse]
    bad = [n for n in names if not all(validate_dirac(to_dirac(catalog.build(n))).values())]
    sky = to_dirac(catalog.build("line_skyscraper"))
    const = to_dirac(catalog.build("line_constant"))
    one = Matrix.identity(1)
    sky_ok = sky.dims == (0, 1, 0)
    const_ok = const.dims == (1, 1, 1) and all(m == one for m in (const.delta_minus, const.delta_plus, const.gamma_minus, const.gamma_plus))
    ok = not bad and sky_ok and const_ok
    record(9, ok, f"{len(names) - len(bad)}/{len(names)} line entries give Dirac data, skyscraper {sky.dims}, constant identities {const_ok}")
    assert ok


def test_criterion_10_kernels_and_cokernels():
    bad = []
    morphisms = catalog.morphisms()
    for name, f in morphisms.items():
        if not f.is_valid:
            bad.append((name, "not a morphism"))
            continue
        k, _ = kernel(f)
        c, _ = cokernel(f)
        if not (validate(k).ok and validate(c).ok):
            bad.append((name, "validity"))
        for (a, b), r in image_dims(f).items():
            if f.source.dim(a, b) != k.dim(a, b) + r:
                bad.append((name, "rank-nullity", a.signs, b.signs))
    ok = not bad and len(morphisms) >= 10
    record(10, ok, f"{len(morphisms)} morphisms, failures {bad}")
    assert ok


def test_criterion_11_compact_cohomology():
    sky = compact_cohomology(catalog.build("line_skyscraper"))
    bad = []
    for name in catalog.ENTRIES:
        d = catalog.build(name)
        if compact_complex(d).euler_characteristic() != cell_euler_sum(d):
            bad.append(name)
    ok = sky == {1: 1} and not bad
    record(11, ok, f"skyscraper {sky}, Euler identity failures {bad}")
    assert ok
