"""Standard example diagrams and morphisms.

Every diagram is produced by a builder function; the shipped JSON files
under ``data/`` are generated from the builders (``python3 -m
pervmat.catalog --write``) and the test suite checks that they agree.
"""

from __future__ import annotations

import argparse
import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Callable

from .arrangement import Arrangement, Face, boolean, points_on_line, three_lines
from .diagram import DiagramMorphism, MatrixDiagram, direct_sum, identity_morphism, zero_morphism
from .dirac import dirac_from_rows, dirac_preimage
from .linalg import QQ, FieldSpec, Matrix
from .strata import ProductIndex

ARRANGEMENTS: dict[str, Callable[[], Arrangement]] = {
    "line": lambda: boolean(1),
    "boolean2": lambda: boolean(2),
    "three_lines": three_lines,
    "affine01": lambda: points_on_line([0, 1]),
}


@lru_cache(maxsize=None)
def index_for(name: str) -> ProductIndex:
    return ProductIndex.of(ARRANGEMENTS[name]())


# ---------------------------------------------------------------- builders


def constant(index: ProductIndex, fld: FieldSpec = QQ) -> MatrixDiagram:
    """k on every cell, identity maps."""
    one = Matrix.identity(1, fld)
    dims = {(a, b): 1 for a in index.imag.faces for b in index.real.faces}
    dp = {(a, b1, b2): one for a in index.imag.faces for b1, b2 in index.real.covers}
    ds = {(a2, a1, b): one for a1, a2 in index.imag.covers for b in index.real.faces}
    return MatrixDiagram(index, dims, dp, ds, fld)


def skyscraper(index: ProductIndex, fld: FieldSpec = QQ) -> MatrixDiagram:
    """k at the cell (0, 0) only."""
    z = index.real.zero_face
    if z is None:
        raise ValueError("skyscraper needs a central essential arrangement")
    return MatrixDiagram(index, {(z, z): 1}, {}, {}, fld)


def affine_point(index: ProductIndex, point: str, fld: FieldSpec = QQ) -> MatrixDiagram:
    """k at the cell with real part the given vertex and imaginary part 0."""
    z = index.imag.minimal_faces[0]
    return MatrixDiagram(index, {(z, index.real[point]): 1}, {}, {}, fld)


def kron(a: Matrix, b: Matrix) -> Matrix:
    rows = []
    for i in range(a.rows):
        for k in range(b.rows):
            rows.append([a[i, j] * b[k, l] for j in range(a.cols) for l in range(b.cols)])
    return Matrix(a.rows * b.rows, a.cols * b.cols, tuple(tuple(r) for r in rows), a.field)


def external_product(d1: MatrixDiagram, d2: MatrixDiagram, index: ProductIndex) -> MatrixDiagram:
    """Diagram on a product arrangement: ``E[(A1,A2),(B1,B2)] = E1 (x) E2``.

    The hyperplanes of ``index`` must be those of the first factor followed
    by those of the second, so faces are concatenated sign strings.
    """
    i1, i2 = d1.index, d2.index
    m1 = i1.arrangement.size
    fld = d1.field

    def split(f: Face, poset1, poset2):
        return poset1[f.signs[:m1]], poset2[f.signs[m1:]]

    dims, dp, ds = {}, {}, {}
    for a in index.imag.faces:
        a1, a2 = split(a, i1.imag, i2.imag)
        for b in index.real.faces:
            b1, b2 = split(b, i1.real, i2.real)
            v = d1.dim(a1, b1) * d2.dim(a2, b2)
            if v:
                dims[(a, b)] = v
    for a in index.imag.faces:
        a1, a2 = split(a, i1.imag, i2.imag)
        for b, c in index.real.covers:
            b1, b2 = split(b, i1.real, i2.real)
            c1, c2 = split(c, i1.real, i2.real)
            if b1 == c1:
                m = kron(Matrix.identity(d1.dim(a1, b1), fld), d2.dp(a2, b2, c2))
            else:
                m = kron(d1.dp(a1, b1, c1), Matrix.identity(d2.dim(a2, b2), fld))
            dp[(a, b, c)] = m
    for a, c in index.imag.covers:
        a1, a2 = split(a, i1.imag, i2.imag)
        c1, c2 = split(c, i1.imag, i2.imag)
        for b in index.real.faces:
            b1, b2 = split(b, i1.real, i2.real)
            if a1 == c1:
                m = kron(Matrix.identity(d1.dim(a1, b1), fld), d2.ds(c2, a2, b2))
            else:
                m = kron(d1.ds(c1, a1, b1), Matrix.identity(d2.dim(a2, b2), fld))
            ds[(c, a, b)] = m
    return MatrixDiagram(index, dims, dp, ds, fld)


def line_from_dirac(rows: dict, dims: tuple[int, int, int]) -> MatrixDiagram:
    dd = dirac_from_rows(rows.get("dm"), rows.get("dp"), rows.get("gm"), rows.get("gp"), dims)
    return dirac_preimage(dd, index_for("line"))


def line_shriek() -> MatrixDiagram:
    """Centre k^2 with delta = e1, e2 and gamma = (1 1): acyclic stalk at the origin."""
    return line_from_dirac({"dm": [[1], [0]], "dp": [[0], [1]], "gm": [[1, 1]], "gp": [[1, 1]]}, (1, 2, 1))


def line_star() -> MatrixDiagram:
    """Centre k^2 with both deltas e1 and gamma = (1 0)."""
    return line_from_dirac({"dm": [[1], [0]], "dp": [[1], [0]], "gm": [[1, 0]], "gp": [[1, 0]]}, (1, 2, 1))


def line_monodromy2() -> MatrixDiagram:
    """Like the shriek entry but with gamma_+ = (2 1), so one rim map is 2."""
    return line_from_dirac({"dm": [[1], [0]], "dp": [[0], [1]], "gm": [[1, 1]], "gp": [[2, 1]]}, (1, 2, 1))


def line_broken_rim() -> MatrixDiagram:
    """Constant diagram with the rim map dprime(-|0->+) set to zero."""
    d = constant(index_for("line"))
    m, z, p = (index_for("line").real[s] for s in "-0+")
    return d.replace(dprime={(m, z, p): Matrix.zeros(1, 1)})


def line_center2_bad() -> MatrixDiagram:
    """Centre k^2 reached by rank-one dsecond maps, but dprime(0|0->pm) = (0 1)
    does not close the mixed squares."""
    d = line_star()
    z, p, m = (index_for("line").real[s] for s in "0+-")
    row = Matrix.from_rows([[0, 1]])
    return d.replace(dprime={(z, z, p): row, (z, z, m): row})


@dataclass(frozen=True)
class Entry:
    name: str
    arrangement: str
    build: Callable[[], MatrixDiagram]
    perverse: bool
    description: str


def _entries() -> list[Entry]:
    line, b2 = (lambda: index_for("line")), (lambda: index_for("boolean2"))
    return [
        Entry("line_constant", "line", lambda: constant(line()), True, "k everywhere, identity maps"),
        Entry("line_skyscraper", "line", lambda: skyscraper(line()), True, "k at the origin cell only"),
        Entry("line_shriek", "line", line_shriek, True, line_shriek.__doc__.strip()),
        Entry("line_star", "line", line_star, True, line_star.__doc__.strip()),
        Entry("line_monodromy2", "line", line_monodromy2, True, line_monodromy2.__doc__.strip()),
        Entry(
            "line_constant_plus_skyscraper",
            "line",
            lambda: direct_sum(constant(line()), skyscraper(line())),
            True,
            "direct sum of the constant and skyscraper diagrams",
        ),
        Entry("boolean2_constant", "boolean2", lambda: constant(b2()), True, "k everywhere, identity maps"),
        Entry("boolean2_skyscraper", "boolean2", lambda: skyscraper(b2()), True, "k at the origin cell only"),
        Entry(
            "boolean2_shriek_x_constant",
            "boolean2",
            lambda: external_product(line_shriek(), constant(line()), b2()),
            True,
            "external product of the shriek entry with the constant line diagram",
        ),
        Entry(
            "three_lines_constant",
            "three_lines",
            lambda: constant(index_for("three_lines")),
            True,
            "k everywhere, identity maps",
        ),
        Entry("affine01_identity", "affine01", lambda: constant(index_for("affine01")), True, "k on all 15 cells, identity maps"),
        Entry(
            "affine01_point0",
            "affine01",
            lambda: affine_point(index_for("affine01"), "0-"),
            True,
            "k at the cell over the vertex x = 0 only",
        ),
        Entry("line_broken_rim", "line", line_broken_rim, False, line_broken_rim.__doc__.strip()),
        Entry("line_center2_bad", "line", line_center2_bad, False, " ".join(line_center2_bad.__doc__.split())),
    ]


ENTRIES: dict[str, Entry] = {e.name: e for e in _entries()}


@lru_cache(maxsize=None)
def build(name: str) -> MatrixDiagram:
    return ENTRIES[name].build()


# ---------------------------------------------------------------- morphisms


def _comps(d_src: MatrixDiagram, d_dst: MatrixDiagram, special: dict) -> dict:
    """Identity (1x1) components where both sides are k, overridden by ``special``."""
    out = {}
    for (a, b), v in d_src.dims.items():
        if v == 1 and d_dst.dim(a, b) == 1:
            out[(a, b)] = Matrix.identity(1, d_src.field)
    out.update(special)
    return out


def morphisms() -> dict[str, DiagramMorphism]:
    line = index_for("line")
    z = line.real["0"]
    const, sky = build("line_constant"), build("line_skyscraper")
    shriek, star = build("line_shriek"), build("line_star")
    b2c = build("boolean2_constant")
    aff = build("affine01_identity")
    out = {
        "id_line_constant": identity_morphism(const),
        "id_line_skyscraper": identity_morphism(sky),
        "zero_line_constant": zero_morphism(const, const),
        "twice_line_shriek": DiagramMorphism(shriek, shriek, {k: Matrix.scalar(v, 2) for k, v in shriek.dims.items()}),
        "skyscraper_to_shriek": DiagramMorphism(sky, shriek, {(z, z): Matrix.from_rows([[1], [-1]])}),
        "shriek_to_constant": DiagramMorphism(shriek, const, _comps(shriek, const, {(z, z): Matrix.from_rows([[1, 1]])})),
        "constant_to_star": DiagramMorphism(const, star, _comps(const, star, {(z, z): Matrix.from_rows([[1], [0]])})),
        "star_to_skyscraper": DiagramMorphism(star, sky, {(z, z): Matrix.from_rows([[0, 1]])}),
        "id_boolean2_constant": identity_morphism(b2c),
        "zero_boolean2_constant_to_skyscraper": zero_morphism(b2c, build("boolean2_skyscraper")),
        "thrice_affine01_identity": DiagramMorphism(aff, aff, {k: Matrix.scalar(v, 3) for k, v in aff.dims.items()}),
    }
    return out


# ---------------------------------------------------------------- files


def data_dir() -> Path:
    return Path(str(resources.files("pervmat") / "data"))


def arrangement_path(name: str) -> Path:
    return data_dir() / "arrangements" / f"{name}.json"


def diagram_path(name: str) -> Path:
    return data_dir() / "catalog" / f"{name}.diagram.json"


def expect_path(name: str) -> Path:
    return data_dir() / "catalog" / f"{name}.expect.json"


def expectations(name: str) -> dict:
    """Expected verdicts, computed from the builders by the checker itself
    except for ``perverse``, which is fixed by hand in the entry table."""
    from .cousin import compact_cohomology
    from .dirac import to_dirac

    e = ENTRIES[name]
    d = build(name)
    out = {"arrangement": e.arrangement, "perverse": e.perverse, "exit_code": 0 if e.perverse else 1}
    if e.perverse:
        out["compact_cohomology"] = {str(k): v for k, v in sorted(compact_cohomology(d).items())}
        if e.arrangement == "line":
            out["dirac_dims"] = list(to_dirac(d).dims)
    return out


def write_catalog(root: Path | None = None) -> list[Path]:
    root = root or data_dir()
    (root / "arrangements").mkdir(parents=True, exist_ok=True)
    (root / "catalog").mkdir(parents=True, exist_ok=True)
    written = []
    for name, mk in ARRANGEMENTS.items():
        p = root / "arrangements" / f"{name}.json"
        p.write_text(json.dumps(mk().to_json(), indent=2) + "\n")
        written.append(p)
    for name, e in ENTRIES.items():
        doc = {"name": name, "description": e.description, **build(name).to_json()}
        p = root / "catalog" / f"{name}.diagram.json"
        p.write_text(json.dumps(doc, indent=2) + "\n")
        q = root / "catalog" / f"{name}.expect.json"
        q.write_text(json.dumps(expectations(name), indent=2, sort_keys=True) + "\n")
        written += [p, q]
    return written


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description="Regenerate the shipped example files.")
    ap.add_argument("--write", action="store_true", help="write data files into the package")
    ap.add_argument("--root", type=Path, default=None, help="alternative output directory")
    args = ap.parse_args(argv)
    if not args.write:
        for name, e in ENTRIES.items():
            print(f"{name:34s} {e.arrangement:12s} {'perverse' if e.perverse else 'rejected'}")
        return 0
    for p in write_catalog(args.root):
        print(p)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
