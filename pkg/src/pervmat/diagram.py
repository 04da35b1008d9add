"""Matrix diagrams: spaces ``E[A,B]`` over product cells ``iA + B``.

``dprime(A|B1->B2)`` runs covariantly in the real index along a cover
``B1 < B2``; ``dsecond(A2->A1|B)`` runs contravariantly in the imaginary
index along a cover ``A1 < A2``.  A matrix diagram must have commuting
elementary squares, and its cover maps must be invertible whenever the two
cells involved lie in the same complex stratum.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable

from .arrangement import ArrangementError, Face, InternalDefect, normalize_signs, tits_product
from .linalg import QQ, FieldSpec, Matrix, ShapeError
from .strata import ProductIndex


class DiagramError(ValueError):
    """Malformed diagram input; ``problems`` lists every issue found."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems) if self.problems else "malformed diagram")


def _dkey(a: Face, b: Face) -> str:
    return f"{a.signs}|{b.signs}"


def _pkey(a: Face, b1: Face, b2: Face) -> str:
    return f"{a.signs}|{b1.signs}->{b2.signs}"


def _skey(a2: Face, a1: Face, b: Face) -> str:
    return f"{a2.signs}->{a1.signs}|{b.signs}"


@dataclass(frozen=True, eq=False)
class MatrixDiagram:
    index: ProductIndex
    dims: dict
    dprime: dict = field(default_factory=dict)
    dsecond: dict = field(default_factory=dict)
    field: FieldSpec = QQ

    def __post_init__(self):
        problems = []
        imag, real = self.index.imag, self.index.real
        real_covers = set(real.covers)
        imag_covers = set(imag.covers)
        for (a, b), v in self.dims.items():
            if a not in imag or b not in real:
                problems.append(f"dims: unknown cell {_dkey(a, b)}")
            elif not isinstance(v, int) or v < 0:
                problems.append(f"dims: {_dkey(a, b)} must be a nonnegative integer")
        for (a, b1, b2), m in self.dprime.items():
            if a not in imag or (b1, b2) not in real_covers:
                problems.append(f"dprime: {_pkey(a, b1, b2)} is not a cover of real faces")
            elif m.shape != (self.dim(a, b2), self.dim(a, b1)):
                problems.append(f"dprime: {_pkey(a, b1, b2)} has shape {m.shape}, expected {(self.dim(a, b2), self.dim(a, b1))}")
        for (a2, a1, b), m in self.dsecond.items():
            if b not in real or (a1, a2) not in imag_covers:
                problems.append(f"dsecond: {_skey(a2, a1, b)} is not a cover of imaginary faces")
            elif m.shape != (self.dim(a1, b), self.dim(a2, b)):
                problems.append(f"dsecond: {_skey(a2, a1, b)} has shape {m.shape}, expected {(self.dim(a1, b), self.dim(a2, b))}")
        if problems:
            raise DiagramError(problems)

    # access

    @property
    def is_central(self) -> bool:
        return self.index.is_central

    def dim(self, a: Face, b: Face) -> int:
        return self.dims.get((a, b), 0)

    def dp(self, a: Face, b1: Face, b2: Face) -> Matrix:
        m = self.dprime.get((a, b1, b2))
        return m if m is not None else Matrix.zeros(self.dim(a, b2), self.dim(a, b1), self.field)

    def ds(self, a2: Face, a1: Face, b: Face) -> Matrix:
        m = self.dsecond.get((a2, a1, b))
        return m if m is not None else Matrix.zeros(self.dim(a1, b), self.dim(a2, b), self.field)

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def replace(self, *, dprime: dict | None = None, dsecond: dict | None = None, dims: dict | None = None) -> "MatrixDiagram":
        """Copy with some entries overridden (keys as in the stored dicts)."""
        return MatrixDiagram(
            self.index,
            {**self.dims, **(dims or {})},
            {**self.dprime, **(dprime or {})},
            {**self.dsecond, **(dsecond or {})},
            self.field,
        )

    # serialization

    def to_json(self) -> dict:
        dims = {_dkey(a, b): v for (a, b), v in self.dims.items() if v}
        dp = {_pkey(*k): m.to_json() for k, m in self.dprime.items() if m.rows and m.cols}
        ds = {_skey(*k): m.to_json() for k, m in self.dsecond.items() if m.rows and m.cols}
        return {
            "field": str(self.field),
            "dims": dict(sorted(dims.items())),
            "dprime": dict(sorted(dp.items())),
            "dsecond": dict(sorted(ds.items())),
        }

    def __eq__(self, other):
        if not isinstance(other, MatrixDiagram):
            return NotImplemented
        return self.index is other.index and self.to_json() == other.to_json()

    def __hash__(self):
        return hash(json.dumps(self.to_json(), sort_keys=True))


def _face(poset, text: str, what: str, unknown: dict[str, list[str]]) -> Face | None:
    try:
        f = poset.get(normalize_signs(text))
    except ArrangementError:
        f = None
    if f is None:
        unknown.setdefault(text, []).append(what)
    return f


def diagram_from_json(
    index: ProductIndex,
    data: dict,
    fld: FieldSpec | None = None,
    covariant_dsecond_keys: bool = False,
) -> MatrixDiagram:
    """Parse the JSON diagram format against ``index``.

    With ``covariant_dsecond_keys`` the ``dsecond`` keys are read as
    ``"A1->A2|B"`` (smaller face first); the matrices still map
    ``E[A2,B] -> E[A1,B]``.
    """
    if not isinstance(data, dict):
        raise DiagramError(["diagram file must hold a JSON object"])
    problems: list[str] = []
    unknown: dict[str, list[str]] = {}
    try:
        fld = fld or FieldSpec.parse(str(data.get("field", "Q")))
    except ValueError as e:
        raise DiagramError([str(e)]) from None
    imag, real = index.imag, index.real
    real_covers, imag_covers = set(real.covers), set(imag.covers)
    dims = {}
    for k, v in (data.get("dims") or {}).items():
        parts = k.split("|")
        if len(parts) != 2:
            problems.append(f"bad dims key {k!r}")
            continue
        a = _face(imag, parts[0], f"dims key {k!r}", unknown)
        b = _face(real, parts[1], f"dims key {k!r}", unknown)
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            problems.append(f"dims {k!r}: expected a nonnegative integer")
            continue
        if a is not None and b is not None:
            dims[(a, b)] = v

    def matrix(m, rows, cols, where):
        try:
            return Matrix.from_json(m, rows, cols, fld)
        except ShapeError as e:
            problems.append(f"{where}: {e}")
        except (ValueError, TypeError, ZeroDivisionError) as e:
            problems.append(f"{where}: bad entry ({e})")
        return None

    dprime = {}
    for k, m in (data.get("dprime") or {}).items():
        try:
            a_txt, rest = k.split("|")
            b1_txt, b2_txt = rest.split("->")
        except ValueError:
            problems.append(f"bad dprime key {k!r}")
            continue
        a = _face(imag, a_txt, f"dprime key {k!r}", unknown)
        b1 = _face(real, b1_txt, f"dprime key {k!r}", unknown)
        b2 = _face(real, b2_txt, f"dprime key {k!r}", unknown)
        if None in (a, b1, b2):
            continue
        if (b1, b2) not in real_covers:
            problems.append(f"dprime key {k!r}: {b1.signs} -> {b2.signs} is not a cover")
            continue
        mm = matrix(m, dims.get((a, b2), 0), dims.get((a, b1), 0), f"dprime {k!r}")
        if mm is not None:
            dprime[(a, b1, b2)] = mm

    dsecond = {}
    for k, m in (data.get("dsecond") or {}).items():
        try:
            arrow, b_txt = k.split("|")
            x_txt, y_txt = arrow.split("->")
        except ValueError:
            problems.append(f"bad dsecond key {k!r}")
            continue
        a2_txt, a1_txt = (y_txt, x_txt) if covariant_dsecond_keys else (x_txt, y_txt)
        a2 = _face(imag, a2_txt, f"dsecond key {k!r}", unknown)
        a1 = _face(imag, a1_txt, f"dsecond key {k!r}", unknown)
        b = _face(real, b_txt, f"dsecond key {k!r}", unknown)
        if None in (a2, a1, b):
            continue
        if (a1, a2) not in imag_covers:
            problems.append(f"dsecond key {k!r}: {a1.signs} < {a2.signs} is not a cover")
            continue
        mm = matrix(m, dims.get((a1, b), 0), dims.get((a2, b), 0), f"dsecond {k!r}")
        if mm is not None:
            dsecond[(a2, a1, b)] = mm
    for k in data:
        if k not in ("field", "dims", "dprime", "dsecond", "name", "description"):
            problems.append(f"unknown top-level key {k!r}")
    for text, where in sorted(unknown.items()):
        more = f" and {len(where) - 1} more" if len(where) > 1 else ""
        problems.insert(0, f"unknown face key {text!r} (in {where[0]}{more})")
    if problems:
        raise DiagramError(problems)
    return MatrixDiagram(index, dims, dprime, dsecond, fld)


def load_diagram(index: ProductIndex, path: str | Path, fld: FieldSpec | None = None, covariant_dsecond_keys: bool = False) -> MatrixDiagram:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise DiagramError([f"{path}: invalid JSON ({e})"]) from None
    return diagram_from_json(index, data, fld, covariant_dsecond_keys)


# ---------------------------------------------------------------- validation


@dataclass(frozen=True)
class IsoCover:
    """A cover map that the axioms require to be invertible."""

    kind: str  # "dprime" or "dsecond"
    imag: tuple[Face, ...]  # (A,) for dprime, (A2, A1) for dsecond
    real: tuple[Face, ...]  # (B1, B2) for dprime, (B,) for dsecond

    @property
    def storage_key(self) -> tuple[Face, Face, Face]:
        return self.imag + self.real

    def label(self) -> str:
        return _pkey(*self.storage_key) if self.kind == "dprime" else _skey(*self.storage_key)

    def matrix(self, d: MatrixDiagram) -> Matrix:
        return d.dp(*self.storage_key) if self.kind == "dprime" else d.ds(*self.storage_key)


def required_isos(index: ProductIndex) -> list[IsoCover]:
    """Covers whose two end cells share a stratum key."""
    out = []
    for a in index.imag.faces:
        for b1, b2 in index.real.covers:
            if index.key(a, b1).key == index.key(a, b2).key:
                out.append(IsoCover("dprime", (a,), (b1, b2)))
    for a1, a2 in index.imag.covers:
        for b in index.real.faces:
            if index.key(a1, b).key == index.key(a2, b).key:
                out.append(IsoCover("dsecond", (a2, a1), (b,)))
    return out


@dataclass
class ValidationReport:
    squares: list[dict] = field(default_factory=list)
    m3_prime: list[dict] = field(default_factory=list)
    m3_second: list[dict] = field(default_factory=list)
    criterion_mismatches: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.squares or self.m3_prime or self.m3_second or self.criterion_mismatches)

    def to_json(self) -> dict:
        return {
            "valid": self.ok,
            "square_failures": self.squares,
            "m3_prime_failures": self.m3_prime,
            "m3_second_failures": self.m3_second,
            "criterion_mismatches": self.criterion_mismatches,
        }


def _pmap(fn: Callable, items: list, jobs: int) -> list:
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def _square_checks(d: MatrixDiagram) -> list[Callable[[], dict | None]]:
    idx = d.index
    checks = []
    real_diamonds = idx.real.diamonds()
    imag_diamonds = idx.imag.diamonds()
    for a in idx.imag.faces:
        for b1, b2, c2, b3 in real_diamonds:
            def chk(a=a, b1=b1, b2=b2, c2=c2, b3=b3):
                if d.dp(a, b2, b3) @ d.dp(a, b1, b2) != d.dp(a, c2, b3) @ d.dp(a, b1, c2):
                    return {"kind": "dprime-dprime", "imag": a.signs, "real": [b1.signs, b2.signs, c2.signs, b3.signs]}
                return None
            checks.append(chk)
    for b in idx.real.faces:
        for a1, a2, c2, a3 in imag_diamonds:
            def chk(b=b, a1=a1, a2=a2, c2=c2, a3=a3):
                if d.ds(a2, a1, b) @ d.ds(a3, a2, b) != d.ds(c2, a1, b) @ d.ds(a3, c2, b):
                    return {"kind": "dsecond-dsecond", "real": b.signs, "imag": [a1.signs, a2.signs, c2.signs, a3.signs]}
                return None
            checks.append(chk)
    for a1, a2 in idx.imag.covers:
        for b1, b2 in idx.real.covers:
            def chk(a1=a1, a2=a2, b1=b1, b2=b2):
                if d.dp(a1, b1, b2) @ d.ds(a2, a1, b1) != d.ds(a2, a1, b2) @ d.dp(a2, b1, b2):
                    return {"kind": "mixed", "imag": [a1.signs, a2.signs], "real": [b1.signs, b2.signs]}
                return None
            checks.append(chk)
    return checks


def validate(d: MatrixDiagram, jobs: int = 1) -> ValidationReport:
    """Check commuting squares and invertibility along same-stratum covers.

    Every failure is listed.  For central arrangements the stratum-key test
    for which covers must be invertible is cross-checked against the Tits
    product test.
    """
    idx = d.index
    rep = ValidationReport()
    rep.squares = [r for r in _pmap(lambda f: f(), _square_checks(d), jobs) if r is not None]

    def m3(iso: IsoCover) -> dict | None:
        m = iso.matrix(d)
        if m.is_invertible():
            return None
        out = {"map": iso.label(), "shape": list(m.shape), "rank": m.rank()}
        if idx.is_central:
            if iso.kind == "dprime":
                a, b1, b2 = iso.storage_key
                w = (tits_product(idx.real, a, b1), tits_product(idx.real, a, b2))
            else:
                a2, a1, b = iso.storage_key
                w = (tits_product(idx.real, b, a1), tits_product(idx.real, b, a2))
            out["tits"] = [w[0].signs, w[1].signs]
        else:
            cell = iso.storage_key
            out["key"] = idx.key(cell[0], cell[-1]).label() if iso.kind == "dsecond" else idx.key(cell[0], cell[1]).label()
        return out

    isos = required_isos(idx)
    results = _pmap(m3, isos, jobs)
    for iso, r in zip(isos, results):
        if r is not None:
            (rep.m3_prime if iso.kind == "dprime" else rep.m3_second).append(r)
    if idx.is_central:
        rep.criterion_mismatches = tits_key_mismatches(idx)
    rep.squares.sort(key=lambda r: json.dumps(r, sort_keys=True))
    rep.m3_prime.sort(key=lambda r: r["map"])
    rep.m3_second.sort(key=lambda r: r["map"])
    return rep


def tits_key_mismatches(idx: ProductIndex) -> list[dict]:
    """Covers where the Tits test and the stratum-key test disagree."""
    out = []
    poset = idx.real
    for a in poset.faces:
        for b1, b2 in poset.covers:
            by_key = idx.key(a, b1).key == idx.key(a, b2).key
            by_tits = tits_product(poset, a, b1) == tits_product(poset, a, b2)
            if by_key != by_tits:
                out.append({"face": a.signs, "cover": [b1.signs, b2.signs]})
    return out


def validate_affine(d: MatrixDiagram, jobs: int = 1) -> ValidationReport:
    if d.is_central:
        raise ArrangementError("validate_affine needs an affine arrangement")
    return validate(d, jobs)


# ---------------------------------------------------------------- duality


def dualize(d: MatrixDiagram) -> MatrixDiagram:
    """``E*[A,B] = E[B,A]^T`` with the two kinds of maps exchanged."""
    if not d.is_central:
        raise ArrangementError("duality is defined for central arrangements only")
    dims = {(b, a): v for (a, b), v in d.dims.items()}
    dprime = {(a, b1, b2): m.T for (b2, b1, a), m in d.dsecond.items()}
    dsecond = {(a2, a1, b): m.T for (b, a1, a2), m in d.dprime.items()}
    return MatrixDiagram(d.index, dims, dprime, dsecond, d.field)


def zero_diagram(index: ProductIndex, fld: FieldSpec = QQ) -> MatrixDiagram:
    return MatrixDiagram(index, {}, {}, {}, fld)


def direct_sum(d1: MatrixDiagram, d2: MatrixDiagram) -> MatrixDiagram:
    if d1.index is not d2.index:
        raise ValueError("direct sum of diagrams over different arrangements")
    idx = d1.index
    dims = {}
    for a in idx.imag.faces:
        for b in idx.real.faces:
            v = d1.dim(a, b) + d2.dim(a, b)
            if v:
                dims[(a, b)] = v

    def bsum(m1: Matrix, m2: Matrix) -> Matrix:
        return Matrix.block([m1.rows, m2.rows], [m1.cols, m2.cols], {(0, 0): m1, (1, 1): m2}, d1.field)

    dprime = {}
    for a in idx.imag.faces:
        for b1, b2 in idx.real.covers:
            dprime[(a, b1, b2)] = bsum(d1.dp(a, b1, b2), d2.dp(a, b1, b2))
    dsecond = {}
    for a1, a2 in idx.imag.covers:
        for b in idx.real.faces:
            dsecond[(a2, a1, b)] = bsum(d1.ds(a2, a1, b), d2.ds(a2, a1, b))
    return MatrixDiagram(idx, dims, dprime, dsecond, d1.field)


# ---------------------------------------------------------------- morphisms


@dataclass(frozen=True, eq=False)
class DiagramMorphism:
    source: MatrixDiagram
    target: MatrixDiagram
    components: dict  # (A, B) -> Matrix  E[A,B] -> F[A,B]

    def __post_init__(self):
        if self.source.index is not self.target.index:
            raise ValueError("morphism between diagrams over different arrangements")
        problems = []
        for (a, b), m in self.components.items():
            if m.shape != (self.target.dim(a, b), self.source.dim(a, b)):
                problems.append(f"component {_dkey(a, b)} has shape {m.shape}, expected {(self.target.dim(a, b), self.source.dim(a, b))}")
        if problems:
            raise DiagramError(problems)

    def at(self, a: Face, b: Face) -> Matrix:
        m = self.components.get((a, b))
        return m if m is not None else Matrix.zeros(self.target.dim(a, b), self.source.dim(a, b), self.source.field)

    def failures(self) -> list[str]:
        """Cover maps that the components fail to commute with."""
        s, t, idx = self.source, self.target, self.source.index
        out = []
        for a in idx.imag.faces:
            for b1, b2 in idx.real.covers:
                if self.at(a, b2) @ s.dp(a, b1, b2) != t.dp(a, b1, b2) @ self.at(a, b1):
                    out.append("dprime " + _pkey(a, b1, b2))
        for a1, a2 in idx.imag.covers:
            for b in idx.real.faces:
                if self.at(a1, b) @ s.ds(a2, a1, b) != t.ds(a2, a1, b) @ self.at(a2, b):
                    out.append("dsecond " + _skey(a2, a1, b))
        return out

    @property
    def is_valid(self) -> bool:
        return not self.failures()


def identity_morphism(d: MatrixDiagram) -> DiagramMorphism:
    comps = {k: Matrix.identity(v, d.field) for k, v in d.dims.items()}
    return DiagramMorphism(d, d, comps)


def zero_morphism(s: MatrixDiagram, t: MatrixDiagram) -> DiagramMorphism:
    return DiagramMorphism(s, t, {})


def _induced(sub_src: Matrix, sub_dst: Matrix, f: Matrix, what: str) -> Matrix:
    """X with ``f @ sub_src == sub_dst @ X`` (restriction to subspaces)."""
    x = sub_dst.solve(f @ sub_src)
    if x is None:
        raise InternalDefect(f"induced map on {what} is not well defined")
    return x


def kernel(m: DiagramMorphism) -> tuple[MatrixDiagram, dict]:
    """Pointwise kernel and the inclusion matrices ``K[A,B]`` into the source."""
    s, idx = m.source, m.source.index
    inc = {}
    dims = {}
    for a in idx.imag.faces:
        for b in idx.real.faces:
            k = m.at(a, b).kernel()
            inc[(a, b)] = k
            if k.cols:
                dims[(a, b)] = k.cols
    dprime, dsecond = {}, {}
    for a in idx.imag.faces:
        for b1, b2 in idx.real.covers:
            dprime[(a, b1, b2)] = _induced(inc[(a, b1)], inc[(a, b2)], s.dp(a, b1, b2), "kernel " + _pkey(a, b1, b2))
    for a1, a2 in idx.imag.covers:
        for b in idx.real.faces:
            dsecond[(a2, a1, b)] = _induced(inc[(a2, b)], inc[(a1, b)], s.ds(a2, a1, b), "kernel " + _skey(a2, a1, b))
    return MatrixDiagram(idx, dims, dprime, dsecond, s.field), inc


def cokernel(m: DiagramMorphism) -> tuple[MatrixDiagram, dict]:
    """Pointwise cokernel and the quotient matrices ``Q[A,B]`` from the target."""
    t, idx = m.target, m.target.index
    fld = t.field
    quo, sec = {}, {}
    dims = {}
    for a in idx.imag.faces:
        for b in idx.real.faces:
            q = m.at(a, b).T.kernel().T  # rows span the annihilator of the image
            quo[(a, b)] = q
            s = q.solve(Matrix.identity(q.rows, fld)) if q.rows else Matrix.zeros(q.cols, 0, fld)
            if s is None:
                raise InternalDefect("quotient map is not surjective")
            sec[(a, b)] = s
            if q.rows:
                dims[(a, b)] = q.rows

    def induced(q_src, s_src, q_dst, f, what):
        x = q_dst @ f @ s_src
        if x @ q_src != q_dst @ f:
            raise InternalDefect(f"induced map on {what} is not well defined")
        return x

    dprime, dsecond = {}, {}
    for a in idx.imag.faces:
        for b1, b2 in idx.real.covers:
            dprime[(a, b1, b2)] = induced(quo[(a, b1)], sec[(a, b1)], quo[(a, b2)], t.dp(a, b1, b2), "cokernel " + _pkey(a, b1, b2))
    for a1, a2 in idx.imag.covers:
        for b in idx.real.faces:
            dsecond[(a2, a1, b)] = induced(quo[(a2, b)], sec[(a2, b)], quo[(a1, b)], t.ds(a2, a1, b), "cokernel " + _skey(a2, a1, b))
    return MatrixDiagram(idx, dims, dprime, dsecond, fld), quo


def image_dims(m: DiagramMorphism) -> dict:
    idx = m.source.index
    return {(a, b): m.at(a, b).rank() for a in idx.imag.faces for b in idx.real.faces}


# ---------------------------------------------------------------- single-indexed data


@dataclass(frozen=True)
class SingleIndexed:
    """The zero column ``B -> E[0,B]`` and zero row ``A -> E[A,0]``."""

    column_dims: dict
    column_maps: dict  # (B1, B2) -> dprime(0|B1->B2)
    row_dims: dict
    row_maps: dict  # (A2, A1) -> dsecond(A2->A1|0)
    dimension_law_failures: list

    def to_json(self) -> dict:
        return {
            "column": {f.signs: v for f, v in self.column_dims.items()},
            "column_maps": {f"{b1.signs}->{b2.signs}": m.to_json() for (b1, b2), m in self.column_maps.items()},
            "row": {f.signs: v for f, v in self.row_dims.items()},
            "row_maps": {f"{a2.signs}->{a1.signs}": m.to_json() for (a2, a1), m in self.row_maps.items()},
            "dimension_law_failures": self.dimension_law_failures,
        }


def extract_single_indexed(d: MatrixDiagram) -> SingleIndexed:
    """Read off the zero row and column and check ``dim E[A,B] = dim E[0, B o A]``."""
    if not d.is_central:
        raise ArrangementError("single-indexed extraction needs a central arrangement")
    poset = d.index.real
    z = poset.zero_face
    if z is None:
        raise ArrangementError("the arrangement has no zero face (it is not essential)")
    col = {b: d.dim(z, b) for b in poset.faces}
    row = {a: d.dim(a, z) for a in poset.faces}
    col_maps = {(b1, b2): d.dp(z, b1, b2) for b1, b2 in poset.covers}
    row_maps = {(a2, a1): d.ds(a2, a1, z) for a1, a2 in poset.covers}
    bad = []
    for a in poset.faces:
        for b in poset.faces:
            ba = tits_product(poset, b, a)
            if d.dim(a, b) != d.dim(z, ba):
                bad.append({"cell": _dkey(a, b), "dim": d.dim(a, b), "tits": ba.signs, "expected": d.dim(z, ba)})
    return SingleIndexed(col, col_maps, row, row_maps, bad)


def map_items(d: MatrixDiagram) -> Iterable[tuple[str, tuple, Matrix]]:
    """All cover maps of ``d`` as ``(kind, storage key, matrix)``."""
    idx = d.index
    for a in idx.imag.faces:
        for b1, b2 in idx.real.covers:
            yield "dprime", (a, b1, b2), d.dp(a, b1, b2)
    for a1, a2 in idx.imag.covers:
        for b in idx.real.faces:
            yield "dsecond", (a2, a1, b), d.ds(a2, a1, b)
