"""Cellular sheaves on the face fan of an arrangement.

Orientation signs ``psi(A1 < A2)`` are incidence numbers of the cellular
cochain differential for a fixed choice of basis of each face's linear span.
A sheaf is a stalk dimension per face together with generalization maps
along covers ``B1 < B2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .arrangement import Face, FacePoset, InternalDefect
from .linalg import QQ, ChainComplex, FieldSpec, Matrix, ShapeError, sign_of_det


@dataclass(frozen=True)
class OrientationData:
    """Per face: a basis of its linear span and the free coordinates that
    read off coefficients in that basis.  Per cover: the sign ``psi``."""

    poset: FacePoset
    bases: dict = field(repr=False)
    free: dict = field(repr=False)
    signs: dict = field(repr=False)

    def psi(self, a1: Face, a2: Face) -> int:
        try:
            return self.signs[(a1, a2)]
        except KeyError:
            raise KeyError(f"{a1.signs} < {a2.signs} is not a cover") from None

    def coords(self, face: Face, v) -> list[Fraction]:
        """Coefficients of ``v`` (a vector in the span of ``face``) in its basis."""
        return [v[j] for j in self.free[face]]

    def anticommutativity_failures(self) -> list[tuple[Face, Face, Face, Face]]:
        out = []
        for a1, a2, b2, a3 in self.poset.diamonds():
            if self.psi(a1, a2) * self.psi(a2, a3) != -self.psi(a1, b2) * self.psi(b2, a3):
                out.append((a1, a2, b2, a3))
        return out


def build_orientation(poset: FacePoset) -> OrientationData:
    """Orient every face by the reduced-echelon basis of its direction space.

    The direction space of a face is the null space of the normals of the
    hyperplanes containing it; the basis vector for free column j has a 1 at
    j and zeros at the other free columns.  ``psi(A1 < A2)`` is +1 when the
    outward vector (from a point of A2 towards A1) followed by the basis of
    A1 is positively oriented in the basis of A2.
    """
    arr = poset.arrangement
    n = arr.ambient_dim
    bases, free = {}, {}
    for f in poset.faces:
        z = sorted(f.zero_set)
        if z:
            basis, fr = arr.normal_matrix(z).kernel_with_free()
        else:
            basis, fr = Matrix.identity(n), list(range(n))
        if basis.cols != f.dim:
            raise InternalDefect(f"direction space of {f.signs} has dimension {basis.cols}, expected {f.dim}")
        bases[f] = basis
        free[f] = fr
    signs = {}
    for a1, a2 in poset.covers:
        out = [p - q for p, q in zip(a1.witness, a2.witness)]
        cols = [[out[j] for j in free[a2]]]
        b1 = bases[a1]
        for k in range(b1.cols):
            cols.append([b1[j, k] for j in free[a2]])
        s = sign_of_det(Matrix.from_rows(cols).T)
        if s == 0:
            raise InternalDefect(f"degenerate orientation comparison on {a1.signs} < {a2.signs}")
        signs[(a1, a2)] = s
    return OrientationData(poset, bases, free, signs)


@dataclass(frozen=True)
class FanSheaf:
    poset: FacePoset
    stalk_dims: dict
    gen_maps: dict = field(default_factory=dict)
    field: FieldSpec = QQ

    def __post_init__(self):
        for f in self.stalk_dims:
            if f not in self.poset:
                raise ShapeError(f"stalk given on unknown face {f}")
        covers = set(self.poset.covers)
        for (a, b), m in self.gen_maps.items():
            if (a, b) not in covers:
                raise ShapeError(f"{a.signs} -> {b.signs} is not a cover")
            if m.shape != (self.dim(b), self.dim(a)):
                raise ShapeError(f"map {a.signs} -> {b.signs} has shape {m.shape}, expected {(self.dim(b), self.dim(a))}")

    def dim(self, f: Face) -> int:
        return self.stalk_dims.get(f, 0)

    def gen(self, a: Face, b: Face) -> Matrix:
        m = self.gen_maps.get((a, b))
        if m is None:
            return Matrix.zeros(self.dim(b), self.dim(a), self.field)
        return m

    def square_failures(self) -> list[tuple[Face, Face, Face, Face]]:
        out = []
        for a1, a2, b2, a3 in self.poset.diamonds():
            if self.gen(a2, a3) @ self.gen(a1, a2) != self.gen(b2, a3) @ self.gen(a1, b2):
                out.append((a1, a2, b2, a3))
        return out


def constant_sheaf(poset: FacePoset, fld: FieldSpec = QQ) -> FanSheaf:
    one = Matrix.identity(1, fld)
    return FanSheaf(poset, {f: 1 for f in poset.faces}, {c: one for c in poset.covers}, fld)


def interval_sheaf(poset: FacePoset, a: Face, fld: FieldSpec = QQ) -> FanSheaf:
    """Stalk k on every face of the closure of ``a``, identity maps there."""
    below = set(poset.below(a))
    one = Matrix.identity(1, fld)
    maps = {(x, y): one for x, y in poset.covers if x in below and y in below}
    return FanSheaf(poset, {f: 1 for f in below}, maps, fld)


def point_sheaf(poset: FacePoset, a: Face, fld: FieldSpec = QQ) -> FanSheaf:
    """Stalk k on ``a`` alone."""
    return FanSheaf(poset, {a: 1}, {}, fld)


def _graded_complex(sheaf: FanSheaf, orient: OrientationData, faces: list[Face], degree) -> ChainComplex:
    by_deg: dict[int, list[Face]] = {}
    for f in faces:
        by_deg.setdefault(degree(f), []).append(f)
    if not by_deg:
        return ChainComplex(0, (0,), {}, sheaf.field)
    lo, hi = min(by_deg), max(by_deg)
    terms = [by_deg.get(d, []) for d in range(lo, hi + 1)]
    dims = tuple(sum(sheaf.dim(f) for f in t) for t in terms)
    diffs = {}
    for i in range(len(terms) - 1):
        src, dst = terms[i], terms[i + 1]
        pos = {f: k for k, f in enumerate(dst)}
        blocks = {}
        for j, a in enumerate(src):
            for b in sheaf.poset.covers_up(a):
                if b in pos:
                    blocks[(pos[b], j)] = sheaf.gen(a, b) * orient.psi(a, b)
        diffs[lo + i] = Matrix.block([sheaf.dim(f) for f in dst], [sheaf.dim(f) for f in src], blocks, sheaf.field)
    return ChainComplex(lo, dims, diffs, sheaf.field)


def costalk_complex(sheaf: FanSheaf, d: Face, orient: OrientationData | None = None) -> ChainComplex:
    """Signed complex over the star of ``d``: degree ``dim A - dim D``."""
    orient = orient or build_orientation(sheaf.poset)
    faces = [a for a in sheaf.poset.above(d)]
    return _graded_complex(sheaf, orient, faces, lambda a: a.dim - d.dim)


def compact_cochains(sheaf: FanSheaf, orient: OrientationData | None = None) -> ChainComplex:
    orient = orient or build_orientation(sheaf.poset)
    return _graded_complex(sheaf, orient, list(sheaf.poset.faces), lambda a: a.dim)


def compact_cohomology(sheaf: FanSheaf, orient: OrientationData | None = None) -> dict[int, int]:
    """Compactly supported cohomology, by degree (zero degrees omitted)."""
    h = compact_cochains(sheaf, orient).cohomology_dims()
    return {i: v for i, v in h.items() if v}
