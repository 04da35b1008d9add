"""Product cells ``iA + B`` of C^n and the stratifications built from them.

A product cell pairs an imaginary face A with a real face B.  In the central
case both come from the same face poset; for an affine arrangement the
imaginary face lives in the linearized (central) arrangement.  Cells lie in
the same complex stratum exactly when their stratum keys agree, the key being
the set of hyperplanes whose complexification contains the cell.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .arrangement import (
    ArrangementError,
    Face,
    FacePoset,
    InternalDefect,
    enumerate_faces,
    Arrangement,
    DEFAULT_MAX_FACES,
)
from .linalg import Matrix


@dataclass(frozen=True)
class ProductCell:
    imag: Face
    real: Face

    @property
    def dim(self) -> int:
        return self.imag.dim + self.real.dim

    def label(self) -> str:
        """``B|D`` style label: real part first, then imaginary part."""
        return f"{self.real.signs}|{self.imag.signs}"


@dataclass(frozen=True)
class StratumKey:
    key: frozenset[int]
    codim: int

    def label(self) -> str:
        return "{" + ",".join(str(i) for i in sorted(self.key)) + "}"


class ProductIndex:
    """The face posets indexing product cells, plus stratum keys.

    ``imag`` is the poset of imaginary parts, ``real`` that of real parts.
    For affine arrangements ``lin_index[i]`` is the linearized hyperplane
    carrying the linear part of hyperplane ``i``.
    """

    def __init__(self, real: FacePoset, imag: FacePoset | None = None, lin_index: tuple[int, ...] | None = None):
        arr = real.arrangement
        self.real = real
        if arr.is_central:
            self.imag = real if imag is None else imag
            self.lin_index = tuple(range(arr.size))
        else:
            lin, idx = arr.linearization
            self.imag = imag if imag is not None else enumerate_faces(lin)
            self.lin_index = idx if lin_index is None else lin_index
        self._key_cache: dict[tuple[str, str], StratumKey] = {}

    @classmethod
    def of(cls, arr: Arrangement, max_faces: int = DEFAULT_MAX_FACES) -> "ProductIndex":
        real = enumerate_faces(arr, max_faces)
        if arr.is_central:
            return cls(real)
        lin, idx = arr.linearization
        return cls(real, enumerate_faces(lin, max_faces), idx)

    @property
    def arrangement(self) -> Arrangement:
        return self.real.arrangement

    @property
    def is_central(self) -> bool:
        return self.arrangement.is_central

    @property
    def ambient_dim(self) -> int:
        return self.arrangement.ambient_dim

    def cells(self) -> Iterator[ProductCell]:
        for a in self.imag.faces:
            for b in self.real.faces:
                yield ProductCell(a, b)

    def raw_key(self, imag: Face, real: Face) -> frozenset[int]:
        if self.is_central:
            return imag.zero_set & real.zero_set
        return frozenset(i for i in real.zero_set if imag.signs[self.lin_index[i]] == "0")

    def key(self, imag: Face, real: Face) -> StratumKey:
        ck = (imag.signs, real.signs)
        hit = self._key_cache.get(ck)
        if hit is not None:
            return hit
        raw = self.raw_key(imag, real)
        sat = self.saturate(raw)
        if sat != raw:
            raise InternalDefect(f"stratum key of {real.signs}|{imag.signs} is not saturated")
        arr = self.arrangement
        codim = arr.normal_matrix(raw).rank() if raw else 0
        out = StratumKey(raw, codim)
        self._key_cache[ck] = out
        return out

    def saturate(self, key: frozenset[int]) -> frozenset[int]:
        """All hyperplanes containing the complex flat cut out by ``key``.

        Central: normals in the span of the key's normals.  Affine: the
        same, with the offset carried along as an extra coordinate (a
        nonempty intersection is assumed, which holds for keys of cells).
        """
        if not key:
            return key
        arr = self.arrangement
        rows = [list(arr.hyperplanes[i].normal) + [arr.hyperplanes[i].offset] for i in sorted(key)]
        base = Matrix.from_rows(rows).rank()
        out = set(key)
        for j, h in enumerate(arr.hyperplanes):
            if j not in key and Matrix.from_rows(rows + [list(h.normal) + [h.offset]]).rank() == base:
                out.add(j)
        return frozenset(out)


def complex_stratum_key(index: ProductIndex, cell: ProductCell) -> StratumKey:
    return index.key(cell.imag, cell.real)


def same_complex_stratum(index: ProductIndex, c1: ProductCell, c2: ProductCell) -> bool:
    return index.key(c1.imag, c1.real).key == index.key(c2.imag, c2.real).key


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _sorted_partition(groups) -> list[frozenset[Face]]:
    parts = [frozenset(g) for g in groups]
    return sorted(parts, key=lambda p: min((f.dim, f.signs) for f in p))


def s1_classes(index: ProductIndex, c: Face) -> list[frozenset[Face]]:
    """Partition of real faces B: closure of ``B1 <= B2`` with equal keys at imaginary part ``c``."""
    if not index.is_central:
        raise ArrangementError("S(1) classes are computed for central arrangements")
    poset = index.real
    uf = _UnionFind(poset.faces)
    for b1, b2 in poset.covers:
        if index.key(c, b1).key == index.key(c, b2).key:
            uf.union(b1, b2)
    groups: dict[Face, list[Face]] = {}
    for f in poset.faces:
        groups.setdefault(uf.find(f), []).append(f)
    return _sorted_partition(groups.values())


def s1_membership_direct(poset: FacePoset, c: Face, d: Face, x_face: Face) -> bool:
    """Whether real face ``x_face`` lies in the S(1) stratum ``[c, d]``."""
    if not poset.leq(c, d):
        raise ArrangementError(f"{c.signs} is not below {d.signs}")
    return all(x_face.signs[i] == d.signs[i] for i in c.zero_set)


def s1_direct_partition(poset: FacePoset, c: Face) -> list[frozenset[Face]]:
    """The fibers of ``s1_membership_direct`` over the faces ``d >= c``."""
    parts = []
    seen: set[Face] = set()
    for d in poset.above(c):
        part = frozenset(x for x in poset.faces if s1_membership_direct(poset, c, d, x))
        if d not in part:
            raise InternalDefect(f"face {d.signs} not in its own S(1) stratum")
        if not part & seen:
            parts.append(part)
            seen |= part
        elif part - seen:
            raise InternalDefect("direct S(1) strata overlap")
    if seen != set(poset.faces):
        raise InternalDefect("direct S(1) strata do not cover the faces")
    return _sorted_partition(parts)


def tau(index: ProductIndex, cell: ProductCell) -> ProductCell:
    if not index.is_central:
        raise ArrangementError("the swap involution needs a central arrangement")
    return ProductCell(cell.real, cell.imag)


def stratum_keys(index: ProductIndex) -> list[StratumKey]:
    seen = {}
    for cell in index.cells():
        k = complex_stratum_key(index, cell)
        seen[k.key] = k
    return sorted(seen.values(), key=lambda k: (k.codim, sorted(k.key)))
