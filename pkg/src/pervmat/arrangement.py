"""Real hyperplane arrangements: faces as sign vectors, the face poset,
flats, and the Tits product.

A face is identified by its sign string in hyperplane order, e.g. ``"+0-"``.
Faces are found by inserting hyperplanes one at a time and splitting each
existing face with an exact feasibility test, so every face carries a
rational witness point.
"""

from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import lcm
from pathlib import Path
from typing import Iterable, Sequence

from .linalg import Matrix, parse_rational
from .lp import strict_feasible_point

log = logging.getLogger(__name__)

SIGN_CHARS = {1: "+", -1: "-", 0: "0"}
CHAR_SIGNS = {"+": 1, "-": -1, "0": 0, "−": -1}

DEFAULT_MAX_FACES = 100_000


class ArrangementError(ValueError):
    pass


class FaceBudgetExceeded(ArrangementError):
    pass


class InternalDefect(RuntimeError):
    """Raised when an invariant that cannot fail on valid input fails."""


def _sgn(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def normalize_signs(text: str) -> str:
    try:
        return "".join(SIGN_CHARS[CHAR_SIGNS[ch]] for ch in text)
    except KeyError:
        raise ArrangementError(f"bad sign string {text!r}") from None


@dataclass(frozen=True)
class Hyperplane:
    normal: tuple[Fraction, ...]
    offset: Fraction = Fraction(0)

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((a * b for a, b in zip(self.normal, x)), Fraction(0)) - self.offset


def _proportional(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction | None:
    """Scalar c with v == c*u, or None."""
    i = next(k for k, x in enumerate(u) if x)
    c = v[i] / u[i]
    if c and all(b == c * a for a, b in zip(u, v)):
        return c
    return None


@dataclass(frozen=True)
class Arrangement:
    ambient_dim: int
    hyperplanes: tuple[Hyperplane, ...]
    mode: str = "central"

    def __post_init__(self):
        if self.ambient_dim < 1:
            raise ArrangementError("ambient dimension must be positive")
        if self.mode not in ("central", "affine"):
            raise ArrangementError(f"unknown mode {self.mode!r}")
        for i, h in enumerate(self.hyperplanes):
            if len(h.normal) != self.ambient_dim:
                raise ArrangementError(f"hyperplane {i}: normal has length {len(h.normal)}, expected {self.ambient_dim}")
            if not any(h.normal):
                raise ArrangementError(f"hyperplane {i}: zero normal")
            if self.mode == "central" and h.offset != 0:
                raise ArrangementError(f"hyperplane {i}: central arrangements need zero offsets")

    @classmethod
    def build(cls, dim: int, hyperplanes: Iterable, mode: str = "central") -> "Arrangement":
        """Normalize input, rejecting repeats and merging proportional equations."""
        hs: list[Hyperplane] = []
        for i, h in enumerate(hyperplanes):
            if isinstance(h, Hyperplane):
                hp = h
            else:
                if isinstance(h, dict):
                    normal, offset = h["normal"], h.get("offset", 0)
                elif len(h) == 2 and isinstance(h[0], (list, tuple)):
                    normal, offset = h
                else:
                    normal, offset = h, 0
                hp = Hyperplane(tuple(parse_rational(x) for x in normal), parse_rational(offset))
            if len(hp.normal) != dim:
                raise ArrangementError(f"hyperplane {i}: normal has length {len(hp.normal)}, expected {dim}")
            if not any(hp.normal):
                raise ArrangementError(f"hyperplane {i}: zero normal")
            dup = False
            for j, g in enumerate(hs):
                if g == hp:
                    raise ArrangementError(f"hyperplane {i} repeats hyperplane {j}")
                c = _proportional(g.normal, hp.normal)
                if c is not None and hp.offset == c * g.offset:
                    log.warning("hyperplane %d is a rescaling of hyperplane %d; merged", i, j)
                    dup = True
                    break
            if not dup:
                hs.append(hp)
        return cls(dim, tuple(hs), mode)

    @property
    def size(self) -> int:
        return len(self.hyperplanes)

    @property
    def is_central(self) -> bool:
        return self.mode == "central"

    def normal_matrix(self, indices: Iterable[int] | None = None) -> Matrix:
        idx = range(self.size) if indices is None else sorted(indices)
        return Matrix.from_rows([self.hyperplanes[i].normal for i in idx], cols=self.ambient_dim)

    @property
    def is_essential(self) -> bool:
        return self.normal_matrix().rank() == self.ambient_dim

    def sign_vector(self, x: Sequence[Fraction]) -> str:
        return "".join(SIGN_CHARS[_sgn(h.value(x))] for h in self.hyperplanes)

    @cached_property
    def linearization(self) -> tuple["Arrangement", tuple[int, ...]]:
        """The central arrangement of linear parts, and the index map into it."""
        lin: list[Hyperplane] = []
        index = []
        for h in self.hyperplanes:
            for j, g in enumerate(lin):
                if _proportional(g.normal, h.normal) is not None:
                    index.append(j)
                    break
            else:
                index.append(len(lin))
                lin.append(Hyperplane(h.normal, Fraction(0)))
        return Arrangement(self.ambient_dim, tuple(lin), "central"), tuple(index)

    def to_json(self) -> dict:
        return {
            "dim": self.ambient_dim,
            "mode": self.mode,
            "hyperplanes": [
                {"normal": [_fmt(x) for x in h.normal], "offset": _fmt(h.offset)} for h in self.hyperplanes
            ],
        }


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def arrangement_from_json(data: dict) -> Arrangement:
    if not isinstance(data, dict):
        raise ArrangementError("arrangement file must hold a JSON object")
    try:
        dim = data["dim"]
        hs = data["hyperplanes"]
    except KeyError as e:
        raise ArrangementError(f"missing key {e.args[0]!r}") from None
    mode = data.get("mode", "central")
    if not isinstance(dim, int) or not isinstance(hs, list):
        raise ArrangementError("'dim' must be an integer and 'hyperplanes' a list")
    parsed = []
    for i, h in enumerate(hs):
        if not isinstance(h, dict) or "normal" not in h:
            raise ArrangementError(f"hyperplane {i} must be an object with a 'normal'")
        try:
            parsed.append(Hyperplane(tuple(parse_rational(x) for x in h["normal"]), parse_rational(h.get("offset", "0"))))
        except ValueError as e:
            raise ArrangementError(f"hyperplane {i}: {e}") from None
    arr = Arrangement.build(dim, parsed, mode)
    if data.get("essential") and not arr.is_essential:
        raise ArrangementError("arrangement flagged essential but the normals do not span R^n")
    return arr


def load_arrangement(path: str | Path) -> Arrangement:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise ArrangementError(f"{path}: invalid JSON ({e})") from None
    return arrangement_from_json(data)


# ---------------------------------------------------------------- faces


@dataclass(frozen=True)
class Face:
    signs: str
    dim: int = field(compare=False)
    witness: tuple[Fraction, ...] = field(compare=False, repr=False)

    def __str__(self) -> str:
        return self.signs

    @property
    def zero_set(self) -> frozenset[int]:
        return frozenset(i for i, s in enumerate(self.signs) if s == "0")

    def sign(self, i: int) -> int:
        return CHAR_SIGNS[self.signs[i]]


def _clear_denominators(x: Sequence[Fraction]) -> tuple[Fraction, ...]:
    d = lcm(*(v.denominator for v in x)) if x else 1
    return tuple(Fraction(v * d) for v in x)


def enumerate_faces(arr: Arrangement, max_faces: int = DEFAULT_MAX_FACES) -> "FacePoset":
    """All realizable sign vectors of ``arr`` with witnesses, as a poset."""
    if max_faces <= 0:
        raise ArrangementError("face budget must be positive")
    normals = [h.normal for h in arr.hyperplanes]
    offsets = [h.offset for h in arr.hyperplanes]
    # (signs so far, witness)
    current: list[tuple[tuple[int, ...], tuple[Fraction, ...]]] = [((), tuple(Fraction(0) for _ in range(arr.ambient_dim)))]
    for k, h in enumerate(arr.hyperplanes):
        nxt = []
        for signs, w in current:
            have = _sgn(h.value(w))
            for s in (-1, 0, 1):
                if s == have:
                    nxt.append((signs + (s,), w))
                    continue
                pt = strict_feasible_point(normals[: k + 1], offsets[: k + 1], signs + (s,))
                if pt is not None:
                    nxt.append((signs + (s,), tuple(pt)))
            if len(nxt) > max_faces:
                raise FaceBudgetExceeded(f"more than {max_faces} faces after {k + 1} hyperplanes")
        current = nxt
    faces = []
    for signs, w in current:
        key = "".join(SIGN_CHARS[s] for s in signs)
        if arr.sign_vector(w) != key:
            raise InternalDefect(f"witness {w} does not lie in face {key}")
        if arr.is_central:
            w = _clear_denominators(w)
        zeros = [i for i, s in enumerate(signs) if s == 0]
        dim = arr.ambient_dim - (arr.normal_matrix(zeros).rank() if zeros else 0)
        faces.append(Face(key, dim, w))
    return FacePoset(arr, faces)


class FacePoset:
    """Faces of an arrangement with the closure order ``A <= B``."""

    def __init__(self, arr: Arrangement, faces: Iterable[Face]):
        self.arrangement = arr
        self.faces: tuple[Face, ...] = tuple(sorted(faces, key=lambda f: (f.dim, f.signs)))
        self._by_signs = {f.signs: f for f in self.faces}
        up: dict[Face, list[Face]] = {f: [] for f in self.faces}
        down: dict[Face, list[Face]] = {f: [] for f in self.faces}
        covers = []
        by_dim: dict[int, list[Face]] = {}
        for f in self.faces:
            by_dim.setdefault(f.dim, []).append(f)
        for f in self.faces:
            for g in by_dim.get(f.dim + 1, ()):
                if self.leq(f, g):
                    covers.append((f, g))
                    up[f].append(g)
                    down[g].append(f)
        self.covers: tuple[tuple[Face, Face], ...] = tuple(covers)
        self._up = {f: tuple(v) for f, v in up.items()}
        self._down = {f: tuple(v) for f, v in down.items()}

    def __len__(self) -> int:
        return len(self.faces)

    def __iter__(self):
        return iter(self.faces)

    def __contains__(self, f) -> bool:
        return (f.signs if isinstance(f, Face) else f) in self._by_signs

    def __getitem__(self, signs: str) -> Face:
        try:
            return self._by_signs[normalize_signs(signs)]
        except KeyError:
            raise KeyError(f"no face {signs!r} in this arrangement") from None

    def get(self, signs: str) -> Face | None:
        return self._by_signs.get(signs)

    @staticmethod
    def leq(a: Face, b: Face) -> bool:
        return all(x == "0" or x == y for x, y in zip(a.signs, b.signs))

    def lt(self, a: Face, b: Face, p: int | None = None) -> bool:
        """``A <_p B``: ``A <= B`` with dimension gap ``p`` (any positive gap if None)."""
        if a == b or not self.leq(a, b):
            return False
        return p is None or b.dim - a.dim == p

    def covers_up(self, f: Face) -> tuple[Face, ...]:
        return self._up[f]

    def covers_down(self, f: Face) -> tuple[Face, ...]:
        return self._down[f]

    def above(self, f: Face) -> list[Face]:
        return [g for g in self.faces if self.leq(f, g)]

    def below(self, f: Face) -> list[Face]:
        return [g for g in self.faces if self.leq(g, f)]

    def codim(self, f: Face) -> int:
        return self.arrangement.ambient_dim - f.dim

    @cached_property
    def zero_face(self) -> Face | None:
        """The face {0}, present iff the arrangement is central and essential."""
        if not self.arrangement.is_central:
            return None
        f = self._by_signs.get("0" * self.arrangement.size)
        return f if f is not None and f.dim == 0 else None

    @cached_property
    def minimal_faces(self) -> tuple[Face, ...]:
        return tuple(f for f in self.faces if not self._down[f])

    def classify(self, x: Sequence[Fraction]) -> Face:
        return self[self.arrangement.sign_vector(x)]

    def diamonds(self) -> list[tuple[Face, Face, Face, Face]]:
        """All length-2 intervals ``A1 < A2, A2' < A3`` with ``A2 != A2'``."""
        out = []
        for a1 in self.faces:
            tops: dict[Face, list[Face]] = {}
            for a2 in self._up[a1]:
                for a3 in self._up[a2]:
                    tops.setdefault(a3, []).append(a2)
            for a3, mids in tops.items():
                for i in range(len(mids)):
                    for j in range(i + 1, len(mids)):
                        out.append((a1, mids[i], mids[j], a3))
        return out


def hyperplanes_containing(arr: Arrangement, face: Face) -> frozenset[int]:
    """Indices of hyperplanes containing ``face`` (the zero positions)."""
    return face.zero_set


def tits_product(poset: FacePoset, b: Face, a: Face) -> Face:
    """``B o A``: the face just off ``B`` in the direction of ``A``.

    Computed by the componentwise rule: B's sign where nonzero, else A's.
    """
    if not poset.arrangement.is_central:
        raise ArrangementError("the Tits product is defined here for central arrangements only")
    signs = "".join(y if x == "0" else x for x, y in zip(b.signs, a.signs))
    f = poset.get(signs)
    if f is None:
        raise InternalDefect(f"Tits product {b}o{a} = {signs} is not a face")
    return f


def tits_by_sampling(poset: FacePoset, b: Face, a: Face, eps: Fraction = Fraction(1, 2**20)) -> Face:
    """Oracle for the Tits product: classify ``(1-eps) b + eps a`` on witnesses."""
    x = [(1 - eps) * p + eps * q for p, q in zip(b.witness, a.witness)]
    return poset.classify(x)


@dataclass(frozen=True)
class Flat:
    hyperplanes: frozenset[int]
    codim: int

    def key(self) -> str:
        return "{" + ",".join(str(i) for i in sorted(self.hyperplanes)) + "}"


def flats(poset: FacePoset) -> list[Flat]:
    """All flats, each given by the full set of hyperplanes containing it.

    Every flat's generic part contains a face whose zero set is exactly
    that flat's hyperplane set, so the zero sets of faces enumerate them.
    """
    arr = poset.arrangement
    seen = {}
    for f in poset.faces:
        z = f.zero_set
        if z not in seen:
            seen[z] = Flat(z, arr.ambient_dim - f.dim)
    return sorted(seen.values(), key=lambda fl: (fl.codim, sorted(fl.hyperplanes)))


def random_rational_point(rng: random.Random, n: int, scale: int = 20, den: int = 7) -> tuple[Fraction, ...]:
    return tuple(Fraction(rng.randint(-scale * den, scale * den), den) for _ in range(n))


# ---------------------------------------------------------------- standard arrangements


def boolean(n: int) -> Arrangement:
    return Arrangement.build(n, [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)])


def concurrent_lines(m: int) -> Arrangement:
    """m distinct lines through the origin of R^2 (normals (1, k), k = 0..m-1)."""
    return Arrangement.build(2, [(1, k) for k in range(m)])


def three_lines() -> Arrangement:
    return Arrangement.build(2, [(1, 0), (0, 1), (1, -1)])


def points_on_line(points: Sequence) -> Arrangement:
    return Arrangement.build(1, [((1,), p) for p in points], mode="affine")
