"""Exact dense linear algebra over Q and F_p, and graded chain complexes.

Matrices are small and dense here (stalk dimensions times face counts), so
everything is plain tuples of field elements.  Rationals use
``fractions.Fraction``; prime fields use the tiny ``Fp`` element class so
that the same elimination code runs over both.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, Sequence


class ShapeError(ValueError):
    pass


class ChainComplexError(ValueError):
    def __init__(self, degree: int, message: str = ""):
        self.degree = degree
        super().__init__(message or f"d^2 != 0 at degree {degree}")


# ---------------------------------------------------------------- fields


class Fp:
    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other) -> int:
        if isinstance(other, Fp):
            return other.v
        if isinstance(other, int):
            return other % self.p
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p) % self.p
        return NotImplemented

    def __add__(self, other):
        return Fp(self.v + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return Fp(self.v - self._coerce(other), self.p)

    def __rsub__(self, other):
        return Fp(self._coerce(other) - self.v, self.p)

    def __mul__(self, other):
        return Fp(self.v * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Fp(self.v * pow(self._coerce(other), -1, self.p), self.p)

    def __rtruediv__(self, other):
        return Fp(self._coerce(other) * pow(self.v, -1, self.p), self.p)

    def __neg__(self):
        return Fp(-self.v, self.p)

    def __eq__(self, other):
        if isinstance(other, (Fp, int, Fraction)):
            return self.v == self._coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"Fp({self.v}, {self.p})"


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, an integer string, or an int into a Fraction."""
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"rationals must be strings or integers, got {text!r}")
    s = text.strip().replace("−", "-")
    try:
        if "/" in s:
            num, den = s.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a rational: {text!r}") from None


@dataclass(frozen=True)
class FieldSpec:
    """Either the rationals (``p == 0``) or the prime field F_p."""

    p: int = 0

    def __post_init__(self):
        if self.p and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        t = text.strip()
        if t in ("Q", "QQ"):
            return cls(0)
        if t.startswith("Fp:"):
            try:
                return cls(int(t[3:]))
            except ValueError:
                raise ValueError(f"bad field spec {text!r}") from None
        raise ValueError(f"bad field spec {text!r}; use 'Q' or 'Fp:p'")

    def __str__(self) -> str:
        return "Q" if self.p == 0 else f"Fp:{self.p}"

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    def __call__(self, value):
        if self.p == 0:
            if isinstance(value, Fp):
                raise TypeError("cannot lift F_p element to Q")
            return parse_rational(value)
        if isinstance(value, Fp):
            return Fp(value.v, self.p)
        q = parse_rational(value)
        if q.denominator % self.p == 0:
            raise ValueError(f"{value} has denominator divisible by {self.p}")
        return Fp(q.numerator * pow(q.denominator, -1, self.p), self.p)

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def format(self, x) -> str:
        if self.p:
            return str(x.v)
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


QQ = FieldSpec(0)


# ---------------------------------------------------------------- matrices


@dataclass(frozen=True, eq=False)
class Matrix:
    rows: int
    cols: int
    entries: tuple = field(repr=False)
    field: FieldSpec = QQ

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ShapeError("negative matrix dimension")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ShapeError(f"entries do not match shape {self.rows}x{self.cols}")

    # construction

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], fld: FieldSpec = QQ, cols: int | None = None) -> "Matrix":
        rows = [tuple(fld(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(rows), fld)

    @classmethod
    def zeros(cls, rows: int, cols: int, fld: FieldSpec = QQ) -> "Matrix":
        return _zeros(rows, cols, fld)

    @classmethod
    def identity(cls, n: int, fld: FieldSpec = QQ) -> "Matrix":
        z, o = fld.zero(), fld.one()
        return cls(n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)), fld)

    @classmethod
    def scalar(cls, n: int, c, fld: FieldSpec = QQ) -> "Matrix":
        z, c = fld.zero(), fld(c)
        return cls(n, n, tuple(tuple(c if i == j else z for j in range(n)) for i in range(n)), fld)

    @classmethod
    def hstack(cls, blocks: Sequence["Matrix"], rows: int | None = None, fld: FieldSpec = QQ) -> "Matrix":
        if not blocks:
            return cls.zeros(rows or 0, 0, fld)
        r = blocks[0].rows
        if any(b.rows != r for b in blocks):
            raise ShapeError("hstack row mismatch")
        data = tuple(sum((b.entries[i] for b in blocks), ()) for i in range(r))
        return cls(r, sum(b.cols for b in blocks), data, blocks[0].field)

    @classmethod
    def vstack(cls, blocks: Sequence["Matrix"], cols: int | None = None, fld: FieldSpec = QQ) -> "Matrix":
        if not blocks:
            return cls.zeros(0, cols or 0, fld)
        c = blocks[0].cols
        if any(b.cols != c for b in blocks):
            raise ShapeError("vstack column mismatch")
        return cls(sum(b.rows for b in blocks), c, sum((b.entries for b in blocks), ()), blocks[0].field)

    @classmethod
    def block(cls, row_dims: Sequence[int], col_dims: Sequence[int], blocks: dict, fld: FieldSpec = QQ) -> "Matrix":
        """Assemble from a sparse dict ``{(i, j): Matrix}`` of blocks."""
        z = fld.zero()
        data = [[z] * sum(col_dims) for _ in range(sum(row_dims))]
        roff = [0]
        for d in row_dims:
            roff.append(roff[-1] + d)
        coff = [0]
        for d in col_dims:
            coff.append(coff[-1] + d)
        for (i, j), m in blocks.items():
            if (m.rows, m.cols) != (row_dims[i], col_dims[j]):
                raise ShapeError(f"block {(i, j)} has shape {m.shape}, expected {(row_dims[i], col_dims[j])}")
            for a in range(m.rows):
                row = data[roff[i] + a]
                for b in range(m.cols):
                    row[coff[j] + b] = row[coff[j] + b] + m.entries[a][b]
        return cls(len(data), sum(col_dims), tuple(tuple(r) for r in data), fld)

    # basic structure

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.shape, self.entries))

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(x) for x in r) for r in self.entries)
        return f"Matrix({self.rows}x{self.cols}, [{body}])"

    @property
    def T(self) -> "Matrix":
        return Matrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else tuple(() for _ in range(self.cols)), self.field)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ShapeError(f"cannot compose {self.shape} with {other.shape}")
        z = self.field.zero()
        cols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        data = []
        for r in self.entries:
            nz = [(k, x) for k, x in enumerate(r) if x]
            row = []
            for c in cols:
                s = z
                for k, x in nz:
                    y = c[k]
                    if y:
                        s = s + x * y
                row.append(s)
            data.append(tuple(row))
        return Matrix(self.rows, other.cols, tuple(data), self.field)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ShapeError("shape mismatch in addition")
        return Matrix(self.rows, self.cols, tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)), self.field)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + other * -1

    def __mul__(self, c) -> "Matrix":
        c = self.field(c) if not isinstance(c, (Fraction, Fp)) else c
        return Matrix(self.rows, self.cols, tuple(tuple(x * c for x in r) for r in self.entries), self.field)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(x for r in self.entries for x in r)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix(len(rows), len(cols), tuple(tuple(self.entries[i][j] for j in cols) for i in rows), self.field)

    def with_field(self, fld: FieldSpec) -> "Matrix":
        return Matrix(self.rows, self.cols, tuple(tuple(fld(x) for x in r) for r in self.entries), fld)

    # elimination

    def rref(self) -> tuple[list[list], list[int]]:
        """Reduced row echelon form (as mutable rows) and pivot columns."""
        a = [list(r) for r in self.entries]
        pivots: list[int] = []
        r = 0
        for c in range(self.cols):
            p = next((i for i in range(r, self.rows) if a[i][c]), None)
            if p is None:
                continue
            a[r], a[p] = a[p], a[r]
            inv = 1 / a[r][c]
            a[r] = [x * inv for x in a[r]]
            for i in range(self.rows):
                if i != r and a[i][c]:
                    f = a[i][c]
                    a[i] = [x - f * y for x, y in zip(a[i], a[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return a, pivots

    def rank(self) -> int:
        if self.rows == 0 or self.cols == 0:
            return 0
        if self.field.is_rational:
            return _bareiss_rank(self.entries)
        return len(self.rref()[1])

    def kernel(self) -> "Matrix":
        """Columns form the RREF basis of the null space (shape cols x k).

        The basis vector for free column ``j`` has a 1 in row ``j`` and 0 in
        every other free row, so coordinates in this basis can be read off the
        free positions.
        """
        basis, _ = self.kernel_with_free()
        return basis

    def kernel_with_free(self) -> tuple["Matrix", list[int]]:
        a, pivots = self.rref()
        free = [c for c in range(self.cols) if c not in set(pivots)]
        z, o = self.field.zero(), self.field.one()
        vecs = []
        for f in free:
            v = [z] * self.cols
            v[f] = o
            for i, pc in enumerate(pivots):
                v[pc] = -a[i][f]
            vecs.append(v)
        if not vecs:
            return Matrix.zeros(self.cols, 0, self.field), free
        return Matrix(self.cols, len(vecs), tuple(zip(*vecs)), self.field), free

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise ShapeError("inverse of non-square matrix")
        n = self.rows
        if n == 0:
            return self
        a, pivots = Matrix.hstack([self, Matrix.identity(n, self.field)]).rref()
        if pivots[:n] != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return Matrix(n, n, tuple(tuple(r[n:]) for r in a), self.field)

    def solve(self, rhs: "Matrix") -> "Matrix | None":
        """Some X with ``self @ X == rhs``, or None if inconsistent."""
        if rhs.rows != self.rows:
            raise ShapeError("solve: row mismatch")
        if self.rows == 0:
            return Matrix.zeros(self.cols, rhs.cols, self.field)
        a, pivots = Matrix.hstack([self, rhs]).rref()
        if any(p >= self.cols for p in pivots):
            return None
        z = self.field.zero()
        x = [[z] * rhs.cols for _ in range(self.cols)]
        for i, pc in enumerate(pivots):
            x[pc] = list(a[i][self.cols:])
        return Matrix(self.cols, rhs.cols, tuple(tuple(r) for r in x), self.field)

    def column_space(self) -> "Matrix":
        """Independent columns spanning the image (pivot columns of self)."""
        _, pivots = self.rref()
        return self.submatrix(range(self.rows), pivots)

    def to_json(self) -> list[list[str]]:
        return [[self.field.format(x) for x in r] for r in self.entries]

    @classmethod
    def from_json(cls, data, rows: int, cols: int, fld: FieldSpec = QQ) -> "Matrix":
        if not isinstance(data, list) or len(data) != rows or any(not isinstance(r, list) or len(r) != cols for r in data):
            got = (len(data), len(data[0]) if data and isinstance(data[0], list) else 0) if isinstance(data, list) else None
            raise ShapeError(f"expected a {rows}x{cols} matrix, got shape {got}")
        return cls(rows, cols, tuple(tuple(fld(x) for x in r) for r in data), fld)


@lru_cache(maxsize=4096)
def _zeros(rows: int, cols: int, fld: FieldSpec) -> Matrix:
    z = fld.zero()
    return Matrix(rows, cols, tuple((z,) * cols for _ in range(rows)), fld)


def _bareiss_rank(entries: Iterable[Sequence[Fraction]]) -> int:
    # clear denominators row by row, then fraction-free elimination over Z
    rows = []
    for r in entries:
        d = lcm(*(x.denominator for x in r)) if r else 1
        row = [int(x * d) for x in r]
        if any(row):
            rows.append(row)
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    prev = 1
    for c in range(ncols):
        p = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[rank], rows[p] = rows[p], rows[rank]
        piv = rows[rank]
        pv = piv[c]
        for i in range(rank + 1, len(rows)):
            ri = rows[i]
            f = ri[c]
            if f:
                rows[i] = [(pv * x - f * y) // prev for x, y in zip(ri, piv)]
            else:
                rows[i] = [(pv * x) // prev for x in ri]
        prev = pv
        rank += 1
        if rank == len(rows):
            break
    return rank


def rank(m: Matrix) -> int:
    return m.rank()


def kernel_basis(m: Matrix) -> Matrix:
    return m.kernel()


def is_invertible(m: Matrix) -> bool:
    return m.is_invertible()


def compose(a: Matrix, b: Matrix) -> Matrix:
    """``a @ b``: apply ``b`` first."""
    return a @ b


def transpose(m: Matrix) -> Matrix:
    return m.T


def sign_of_det(m: Matrix) -> int:
    """Sign (+1, -1, or 0) of the determinant of a square rational matrix."""
    if m.rows != m.cols:
        raise ShapeError("determinant of non-square matrix")
    a = [list(r) for r in m.entries]
    n = m.rows
    sgn = 1
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return 0
        if p != c:
            a[c], a[p] = a[p], a[c]
            sgn = -sgn
        if a[c][c] < 0:
            sgn = -sgn
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return sgn


# ---------------------------------------------------------------- complexes


@dataclass(frozen=True)
class ChainComplex:
    """Cochain complex: ``diffs[i]`` maps the degree-i term to degree i+1.

    Degrees outside ``[lo, hi]`` are zero.  Missing differentials are zero.
    """

    lo: int
    dims: tuple[int, ...]
    diffs: dict = field(default_factory=dict, compare=False)
    field: FieldSpec = QQ

    def __post_init__(self):
        for i, d in self.diffs.items():
            if d.shape != (self.dim(i + 1), self.dim(i)):
                raise ShapeError(f"differential at degree {i} has shape {d.shape}, expected {(self.dim(i + 1), self.dim(i))}")

    @property
    def hi(self) -> int:
        return self.lo + len(self.dims) - 1

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def dim(self, i: int) -> int:
        if self.lo <= i <= self.hi:
            return self.dims[i - self.lo]
        return 0

    def d(self, i: int) -> Matrix:
        m = self.diffs.get(i)
        if m is None:
            return Matrix.zeros(self.dim(i + 1), self.dim(i), self.field)
        return m

    def square_defect(self) -> int | None:
        """First degree i with d_{i+1} d_i != 0, or None."""
        for i in self.degrees():
            if self.dim(i) and self.dim(i + 2) and not (self.d(i + 1) @ self.d(i)).is_zero():
                return i
        return None

    def cohomology_dims(self) -> dict[int, int]:
        bad = self.square_defect()
        if bad is not None:
            raise ChainComplexError(bad)
        ranks = {i: self.d(i).rank() for i in range(self.lo - 1, self.hi + 1)}
        return {i: self.dim(i) - ranks[i] - ranks[i - 1] for i in self.degrees()}

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * self.dim(i) for i in self.degrees())


def chain_map_defect(f: dict, src: ChainComplex, dst: ChainComplex) -> int | None:
    """First degree where ``f`` fails to commute with the differentials."""
    for i in range(min(src.lo, dst.lo) - 1, max(src.hi, dst.hi) + 1):
        left = _component(f, i + 1, src, dst) @ src.d(i)
        right = dst.d(i) @ _component(f, i, src, dst)
        if left != right:
            return i
    return None


def _component(f: dict, i: int, src: ChainComplex, dst: ChainComplex) -> Matrix:
    m = f.get(i)
    if m is None:
        return Matrix.zeros(dst.dim(i), src.dim(i), src.field)
    return m


def induced_on_cohomology(f: dict, src: ChainComplex, dst: ChainComplex) -> dict[int, tuple[int, int, int]]:
    """Per degree: ``(dim H(src), dim H(dst), rank of the induced map)``.

    ``f`` must be a chain map; the induced map is an isomorphism in degree i
    iff all three numbers agree.
    """
    out = {}
    for i in range(min(src.lo, dst.lo), max(src.hi, dst.hi) + 1):
        z = src.d(i).kernel()
        b_src = src.d(i - 1).rank()
        b_dst = dst.d(i - 1)
        rb = b_dst.rank()
        h_src = z.cols - b_src
        h_dst = dst.d(i).kernel().cols - rb
        image = _component(f, i, src, dst) @ z
        r = Matrix.hstack([image, b_dst]).rank() - rb if dst.dim(i) else 0
        out[i] = (h_src, h_dst, r)
    return out
