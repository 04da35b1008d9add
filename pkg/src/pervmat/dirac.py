"""Diagrams for the line with one hyperplane: the 3x3 case and Dirac data.

Faces of the line are ``-``, ``0``, ``+``.  A Dirac diagram consists of
spaces ``E_-``, ``E_0``, ``E_+`` with maps ``delta_pm: E_pm -> E_0`` and
``gamma_pm: E_0 -> E_pm`` such that ``gamma_pm delta_pm = Id`` and
``gamma_mp delta_pm`` is invertible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arrangement import ArrangementError
from .diagram import DiagramMorphism, MatrixDiagram, validate
from .linalg import QQ, FieldSpec, Matrix, ShapeError
from .strata import ProductIndex


@dataclass(frozen=True)
class DiracDiagram:
    delta_minus: Matrix  # E_- -> E_0
    delta_plus: Matrix  # E_+ -> E_0
    gamma_minus: Matrix  # E_0 -> E_-
    gamma_plus: Matrix  # E_0 -> E_+

    def __post_init__(self):
        e0 = self.delta_minus.rows
        problems = []
        if self.delta_plus.rows != e0 or self.gamma_minus.cols != e0 or self.gamma_plus.cols != e0:
            problems.append("maps disagree on dim E_0")
        if self.gamma_minus.rows != self.delta_minus.cols:
            problems.append("gamma_minus and delta_minus disagree on dim E_-")
        if self.gamma_plus.rows != self.delta_plus.cols:
            problems.append("gamma_plus and delta_plus disagree on dim E_+")
        if problems:
            raise ShapeError("; ".join(problems))

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.delta_minus.cols, self.delta_minus.rows, self.delta_plus.cols)

    @property
    def field(self) -> FieldSpec:
        return self.delta_minus.field

    def to_json(self) -> dict:
        return {
            "dims": {"minus": self.dims[0], "zero": self.dims[1], "plus": self.dims[2]},
            "delta_minus": self.delta_minus.to_json(),
            "delta_plus": self.delta_plus.to_json(),
            "gamma_minus": self.gamma_minus.to_json(),
            "gamma_plus": self.gamma_plus.to_json(),
        }


DIRAC_CONDITIONS = (
    "gamma_minus*delta_minus = Id",
    "gamma_plus*delta_plus = Id",
    "gamma_minus*delta_plus invertible",
    "gamma_plus*delta_minus invertible",
)


def validate_dirac(dd: DiracDiagram) -> dict[str, bool]:
    """The four defining conditions, by name."""
    em, _, ep = dd.dims
    return {
        DIRAC_CONDITIONS[0]: dd.gamma_minus @ dd.delta_minus == Matrix.identity(em, dd.field),
        DIRAC_CONDITIONS[1]: dd.gamma_plus @ dd.delta_plus == Matrix.identity(ep, dd.field),
        DIRAC_CONDITIONS[2]: (dd.gamma_minus @ dd.delta_plus).is_invertible(),
        DIRAC_CONDITIONS[3]: (dd.gamma_plus @ dd.delta_minus).is_invertible(),
    }


def _line_faces(index: ProductIndex):
    arr = index.arrangement
    if not (arr.is_central and arr.ambient_dim == 1 and arr.size == 1):
        raise ArrangementError("Dirac diagrams need the line with a single hyperplane")
    p = index.real
    return p["-"], p["0"], p["+"]


def to_dirac(d: MatrixDiagram) -> DiracDiagram:
    """``delta_pm`` is the middle-row map into ``E[0,0]``; ``gamma_-`` goes
    from ``E[0,0]`` along ``+`` and back through the ``-`` row by the rim
    inverses, and ``gamma_+`` symmetrically."""
    m, z, p = _line_faces(d.index)
    try:
        gamma_minus = d.dp(m, z, p).inverse() @ d.ds(m, z, p).inverse() @ d.dp(z, z, p)
        gamma_plus = d.dp(p, z, m).inverse() @ d.ds(p, z, m).inverse() @ d.dp(z, z, m)
    except (ZeroDivisionError, ShapeError) as e:
        raise ArrangementError(f"rim map is not invertible ({e}); validate the diagram first") from None
    return DiracDiagram(d.ds(m, z, z), d.ds(p, z, z), gamma_minus, gamma_plus)


def dirac_preimage(dd: DiracDiagram, index: ProductIndex) -> MatrixDiagram:
    """A 3x3 matrix diagram whose Dirac data is ``dd``.

    Spaces along the ``-`` row, the ``-|+`` corner and ``E[0,+]`` are copies
    of ``E_-``; symmetrically for ``+``; the centre is ``E_0``.  Rim maps are
    identities except ``dsecond(+->0|+) = gamma_- delta_+`` and
    ``dsecond(-->0|-) = gamma_+ delta_-``.  The result is validated and its
    Dirac data compared against ``dd`` before returning.
    """
    m, z, p = _line_faces(index)
    fld = dd.field
    em, e0, ep = dd.dims
    dims = {(m, z): em, (m, p): em, (m, m): em, (z, p): em, (p, z): ep, (p, p): ep, (p, m): ep, (z, m): ep, (z, z): e0}
    dims = {k: v for k, v in dims.items() if v}
    i_m, i_p = Matrix.identity(em, fld), Matrix.identity(ep, fld)
    dprime = {
        (m, z, p): i_m,
        (m, z, m): i_m,
        (p, z, p): i_p,
        (p, z, m): i_p,
        (z, z, p): dd.gamma_minus,
        (z, z, m): dd.gamma_plus,
    }
    dsecond = {
        (m, z, z): dd.delta_minus,
        (p, z, z): dd.delta_plus,
        (m, z, p): i_m,
        (p, z, p): dd.gamma_minus @ dd.delta_plus,
        (p, z, m): i_p,
        (m, z, m): dd.gamma_plus @ dd.delta_minus,
    }
    d = MatrixDiagram(index, dims, dprime, dsecond, fld)
    if not validate(d).ok:
        raise ArrangementError("Dirac data does not satisfy its axioms; no matrix diagram produced")
    back = to_dirac(d)
    if back != dd:
        raise ArrangementError("round trip through the matrix diagram changed the Dirac data")
    return d


def dirac_morphism(f: DiagramMorphism) -> tuple[tuple[Matrix, Matrix, Matrix], list[str]]:
    """Components ``(f_-, f_0, f_+)`` on Dirac data and the relations they break."""
    m, z, p = _line_faces(f.source.index)
    s, t = to_dirac(f.source), to_dirac(f.target)
    fm, f0, fp = f.at(m, z), f.at(z, z), f.at(p, z)
    bad = []
    if f0 @ s.delta_minus != t.delta_minus @ fm:
        bad.append("delta_minus")
    if f0 @ s.delta_plus != t.delta_plus @ fp:
        bad.append("delta_plus")
    if fm @ s.gamma_minus != t.gamma_minus @ f0:
        bad.append("gamma_minus")
    if fp @ s.gamma_plus != t.gamma_plus @ f0:
        bad.append("gamma_plus")
    return (fm, f0, fp), bad


@dataclass(frozen=True)
class PhiPsiQuiver:
    """Maps ``a: Phi -> Psi`` and ``b: Psi -> Phi``; valid iff ``Id - ab`` is invertible on Psi."""

    a: Matrix
    b: Matrix

    def __post_init__(self):
        if self.a.rows != self.b.cols or self.a.cols != self.b.rows:
            raise ShapeError("a and b are not opposite maps between the same two spaces")

    @property
    def is_valid(self) -> bool:
        n = self.a.rows
        return (Matrix.identity(n, self.a.field) - self.a @ self.b).is_invertible()


def dirac_from_rows(delta_minus, delta_plus, gamma_minus, gamma_plus, dims: tuple[int, int, int], fld: FieldSpec = QQ) -> DiracDiagram:
    em, e0, ep = dims
    return DiracDiagram(
        Matrix.from_rows(delta_minus, fld, em) if delta_minus else Matrix.zeros(e0, em, fld),
        Matrix.from_rows(delta_plus, fld, ep) if delta_plus else Matrix.zeros(e0, ep, fld),
        Matrix.from_rows(gamma_minus, fld, e0) if gamma_minus else Matrix.zeros(em, e0, fld),
        Matrix.from_rows(gamma_plus, fld, e0) if gamma_plus else Matrix.zeros(ep, e0, fld),
    )
