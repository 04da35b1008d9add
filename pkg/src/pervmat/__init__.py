"""Exact checks for matrix diagrams on real hyperplane arrangements."""

from .arrangement import Arrangement, Face, FacePoset, enumerate_faces, flats, hyperplanes_containing, tits_product
from .cousin import build_cousin, compact_cohomology, constructibility_report, perversity_report
from .diagram import DiagramMorphism, MatrixDiagram, cokernel, dualize, extract_single_indexed, kernel, validate
from .dirac import DiracDiagram, to_dirac, validate_dirac
from .fan import FanSheaf, build_orientation, costalk_complex, interval_sheaf
from .linalg import ChainComplex, FieldSpec, Matrix
from .strata import ProductCell, ProductIndex, complex_stratum_key, s1_classes, tau

__all__ = [
    "Arrangement",
    "ChainComplex",
    "DiagramMorphism",
    "DiracDiagram",
    "Face",
    "FacePoset",
    "FanSheaf",
    "FieldSpec",
    "Matrix",
    "MatrixDiagram",
    "ProductCell",
    "ProductIndex",
    "build_cousin",
    "build_orientation",
    "cokernel",
    "compact_cohomology",
    "complex_stratum_key",
    "constructibility_report",
    "costalk_complex",
    "dualize",
    "enumerate_faces",
    "extract_single_indexed",
    "flats",
    "hyperplanes_containing",
    "interval_sheaf",
    "kernel",
    "perversity_report",
    "s1_classes",
    "tau",
    "tits_product",
    "to_dirac",
    "validate",
    "validate_dirac",
]
