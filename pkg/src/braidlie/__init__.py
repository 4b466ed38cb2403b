"""Exact computation with Lie algebras and Hopf algebras over G-graded modules."""

from .cyclotomic import CycScalar, format_scalar, parse_scalar, root_of_unity
from .grading import AbelianGroup, Bicharacter, ZetaFamily, enumerate_zeta_families, rho
from .algebra import GeneratorTable, GradedPoly, PresentedAlgebra, TensorSquarePoly, quotient_present
from .lie import LiePresentation, bracket_eval, lie_validate
from .hopf import HopfInstance, biproduct_build, enveloping_build, hopf_axioms_check, primitives_solve
from .model import load_model

__all__ = [
    "AbelianGroup",
    "Bicharacter",
    "CycScalar",
    "GeneratorTable",
    "GradedPoly",
    "HopfInstance",
    "LiePresentation",
    "PresentedAlgebra",
    "TensorSquarePoly",
    "ZetaFamily",
    "biproduct_build",
    "bracket_eval",
    "enumerate_zeta_families",
    "enveloping_build",
    "format_scalar",
    "hopf_axioms_check",
    "lie_validate",
    "load_model",
    "parse_scalar",
    "primitives_solve",
    "quotient_present",
    "rho",
    "root_of_unity",
]

__version__ = "0.1.0"
