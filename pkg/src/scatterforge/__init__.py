"""Scattered subspaces of F_{q^m}^3, their linear sets and minimal rank-metric codes."""

from .errors import BudgetExceeded, InvariantBreach, PreconditionError
from .field import FieldElement, FieldParams, build_tower, frobenius, norm, trace
from .geometry import FqSubspace, ProjectiveSubspace, WeightSpectrum
from .linearized import GSequence, LinearizedPolynomial, ProjectivePolynomial
from .construction import ConstructionParams, CriteriaReport, build_U_sigma, check_main_theorem
from .codes import RankCode, RankWeightDistribution

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded", "InvariantBreach", "PreconditionError",
    "FieldElement", "FieldParams", "build_tower", "frobenius", "norm", "trace",
    "FqSubspace", "ProjectiveSubspace", "WeightSpectrum",
    "GSequence", "LinearizedPolynomial", "ProjectivePolynomial",
    "ConstructionParams", "CriteriaReport", "build_U_sigma", "check_main_theorem",
    "RankCode", "RankWeightDistribution",
]
