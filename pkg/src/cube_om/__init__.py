"""Exact combinatorics of the oriented matroid Aff(C^n) of the n-cube."""

from .core import MAX_N, SignedSet, orthogonal, reorient
from .errors import CubeError
from .geometry import (
    Rectangle,
    SubcubeDescriptor,
    TripleKind,
    classify_triple,
    eliminate_rectangles,
    enumerate_rectangles,
    generate_subcube,
    recognize_subcube,
    recover_descriptor,
)
from .matroid import Hyperplane, HyperplaneCatalog, affine_rank, classify_hyperplane, closure, enumerate_hyperplanes
from .normalize import Branch, NormalizationResult, normalize, uniqueness_check
from .orientation import Orientation, aff_orientation, family_F, family_R, is_acyclic, radon_signature
from .reconstruct import DeterminacyReport, Status, Verdict, propagate, verify_conjecture

__version__ = "0.1.0"

__all__ = [
    "MAX_N",
    "SignedSet",
    "orthogonal",
    "reorient",
    "CubeError",
    "Rectangle",
    "SubcubeDescriptor",
    "TripleKind",
    "classify_triple",
    "eliminate_rectangles",
    "enumerate_rectangles",
    "generate_subcube",
    "recognize_subcube",
    "recover_descriptor",
    "Hyperplane",
    "HyperplaneCatalog",
    "affine_rank",
    "classify_hyperplane",
    "closure",
    "enumerate_hyperplanes",
    "Branch",
    "NormalizationResult",
    "normalize",
    "uniqueness_check",
    "Orientation",
    "aff_orientation",
    "family_F",
    "family_R",
    "is_acyclic",
    "radon_signature",
    "DeterminacyReport",
    "Status",
    "Verdict",
    "propagate",
    "verify_conjecture",
]
