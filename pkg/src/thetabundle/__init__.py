"""Exact computations with finite theta groups, their pairings and representations."""

from .exactnum import Cyclotomic, RootOfUnity
from .fingroup import DualElement, FiniteAbelianGroup, GroupElement, smith_normal_form
from .pairing import AlternatingPairing, homogeneous_index, mumford_normal_form, radical

__all__ = [
    "AlternatingPairing",
    "Cyclotomic",
    "DualElement",
    "FiniteAbelianGroup",
    "GroupElement",
    "RootOfUnity",
    "homogeneous_index",
    "mumford_normal_form",
    "radical",
    "smith_normal_form",
]
