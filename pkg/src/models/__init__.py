"""Data models for root data, weight modules, cohomology classes and polytopes."""

from .vector import RationalVector, FRAME_T, FRAME_DUAL
from .root_datum import Factor, RootDatum, WeylElement
from .weighted_module import WeightedModule, GradedPieces
from .group_setup import GroupSetup, AdmissibleElement
from .cohomology import CohomologyClass
from .polytope import (
    RessayrePairRecord,
    Inequality,
    LinearConstraint,
    MembershipResult,
    PolytopeDescription,
)
from .samples import SpectraSample, FlowState
from .run_config import RunConfig

__all__ = [
    'RationalVector',
    'FRAME_T',
    'FRAME_DUAL',
    'Factor',
    'RootDatum',
    'WeylElement',
    'WeightedModule',
    'GradedPieces',
    'GroupSetup',
    'AdmissibleElement',
    'CohomologyClass',
    'RessayrePairRecord',
    'Inequality',
    'LinearConstraint',
    'MembershipResult',
    'PolytopeDescription',
    'SpectraSample',
    'FlowState',
    'RunConfig',
]
