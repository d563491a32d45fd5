"""Planar forcing: oriented lines, transverse paths, and the deduction calculus."""

from .chart import FoliationChart, TransversePath, splice, translated_label
from .deduction import (
    AdmissibilityFact,
    DisjunctionRecord,
    FactDatabase,
    HorseshoeCertificate,
    entropy_bound,
    forcing_step,
    horseshoe_certificate,
    translate_path,
)
from .geometry import ON_TOL, RIGHT_OF_TRAVEL, SIDE_TOL, ProperLine, Rect, Side
from .maps import PlanarMap
from .predicates import (
    AdmissibilityCheck,
    BrouwerCheck,
    TransverseIntersection,
    Verdict,
    above_witnesses,
    find_transverse_intersection,
    is_above,
    is_admissible_geometric,
    is_brouwer_line,
    leaves_meet_after,
)
from .scenario import BUNDLED, ForcingScenario

__all__ = [
    "AdmissibilityCheck", "AdmissibilityFact", "BUNDLED", "BrouwerCheck", "DisjunctionRecord",
    "FactDatabase", "FoliationChart", "ForcingScenario", "HorseshoeCertificate", "ON_TOL",
    "PlanarMap", "ProperLine", "RIGHT_OF_TRAVEL", "Rect", "SIDE_TOL", "Side", "TransverseIntersection",
    "TransversePath", "Verdict", "above_witnesses", "entropy_bound", "find_transverse_intersection",
    "forcing_step", "horseshoe_certificate", "is_above", "is_admissible_geometric", "is_brouwer_line",
    "leaves_meet_after", "splice", "translate_path", "translated_label",
]
