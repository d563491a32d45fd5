"""Admissibility facts, the forcing step on transverse intersections, and horseshoe certificates."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import InputError
from .chart import FoliationChart, TransversePath, splice, translated_label
from .geometry import Rect
from .maps import PlanarMap
from .predicates import TransverseIntersection, Verdict, find_transverse_intersection, is_admissible_geometric

_MEET_TOL = 1e-9


@dataclass(frozen=True)
class DisjunctionRecord:
    """Either every path in ``paths`` is admissible of order ``max_order``,
    or at least one of them is admissible of order ``min_order``. Kept unresolved."""

    id: str
    paths: tuple[str, ...]
    max_order: int
    min_order: int

    def to_dict(self) -> dict:
        return {"id": self.id,
                "either": {"all_of": list(self.paths), "order": self.max_order},
                "or": {"any_of": list(self.paths), "order": self.min_order}}


@dataclass(frozen=True)
class AdmissibilityFact:
    id: str
    path: TransversePath
    order: int
    provenance: str = "given"
    parents: tuple[str, ...] = ()
    deck: tuple[int, int] = (0, 0)
    disjunction: DisjunctionRecord | None = field(default=None, compare=False)
    intersection: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 1:
            raise InputError(f"fact {self.id!r}: order must be an integer >= 1")
        ok = self.provenance in ("given", "geometric-check") or (
            self.provenance.startswith("forcing-step(") and self.provenance.endswith(")"))
        if not ok:
            raise InputError(f"fact {self.id!r}: unknown provenance {self.provenance!r}")

    @property
    def key(self):
        """Identity used for de-duplication: crossing record plus order."""
        return self.path.leaf_sequence, self.order, self.deck

    def to_dict(self) -> dict:
        d = {"id": self.id, "order": self.order, "provenance": self.provenance,
             "parents": list(self.parents), "deck": list(self.deck), "path": self.path.to_dict()}
        if self.disjunction is not None:
            d["disjunction"] = self.disjunction.id
        if self.intersection is not None:
            d["intersection"] = self.intersection
        return d


def _same_record(a: TransversePath, b: TransversePath) -> bool:
    return a.leaf_sequence == b.leaf_sequence


def forcing_step(F1: AdmissibilityFact, F2: AdmissibilityFact, X: TransverseIntersection) -> list[AdmissibilityFact]:
    """The two splice concatenations at order n1 + n2, sharing one disjunction record.

    ``X`` must be a transverse intersection of the paths of ``F1`` and
    ``F2`` (possibly rerouted near the crossing, but with the same crossing
    records).
    """
    if not (_same_record(X.gamma1, F1.path) and _same_record(X.gamma2, F2.path)):
        raise InputError("intersection data does not belong to the two facts")
    if np.hypot(*(X.gamma1.point_at(X.t1) - X.gamma2.point_at(X.t2))) > _MEET_TOL:
        raise InputError("gamma1(t1) and gamma2(t2) differ")
    for g, t in ((X.gamma1, X.t1), (X.gamma2, X.t2)):
        if not any(l == X.leaf and abs(s - t) <= _MEET_TOL for l, s in g.crossings):
            raise InputError(f"leaf {X.leaf!r} is not crossed at t={t}")
    if F1.deck != F2.deck:
        raise InputError("facts in different deck frames")
    n1, n2 = F1.order, F2.order
    prov = f"forcing-step({F1.id},{F2.id})"
    base = f"{F1.id}*{F2.id}"
    ids = (f"{base}/1", f"{base}/2")
    disj = DisjunctionRecord(f"{base}/or", ids, max(n1, n2), min(n1, n2))
    # the crossing at (t1, t2) becomes an interior crossing of the common leaf
    p12 = splice(X.gamma1, X.t1, X.gamma2, X.t2, X.leaf, ids[0])
    p21 = splice(X.gamma2, X.t2, X.gamma1, X.t1, X.leaf, ids[1])
    info = {"leaf": X.leaf, "t1": X.t1, "t2": X.t2, "sign": X.sign}
    return [AdmissibilityFact(ids[0], p12, n1 + n2, prov, (F1.id, F2.id), F1.deck, disj, info),
            AdmissibilityFact(ids[1], p21, n1 + n2, prov, (F1.id, F2.id), F1.deck, disj, info)]


# -- horseshoes -------------------------------------------------------------------

@dataclass(frozen=True)
class HorseshoeCertificate:
    """Records that gamma and its deck translate intersect transversally.

    The record is the input a horseshoe argument needs, together with the
    entropy bound log(4)/(3q) it yields. The horseshoe itself, and any
    rotational property of it, is not constructed or checked here.
    """

    q: int
    deck: tuple[int, int]
    bound: float
    intersection: TransverseIntersection

    def to_dict(self) -> dict:
        return {"q": self.q, "deck": list(self.deck), "entropy_lower_bound": self.bound,
                "bound_formula": "log(4)/(3q)", "intersection": self.intersection.to_dict()}


def entropy_bound(q: int) -> float:
    return math.log(4) / (3 * q)


def translate_path(gamma: TransversePath, T, chart: FoliationChart) -> TransversePath:
    """gamma + T, with every leaf in its record replaced by (and materialised as) its translate."""
    T = (int(T[0]), int(T[1]))
    for label in set(gamma.leaf_sequence):
        chart.translated_leaf(label, T)
    return chart.validate_path(gamma.translated(T, lambda l: translated_label(l, T) if T != (0, 0) else l))


def horseshoe_certificate(gamma: TransversePath, q: int, T, chart: FoliationChart,
                          box: Rect | None = None) -> HorseshoeCertificate | None:
    if int(q) != q or q < 2:
        raise InputError("q must be an integer >= 2")
    if len(T) != 2 or any(int(v) != v for v in T):
        raise InputError("the deck translation must be an integer vector")
    T = (int(T[0]), int(T[1]))
    if T == (0, 0):
        raise InputError("the deck translation must be nonzero")
    Tg = translate_path(gamma, T, chart)
    X = find_transverse_intersection(gamma, Tg, chart, box)
    if X is None:
        return None
    return HorseshoeCertificate(int(q), T, entropy_bound(int(q)), X)


# -- the fact database --------------------------------------------------------------

class FactDatabase:
    """Facts in insertion order; closure under the forcing step is deterministic.

    Two facts count as the same when their crossing records, orders and deck
    vectors agree. This stands in for equivalence of transverse paths and
    only sees materialised leaves.
    """

    def __init__(self, chart: FoliationChart):
        self.chart = chart
        self.facts: dict[str, AdmissibilityFact] = {}
        self._keys: set = set()
        self._done: set[tuple[str, str]] = set()

    def __len__(self):
        return len(self.facts)

    def __getitem__(self, fid: str) -> AdmissibilityFact:
        return self.facts[fid]

    def add(self, fact: AdmissibilityFact) -> bool:
        if fact.id in self.facts:
            raise InputError(f"duplicate fact id {fact.id!r}")
        for p in fact.parents:
            if p not in self.facts:
                raise InputError(f"fact {fact.id!r} cites unknown parent {p!r}")
        if fact.key in self._keys:
            return False
        self.chart.validate_path(fact.path)
        self.facts[fact.id] = fact
        self._keys.add(fact.key)
        return True

    def add_given(self, fid: str, path: TransversePath, order: int, deck=(0, 0)) -> AdmissibilityFact:
        fact = AdmissibilityFact(fid, path, int(order), "given", (), tuple(int(v) for v in deck))
        self.add(fact)
        return fact

    def add_checked(self, fid: str, path: TransversePath, order: int, f: PlanarMap, box: Rect | None = None):
        """Add a fact only if the leaf-image test confirms it; returns the check either way."""
        check = is_admissible_geometric(path, order, f, self.chart, box)
        if check.verdict is Verdict.TRUE:
            self.add(AdmissibilityFact(fid, path, int(order), "geometric-check"))
        return check

    @property
    def disjunctions(self) -> list[DisjunctionRecord]:
        seen, out = set(), []
        for fact in self.facts.values():
            d = fact.disjunction
            if d is not None and d.id not in seen:
                seen.add(d.id)
                out.append(d)
        return out

    def derive(self, budget: int, box: Rect | None = None) -> list[AdmissibilityFact]:
        """Apply the forcing step to unordered pairs of facts until no pair is new or ``budget`` facts exist."""
        new = []
        progress = True
        while progress and len(self.facts) < budget:
            progress = False
            ids = list(self.facts)
            for i, a in enumerate(ids):
                for b in ids[i + 1:]:
                    if (a, b) in self._done or len(self.facts) >= budget:
                        continue
                    self._done.add((a, b))
                    F1, F2 = self.facts[a], self.facts[b]
                    if F1.deck != F2.deck:
                        continue
                    X = find_transverse_intersection(F1.path, F2.path, self.chart, box)
                    if X is None:
                        continue
                    for fact in forcing_step(F1, F2, X):
                        if len(self.facts) < budget and self.add(fact):
                            new.append(fact)
                            progress = True
        return new

    def to_dict(self) -> dict:
        return {"facts": [f.to_dict() for f in self.facts.values()],
                "disjunctions": [d.to_dict() for d in self.disjunctions]}
