"""Forcing scenarios: a chart, named transverse paths, an optional map and given facts.

Also builds the bundled scenarios shipped as JSON in ``forcing_lab/data``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DeductionError, ScenarioError
from .chart import FoliationChart, TransversePath
from .deduction import AdmissibilityFact, FactDatabase
from .geometry import ProperLine, Rect
from .maps import PlanarMap
from .predicates import Verdict, is_admissible_geometric


def _path_from_dict(d: dict, chart: FoliationChart, where) -> TransversePath:
    """Crossings may omit ``t``; it is then located on the path geometrically."""
    V = np.asarray(d["vertices"], dtype=float)
    probe = TransversePath(V, (), d["start_leaf"], d["end_leaf"])
    cross = []
    for k, c in enumerate(d.get("crossings", [])):
        if "t" in c:
            cross.append((c["leaf"], float(c["t"])))
            continue
        hits = chart[c["leaf"]].polyline_intersections(V)
        if len(hits) != 1:
            raise ScenarioError(f"path crosses leaf {c['leaf']!r} {len(hits)} times; give 't' explicitly",
                                (*where, "crossings", k))
        cross.append((c["leaf"], probe.parameter_of(hits[0])))
    return TransversePath(V, tuple(cross), d["start_leaf"], d["end_leaf"], d.get("name", ""))


@dataclass
class ForcingScenario:
    chart: FoliationChart
    paths: dict[str, TransversePath]
    f: PlanarMap | None = None
    facts: list[dict] = field(default_factory=list)
    check_box: Rect | None = None
    certify: dict | None = None
    name: str = ""

    @classmethod
    def from_dict(cls, d: dict) -> "ForcingScenario":
        chart = FoliationChart.from_dict(d)
        paths = {}
        for k, p in enumerate(d.get("paths", [])):
            name = p.get("name") or f"path{k}"
            if name in paths:
                raise ScenarioError(f"duplicate path name {name!r}", ("paths", k, "name"))
            try:
                paths[name] = chart.validate_path(_path_from_dict({**p, "name": name}, chart, ("paths", k)))
            except ScenarioError:
                raise
            except Exception as e:
                raise ScenarioError(str(e), ("paths", k)) from e
        f = PlanarMap.from_dict(d["map"]) if d.get("map") is not None else None
        for k, fact in enumerate(d.get("facts", [])):
            if fact["path"] not in paths:
                raise ScenarioError(f"fact cites unknown path {fact['path']!r}", ("facts", k, "path"))
        cb = Rect(*d["check_box"]) if d.get("check_box") else None
        return cls(chart, paths, f, list(d.get("facts", [])), cb, d.get("certify"), d.get("name", ""))

    def to_dict(self) -> dict:
        d = {"kind": "forcing"}
        if self.name:
            d["name"] = self.name
        d.update(self.chart.to_dict())
        d["paths"] = [p.to_dict() for p in self.paths.values()]
        if self.f is not None:
            d["map"] = self.f.to_dict()
        if self.check_box is not None:
            d["check_box"] = list(self.check_box.as_tuple())
        d["facts"] = list(self.facts)
        if self.certify is not None:
            d["certify"] = self.certify
        return d

    def database(self) -> FactDatabase:
        """Fact database seeded with the scenario facts.

        Facts marked "geometric-check" are re-verified against the map and
        rejected with :class:`DeductionError` unless the check says true.
        """
        db = FactDatabase(self.chart)
        for fact in self.facts:
            path = self.paths[fact["path"]]
            prov = fact.get("provenance", "given")
            fid = fact.get("id", fact["path"])
            deck = tuple(fact.get("deck", (0, 0)))
            if prov == "geometric-check":
                if self.f is None:
                    raise DeductionError(f"fact {fid!r} needs a map for its geometric check")
                chk = is_admissible_geometric(path, int(fact["order"]), self.f, self.chart)
                if chk.verdict is not Verdict.TRUE:
                    raise DeductionError(f"fact {fid!r}: geometric check is {chk.verdict.value}")
            db.add(AdmissibilityFact(fid, path, int(fact["order"]), prov, (), deck))
        return db


# -- bundled scenarios ------------------------------------------------------------

def _wedge_left(y: float, label: str) -> ProperLine:
    """Tip at (-1, y), opening to the left; the right side is the outside."""
    return ProperLine([(-7, y - 1), (-6, y - 1), (-1, y), (-6, y + 1), (-7, y + 1)], label)


def _wedge_right(y: float, label: str) -> ProperLine:
    """Tip at (1, y), opening to the right; the right side is the inside."""
    return ProperLine([(7, y - 1), (6, y - 1), (1, y), (6, y + 1), (7, y + 1)], label)


def _central_leaf() -> ProperLine:
    return ProperLine([(0, -1), (0, 1)], "phi")


def above_chart() -> FoliationChart:
    """phi = {x = 0} upward with two left wedges; A2 sits above A1 relative to phi."""
    return FoliationChart([_central_leaf(), _wedge_left(-1.5, "A1"), _wedge_left(1.5, "A2")])


def crossing_chart() -> FoliationChart:
    return FoliationChart([_central_leaf(), _wedge_left(-1.5, "A1"), _wedge_left(1.5, "A2"),
                           _wedge_right(1.5, "B1"), _wedge_right(-1.5, "B2")])


def _crossing_paths(chart: FoliationChart) -> dict[str, TransversePath]:
    t = math.hypot(1.0, 1.5)
    g1 = TransversePath([(-1, -1.5), (0, 0), (1, 1.5)], (("phi", t),), "A1", "B1", "gamma1")
    g2 = TransversePath([(-1, 1.5), (0, 0), (1, -1.5)], (("phi", t),), "A2", "B2", "gamma2")
    return {"gamma1": chart.validate_path(g1), "gamma2": chart.validate_path(g2)}


def above_scenario() -> ForcingScenario:
    return ForcingScenario(above_chart(), {}, name="above")


def crossing_scenario() -> ForcingScenario:
    """Two paths crossing phi at the origin, given as admissible of orders 2 and 3."""
    chart = crossing_chart()
    facts = [{"id": "gamma1", "path": "gamma1", "order": 2, "provenance": "given"},
             {"id": "gamma2", "path": "gamma2", "order": 3, "provenance": "given"}]
    return ForcingScenario(chart, _crossing_paths(chart), facts=facts, name="crossing")


def brouwer_model_map() -> PlanarMap:
    """(x, y) -> (x + 2, y + v(x)), with v a pair of opposite bumps on [-2.5, -0.5].

    The map is fixed-point free and every leaf of the crossing chart is a
    Brouwer line for it inside the check box; the rays of the wedges are not
    (a horizontal ray is carried into itself).
    """
    return PlanarMap.from_dict([
        {"type": "vshear", "profile": "bump", "amplitude": 3.0, "scale": 0.5, "center": -1.0},
        {"type": "vshear", "profile": "bump", "amplitude": -3.0, "scale": 0.5, "center": -2.0},
        {"type": "translation", "vector": [2.0, 0.0]},
    ])


def brouwer_model_scenario() -> ForcingScenario:
    chart = crossing_chart()
    facts = [{"id": "gamma1", "path": "gamma1", "order": 2, "provenance": "geometric-check"},
             {"id": "gamma2", "path": "gamma2", "order": 3, "provenance": "geometric-check"}]
    return ForcingScenario(chart, _crossing_paths(chart), brouwer_model_map(), facts,
                           check_box=Rect(-5.5, 5.5, -3.5, 3.5), name="brouwer-model")


def horseshoe_scenario() -> ForcingScenario:
    """Horizontal leaves psi + k(0, 2) oriented towards -x, and a path that meets its own (0, 2)-translate."""
    psi = ProperLine([(1, 0), (-1, 0)], "psi")
    A = ProperLine([(-9, -1.6), (-8, -1.6), (2, -1), (-8, -0.4), (-9, -0.4)], "A")
    B = ProperLine([(-9, 3.6), (-8, 3.6), (0, 3), (-8, 2.4), (-9, 2.4)], "B")
    chart = FoliationChart([psi, A, B])
    chart.translated_leaf("psi", (0, 2))
    V = np.array([(1, -0.94), (3, -0.5), (3, 1.5), (-1, 2.925)])
    d = {"vertices": V.tolist(), "start_leaf": "A", "end_leaf": "B",
         "crossings": [{"leaf": "psi"}, {"leaf": "psi+(0,2)"}]}
    gamma = chart.validate_path(_path_from_dict({**d, "name": "gamma"}, chart, ()))
    return ForcingScenario(chart, {"gamma": gamma}, certify={"path": "gamma", "q": 2, "T": [0, 2]},
                           name="horseshoe")


BUNDLED = {
    "above": above_scenario,
    "crossing": crossing_scenario,
    "brouwer-model": brouwer_model_scenario,
    "horseshoe": horseshoe_scenario,
}
