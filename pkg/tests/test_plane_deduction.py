import importlib.util
import json
import math
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import DATA
from forcing_lab import io
from forcing_lab.errors import DeductionError, InputError
from forcing_lab.plane import (
    AdmissibilityFact,
    FoliationChart,
    TransversePath,
    Verdict,
    entropy_bound,
    find_transverse_intersection,
    forcing_step,
    horseshoe_certificate,
    is_admissible_geometric,
    translate_path,
)
from forcing_lab.plane.scenario import BUNDLED, ForcingScenario, brouwer_model_scenario, crossing_scenario, horseshoe_scenario


@pytest.fixture(scope="module")
def crossing():
    sc = crossing_scenario()
    g1, g2 = sc.paths["gamma1"], sc.paths["gamma2"]
    return sc, g1, g2, find_transverse_intersection(g1, g2, sc.chart)


@pytest.fixture(scope="module")
def horseshoe():
    sc = horseshoe_scenario()
    g = sc.paths["gamma"]
    return sc, g, horseshoe_certificate(g, 2, (0, 2), sc.chart)


# -- the forcing step -----------------------------------------------------------------

@pytest.mark.parametrize("n1,n2", [(1, 1), (2, 3)])
def test_forcing_step_orders(crossing, n1, n2):
    sc, g1, g2, X = crossing
    out = forcing_step(AdmissibilityFact("a", g1, n1), AdmissibilityFact("b", g2, n2), X)
    assert [f.order for f in out] == [n1 + n2, n1 + n2]
    assert [f.path.leaf_sequence for f in out] == [("A1", "phi", "B2"), ("A2", "phi", "B1")]
    assert all(f.provenance == "forcing-step(a,b)" and f.parents == ("a", "b") for f in out)
    d = out[0].disjunction
    assert d is out[1].disjunction
    assert d.to_dict() == {"id": "a*b/or",
                           "either": {"all_of": ["a*b/1", "a*b/2"], "order": max(n1, n2)},
                           "or": {"any_of": ["a*b/1", "a*b/2"], "order": min(n1, n2)}}


def test_forcing_step_splices_at_the_crossing(crossing):
    _, g1, g2, X = crossing
    p12, p21 = (f.path for f in forcing_step(AdmissibilityFact("a", g1, 2), AdmissibilityFact("b", g2, 3), X))
    assert p12.crossings == (("phi", X.t1),)
    assert p21.crossings == (("phi", X.t2),)
    assert p12.point_at(0) == pytest.approx(g1.point_at(0))
    assert p12.point_at(p12.length) == pytest.approx(g2.point_at(g2.length))


def test_forcing_step_mismatched_data(crossing):
    _, g1, g2, X = crossing
    F1, F2 = AdmissibilityFact("a", g1, 2), AdmissibilityFact("b", g2, 3)
    with pytest.raises(InputError):
        forcing_step(F2, F1, X)
    with pytest.raises(InputError):
        forcing_step(F1, F2, X.__class__(X.leaf, X.t1 + 0.1, X.t2, X.sign, X.gamma1, X.gamma2))
    with pytest.raises(InputError):
        forcing_step(F1, AdmissibilityFact("b", g2, 3, deck=(1, 0)), X)


def test_fact_validation():
    g = crossing_scenario().paths["gamma1"]
    with pytest.raises(InputError):
        AdmissibilityFact("a", g, 0)
    with pytest.raises(InputError):
        AdmissibilityFact("a", g, 1, provenance="rumour")


def test_self_concatenation(horseshoe):
    # gamma meets its deck translate at different parameters of the same trajectory
    sc, g, cert = horseshoe
    X = cert.intersection
    Tg = translate_path(g, (0, 2), sc.chart)
    out = forcing_step(AdmissibilityFact("g", g, 2), AdmissibilityFact("Tg", Tg, 2), X)
    assert X.t1 != X.t2
    assert [f.order for f in out] == [4, 4]
    assert out[0].path.leaf_sequence == ("A", "psi", "psi+(0,2)", "psi+(0,2)+(0,2)", "B+(0,2)")
    assert out[1].path.leaf_sequence == ("A+(0,2)", "psi+(0,2)", "B")


# -- the fact database ---------------------------------------------------------------

def test_derive_crossing():
    sc = crossing_scenario()
    db = sc.database()
    new = db.derive(64)
    assert [f.id for f in new] == ["gamma1*gamma2/1", "gamma1*gamma2/2"]
    assert [d.to_dict()["either"]["order"] for d in db.disjunctions] == [3]
    # the closure is reached: nothing further to derive
    assert db.derive(64) == []


def test_derive_budget():
    db = crossing_scenario().database()
    assert db.derive(3) and len(db) == 3


def test_database_rejects_duplicates_and_orphans():
    sc = crossing_scenario()
    db = sc.database()
    with pytest.raises(InputError):
        db.add_given("gamma1", sc.paths["gamma1"], 4)
    assert not db.add(AdmissibilityFact("copy", sc.paths["gamma1"], 2))
    with pytest.raises(InputError):
        db.add(AdmissibilityFact("child", sc.paths["gamma2"], 7, "forcing-step(x,y)", ("x", "y")))


def test_forcing_soundness_on_brouwer_model():
    sc = brouwer_model_scenario()
    db = sc.database()
    new = db.derive(64)
    assert new and all(f.order == 5 for f in new)
    for fact in new:
        assert is_admissible_geometric(fact.path, fact.order, sc.f, sc.chart).verdict is Verdict.TRUE


def test_geometric_check_provenance_is_enforced():
    d = brouwer_model_scenario().to_dict()
    d["facts"][1]["order"] = 1  # f(A2) does not reach B2 inside the chart box
    with pytest.raises(DeductionError):
        ForcingScenario.from_dict(d).database()


# -- horseshoe certificates ------------------------------------------------------------

def test_certificate_q2(horseshoe):
    _, _, cert = horseshoe
    assert cert is not None and cert.deck == (0, 2)
    assert abs(cert.bound - math.log(4) / 6) <= 1e-15
    assert cert.bound == pytest.approx(0.231049, abs=5e-7)


def test_certificate_q3(horseshoe):
    sc, g, _ = horseshoe
    cert = horseshoe_certificate(g, 3, (0, 2), sc.chart)
    assert cert.bound == pytest.approx(0.154033, abs=5e-7)


def test_certificate_none():
    ch = FoliationChart(model="vertical")
    g = ch.validate_path(TransversePath([(0, 0), (2, 0)], (("x=1", 1.0),), "x=0", "x=2"))
    assert horseshoe_certificate(g, 2, (4, 0), ch) is None


def test_certificate_bad_input(horseshoe):
    sc, g, _ = horseshoe
    for q, T in ((1, (0, 2)), (2, (0, 0)), (2, (0.5, 1))):
        with pytest.raises(InputError):
            horseshoe_certificate(g, q, T, sc.chart)


@settings(max_examples=8)
@given(st.integers(2, 10_000))
def test_certificate_arithmetic(horseshoe, q):
    sc, g, _ = horseshoe
    cert = horseshoe_certificate(g, q, (0, 2), sc.chart)
    assert abs(cert.bound - math.log(4) / (3 * q)) <= 1e-15
    assert abs(entropy_bound(q) - math.log(4) / (3 * q)) <= 1e-15


# -- scenario files ------------------------------------------------------------------

@pytest.mark.parametrize("name", sorted(BUNDLED))
def test_scenario_round_trip(name):
    d = BUNDLED[name]().to_dict()
    io.validate_document(d, name, "forcing")
    assert ForcingScenario.from_dict(json.loads(json.dumps(d))).to_dict() == d


def test_bundled_files_match_builders():
    spec = importlib.util.spec_from_file_location("make_data", Path(__file__).parents[1] / "tools" / "make_data.py")
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    for name, doc in mod.documents().items():
        assert json.loads((DATA / f"{name}.json").read_text()) == json.loads(json.dumps(doc)), name


def test_crossing_parameters_located_from_geometry():
    d = horseshoe_scenario().to_dict()
    for c in d["paths"][0]["crossings"]:
        del c["t"]
    sc = ForcingScenario.from_dict(d)
    assert sc.paths["gamma"].crossings == horseshoe_scenario().paths["gamma"].crossings
