import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from forcing_lab.rotation import backend, rotation_set_estimate
from forcing_lab.rotation.lift import HShear, TorusLift, Translation, VShear

compiled = pytest.mark.skipif("compiled" not in backend.BACKENDS, reason="compiled kernel not built")

LIFT = TorusLift((Translation((0.3, -1.7)), HShear("sine", 0.4), VShear("raised-cosine", -0.6)))


def test_fallback_always_present():
    assert "python" in backend.BACKENDS
    assert backend.get("python") is backend.BACKENDS["python"]
    with pytest.raises(ValueError):
        backend.get("fortran")


def test_pure_switch_selects_fallback():
    env = dict(os.environ, FORCING_LAB_PURE="1")
    out = subprocess.run([sys.executable, "-c", "from forcing_lab.rotation import backend; print(backend.NAME)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@compiled
@given(st.lists(st.tuples(st.floats(-5, 5), st.floats(-5, 5)), min_size=1, max_size=50), st.integers(1, 5))
def test_iterate_agrees(zs, n):
    Z = np.array(zs)
    a = LIFT(Z, n, "python")
    b = LIFT(Z, n, "compiled")
    assert np.allclose(a, b, atol=1e-11, rtol=0)


@compiled
@given(st.lists(st.tuples(st.integers(-20, 20), st.integers(-20, 20)), min_size=1, max_size=60))
def test_hull_agrees(pts):
    P = np.array(sorted(set(pts)), dtype=float)
    assert list(backend.BACKENDS["python"].hull_sorted(P)) == list(backend.BACKENDS["compiled"].hull_sorted(P))


@compiled
def test_rotation_set_agrees():
    a = rotation_set_estimate(LIFT, 16, 4, 12, kernel="python")
    b = rotation_set_estimate(LIFT, 16, 4, 12, kernel="compiled")
    assert a.vertices.shape == b.vertices.shape
    assert np.allclose(a.vertices, b.vertices, atol=1e-10)
