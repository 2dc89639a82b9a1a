"""Backend selection and compiled/pure-python agreement."""

import json
import os
import subprocess
import sys

import pytest

from nonlocality import kernels

_PROBE = """
import json
from nonlocality import kernels
from nonlocality.polytope import kl_to_local, optimize_kl
from nonlocality.prbox import pr_box_behavior

pr = kl_to_local(pr_box_behavior())
fixed = optimize_kl(gamma=0.8, seed=0)
print(json.dumps({
    "backend": kernels.backend_name(),
    "pr_distance": pr.distance_bits,
    "fixed_gamma_distance": fixed.value,
}))
"""


def _run_probe(pure_python: bool) -> dict:
    env = dict(os.environ)
    env.pop("NONLOCALITY_PURE_PYTHON", None)
    if pure_python:
        env["NONLOCALITY_PURE_PYTHON"] = "1"
    out = subprocess.run(
        [sys.executable, "-c", _PROBE],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    return json.loads(out.stdout)


def test_backend_name_is_a_known_value():
    assert kernels.backend_name() in ("compiled", "numpy")


def test_env_var_forces_the_pure_python_backend():
    assert _run_probe(pure_python=True)["backend"] == "numpy"


def test_backends_agree_on_projection_results():
    compiled = _run_probe(pure_python=False)
    pure = _run_probe(pure_python=True)
    if compiled["backend"] != "compiled":
        pytest.skip("compiled extension not available in this environment")
    assert abs(compiled["pr_distance"] - pure["pr_distance"]) < 1e-9
    assert abs(compiled["fixed_gamma_distance"] - pure["fixed_gamma_distance"]) < 1e-7
