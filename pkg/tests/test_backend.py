"""The pure-Python fallback must reproduce the compiled kernels."""
import json
import os
import subprocess
import sys

import numpy as np
import pytest

import magflow

PROBE = r"""
import json, magflow
from magflow.chaos import coverage, lyapunov_top
from magflow.flow import integrate, state_from_energy
from magflow.fuchsian import default_group, integrate_on_quotient, reduce
G = default_group()
st = state_from_energy(2.0, 0.1 + 0.05j, 0.3)
out = {
    "backend": magflow.backend_name(),
    "cover": integrate(st, 0.5, 1e-3).states[-1].tolist(),
    "quotient": integrate_on_quotient(st, 3.0, 1e-3, G)[0].states[-1].tolist(),
    "reduce": [reduce(0.99j, G).representative.real, reduce(0.99j, G).representative.imag],
    "lyap": lyapunov_top(st, 2.0, 20.0, G, burn_in=5).lambda_,
    "cov": coverage(state_from_energy(0.5, 0.1 + 0.05j, 0.3), 0.5, 5.0, 20, G).visited_fraction,
}
print(json.dumps(out))
"""


def _probe(disable: bool) -> dict:
    env = dict(os.environ)
    env["MAGFLOW_DISABLE_NUMBA"] = "1" if disable else "0"
    res = subprocess.run([sys.executable, "-c", PROBE], env=env, capture_output=True,
                         text=True, check=True, timeout=300)
    return json.loads(res.stdout)


@pytest.fixture(scope="module")
def probes():
    return _probe(False), _probe(True)


def test_flag_selects_backend(probes):
    fast, slow = probes
    assert slow["backend"] == "numpy"
    assert fast["backend"] == ("numba" if magflow.NUMBA_ENABLED else "numpy")


def test_fallback_matches_compiled(probes):
    fast, slow = probes
    for key in ("cover", "quotient", "reduce"):
        assert np.allclose(fast[key], slow[key], rtol=1e-10, atol=1e-12), key
    assert fast["lyap"] == pytest.approx(slow["lyap"], abs=1e-6)
    assert fast["cov"] == slow["cov"]
