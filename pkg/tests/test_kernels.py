import os
import subprocess
import sys

import numpy as np
import pytest

import weylcurv as wc
from weylcurv import _kernels_numba, _kernels_numpy, kernels
from weylcurv.weyl import pair_table, weyl_form
from weylcurv.weyl import _start_frames

from helpers import random_weyl


def test_backend_selected():
    assert kernels.BACKEND in ("numba", "numpy")
    if os.environ.get("WEYLCURV_NO_NUMBA", "") in ("1", "true", "yes"):
        assert kernels.BACKEND == "numpy"


def test_rk4_backends_agree():
    rng = np.random.default_rng(0)
    for n in (3, 4):
        W = random_weyl(rng, n)
        gam = np.ascontiguousarray(W.space.gamma)
        f = np.ascontiguousarray(W.effective_field)
        v0 = rng.normal(size=n)
        p1, f1 = _kernels_numpy.rk4_velocity_path(gam, f, v0, 1e-3, 500)
        p2, f2 = _kernels_numba.rk4_velocity_path(gam, f, v0, 1e-3, 500)
        assert f1 == f2 == -1
        assert np.abs(p1 - p2).max() < 1e-11


def test_rk4_failure_reported():
    gam = np.zeros((2, 2, 2))
    f = np.array([np.nan, 0.0])
    v0 = np.array([1.0, 0.0])
    for impl in (_kernels_numpy, _kernels_numba):
        _, fail = impl.rk4_velocity_path(gam, f, v0, 0.1, 10)
        assert fail == 0


def test_ascent_backends_agree():
    rng = np.random.default_rng(1)
    for _ in range(6):
        n = int(rng.integers(4, 6))
        W = random_weyl(rng, n)
        Q = np.ascontiguousarray(weyl_form(W).Q)
        pi, pj = pair_table(n)
        starts = np.ascontiguousarray(_start_frames(n, 16, seed=3))
        v1, V1 = _kernels_numpy.ascend_pairs(Q, pi, pj, starts, 200, 1e-11, np.inf)
        v2, V2 = _kernels_numba.ascend_pairs(Q, pi, pj, starts, 200, 1e-11, np.inf)
        assert v1 == pytest.approx(v2, abs=1e-8)
        # both frames actually realize their reported value
        for val, V in ((v1, V1), (v2, V2)):
            m = np.outer(V[:, 0], V[:, 1]) - np.outer(V[:, 1], V[:, 0])
            mv = m[np.triu_indices(n, 1)]
            assert float(mv @ Q @ mv) == pytest.approx(val, abs=1e-9)


def test_ascent_finds_diagonal_maximum():
    # diagonal form: the best decomposable value is the largest diagonal
    # entry, attained on a coordinate plane
    n = 4
    diag = np.array([-1.0, 0.3, -0.5, -2.0, 0.7, -0.1])
    Q = np.diag(diag)
    pi, pj = pair_table(n)
    starts = np.ascontiguousarray(_start_frames(n, 32, seed=0))
    for impl in (_kernels_numpy, _kernels_numba):
        val, _ = impl.ascend_pairs(Q, pi, pj, starts, 500, 1e-12, np.inf)
        assert val == pytest.approx(0.7, abs=1e-7)


def test_ascent_early_exit():
    n = 4
    Q = np.diag([5.0, -1.0, -1.0, -1.0, -1.0, -1.0])
    pi, pj = pair_table(n)
    starts = np.ascontiguousarray(_start_frames(n, 64, seed=0))
    val, V = kernels.ascend_pairs(Q, pi, pj, starts, 500, 1e-12, 1e-7)
    assert val > 1e-7
    m = np.outer(V[:, 0], V[:, 1]) - np.outer(V[:, 1], V[:, 0])
    mv = m[np.triu_indices(n, 1)]
    assert float(mv @ Q @ mv) == pytest.approx(val, abs=1e-9)


def test_env_flag_selects_numpy_backend():
    code = ("import weylcurv.kernels as k; import sys; "
            "sys.exit(0 if k.BACKEND == 'numpy' else 1)")
    env = dict(os.environ, WEYLCURV_NO_NUMBA="1")
    res = subprocess.run([sys.executable, "-c", code], env=env)
    assert res.returncode == 0


def test_certification_agrees_across_backends():
    rng = np.random.default_rng(2)
    probes = []
    for _ in range(4):
        W = random_weyl(rng, 4)
        cert = wc.certify_nonpositive(W)
        probes.append((W, cert.verdict))
    # re-run the library in a numpy-backend subprocess on a deterministic case
    code = """
import numpy as np, weylcurv as wc, weylcurv.kernels as k
assert k.BACKEND == 'numpy'
S = wc.solvable((1.0, 2.0, 3.0))
cert = wc.certify_nonpositive(wc.WeylStructure(S, np.eye(4)[0], 1.1))
assert cert.verdict == 'positive_witness'
assert abs(cert.witness_value - 0.1) < 1e-6
"""
    env = dict(os.environ, WEYLCURV_NO_NUMBA="1")
    res = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
