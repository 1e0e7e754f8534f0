"""Compiled and pure-Python kernels must agree bit for bit."""
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ccqmkp._backend import backends
from ccqmkp.instance import generate_instance, make_core
from ccqmkp.profit import ChanceParams

BACKENDS = backends()
needs_both = pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled extension not built")


def test_rng_transforms_match_numpy_stream():
    raw = np.random.PCG64(42).random_raw(3000)
    for mod in BACKENDS.values():
        rng = mod.Rng(42)
        for u in raw[:1500].tolist():
            assert rng.random() == (u >> 11) * 2.0**-53
        for u in raw[1500:].tolist():
            assert rng.below(7) == ((u >> 32) * 7) >> 32


def _state(inst, rows):
    m1 = inst.m + 1
    return (np.zeros((rows, inst.n), np.int64), np.zeros((rows, 3, m1), np.int64),
            np.zeros((rows, 2, m1)), np.zeros(rows, np.int64))


def _run_all(mod, inst, chance, seed):
    core = make_core(inst, mod.Core)
    rng = mod.Rng(seed)
    f, tv = chance.kernel_args()
    out = {}
    s, ic, fc, mv = _state(inst, 1)
    core.rebuild(s[0], ic[0], fc[0])
    fit, feas = core.evaluate(ic[0], fc[0], f, tv)
    out["one"] = core.one_plus_one(s[0], ic[0], fc[0], 0, fit, feas, 700, rng, f, tv)
    out["one_slots"] = s[0].copy()

    mu, lam = 4, 3
    bs, bic, bfc, bm = _state(inst, mu + lam)
    fits, fe, birth = np.zeros(mu + lam), np.zeros(mu + lam, np.uint8), np.arange(mu + lam)
    for r in range(mu):
        bs[r] = np.random.default_rng(seed + r).integers(0, inst.m + 1, inst.n)
        core.rebuild(bs[r], bic[r], bfc[r])
        fits[r], fe[r] = core.evaluate(bic[r], bfc[r], f, tv)
    out["nb"] = core.mu_lambda(bs, bic, bfc, bm, fits, fe, birth, mu, lam, 301, mu, rng, f, tv)
    out["ml"] = (bs[:mu].copy(), fits[:mu].copy(), bic[:mu].copy(), bfc[:mu].copy())

    M, L = 5, 4
    T = M + L
    ms, mic, mfc, mm = _state(inst, T)
    mf, mfe, mb = np.zeros(T), np.zeros(T, np.uint8), np.arange(T)
    g, rk = np.zeros((T, inst.m)), np.zeros((T, inst.m), np.int64)
    sk, sc = np.zeros(T, np.int64), np.zeros(T)
    prefs = (np.arange(inst.n) % inst.m + 1).astype(np.int64)
    for r in range(M):
        ms[r] = bs[r % mu]
        core.rebuild(ms[r], mic[r], mfc[r])
    core.eval_rows(mic, mfc, mf, mfe, g, 0, M, f, tv, True)
    core.metrics(g, M, rk, sk, sc)
    out["mfo"] = core.mfo(ms, mic, mfc, mm, mf, mfe, mb, g, rk, sk, sc, prefs, M, M, L, 0.7,
                          bool(seed % 2), 402, M, rng, f, tv)
    out["mfo_state"] = (ms[:M].copy(), mf[:M].copy(), g[:M].copy(), sk[:M].copy(), sc[:M].copy())
    out["kt"] = core.kt_slots(ms[0], ms[1], 1, inst.m, rng)
    out["tail"] = rng.random()
    return out


def _equal(a, b):
    if isinstance(a, (tuple, list)):
        return len(a) == len(b) and all(_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


@needs_both
@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 40), m=st.integers(1, 5),
       delta=st.sampled_from([0.0, 5.0, 50.0]))
def test_kernels_are_bit_identical(seed, n, m, delta):
    inst = generate_instance(n, m, "strong", 0.3, seed)
    chance = ChanceParams(delta, 0.95)
    py = _run_all(BACKENDS["python"], inst, chance, seed)
    cy = _run_all(BACKENDS["cython"], inst, chance, seed)
    for key in py:
        assert _equal(py[key], cy[key]), key


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_move_and_rebuild_agree(name):
    inst = generate_instance(60, 4, "weak", 0.3, seed=2)
    core = make_core(inst, BACKENDS[name].Core)
    rng = np.random.default_rng(0)
    s = np.zeros(inst.n, np.int64)
    ic, fc = np.zeros((3, 5), np.int64), np.zeros((2, 5))
    core.rebuild(s, ic, fc)
    for _ in range(3000):
        core.move(s, ic, fc, int(rng.integers(inst.n)), int(rng.integers(5)))
    ic2, fc2 = np.zeros_like(ic), np.zeros_like(fc)
    core.rebuild(s.copy(), ic2, fc2)
    assert np.array_equal(ic, ic2)
    np.testing.assert_allclose(fc, fc2, atol=1e-9, rtol=0)


def test_env_var_forces_fallback():
    code = "import ccqmkp._backend as b; print(b.BACKEND)"
    env = dict(os.environ, CCQMKP_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_benchmark_script_runs(capsys):
    import runpy
    from pathlib import Path
    script = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_backends.py"
    runpy.run_path(str(script), run_name="bench")["main"](["--n", "20", "--m", "3", "--evals", "200",
                                                            "--repeat", "1"])
    lines = capsys.readouterr().out.splitlines()
    assert [line.split()[0] for line in lines[2:]] == ["one_plus_one", "mu_lambda", "mfo"]
