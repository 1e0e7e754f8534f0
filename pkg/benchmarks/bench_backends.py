"""Time the compiled and pure-Python kernels on one generated instance.

    python benchmarks/bench_backends.py --n 200 --m 10 --evals 20000
"""
import argparse
import time

import numpy as np

from ccqmkp._backend import backends
from ccqmkp.instance import generate_instance, make_core
from ccqmkp.profit import ChanceParams


def _block(inst, rows):
    m1 = inst.m + 1
    return (np.zeros((rows, inst.n), np.int64), np.zeros((rows, 3, m1), np.int64),
            np.zeros((rows, 2, m1)), np.zeros(rows, np.int64))


def bench_one_plus_one(mod, inst, chance, evals, seed):
    core = make_core(inst, mod.Core)
    f, tv = chance.kernel_args()
    s, ic, fc, _ = _block(inst, 1)
    core.rebuild(s[0], ic[0], fc[0])
    fit, feas = core.evaluate(ic[0], fc[0], f, tv)
    core.one_plus_one(s[0], ic[0], fc[0], 0, fit, feas, evals, mod.Rng(seed), f, tv)


def bench_mu_lambda(mod, inst, chance, evals, seed, mu=20, lam=10):
    core = make_core(inst, mod.Core)
    f, tv = chance.kernel_args()
    s, ic, fc, mv = _block(inst, mu + lam)
    fit, feas, birth = np.zeros(mu + lam), np.zeros(mu + lam, np.uint8), np.arange(mu + lam)
    for r in range(mu):
        core.rebuild(s[r], ic[r], fc[r])
        fit[r], feas[r] = core.evaluate(ic[r], fc[r], f, tv)
    core.mu_lambda(s, ic, fc, mv, fit, feas, birth, mu, lam, evals - evals % lam, mu, mod.Rng(seed), f, tv)


def bench_mfo(mod, inst, chance, evals, seed, mu=20, lam=10):
    core = make_core(inst, mod.Core)
    f, tv = chance.kernel_args()
    total = mu + lam
    s, ic, fc, mv = _block(inst, total)
    fit, feas, birth = np.zeros(total), np.zeros(total, np.uint8), np.arange(total)
    g, ranks = np.zeros((total, inst.m)), np.zeros((total, inst.m), np.int64)
    skill, scalar = np.zeros(total, np.int64), np.zeros(total)
    prefs = (np.arange(inst.n) % inst.m + 1).astype(np.int64)
    rng = np.random.default_rng(seed)
    for r in range(mu):
        s[r] = np.where(rng.random(inst.n) < 0.1, prefs, 0)
        core.rebuild(s[r], ic[r], fc[r])
    core.eval_rows(ic, fc, fit, feas, g, 0, mu, f, tv, False)
    core.metrics(g, mu, ranks, skill, scalar)
    core.mfo(s, ic, fc, mv, fit, feas, birth, g, ranks, skill, scalar, prefs, mu, mu, lam, 0.1,
             False, evals - evals % lam, mu, mod.Rng(seed), f, tv)


KERNELS = {"one_plus_one": bench_one_plus_one, "mu_lambda": bench_mu_lambda, "mfo": bench_mfo}


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--m", type=int, default=10)
    p.add_argument("--evals", type=int, default=20_000)
    p.add_argument("--delta", type=float, default=25.0)
    p.add_argument("--alpha", type=float, default=0.95)
    p.add_argument("--repeat", type=int, default=3, help="report the best of this many runs")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    inst = generate_instance(args.n, args.m, "strong", 0.25, args.seed)
    chance = ChanceParams(args.delta, args.alpha)
    mods = backends()
    print(f"n={args.n} m={args.m} evals={args.evals} backends={','.join(sorted(mods))}")
    print(f"{'kernel':<14}" + "".join(f"{name + ' (s)':>16}" for name in sorted(mods)) + f"{'speedup':>10}")
    for kernel, fn in KERNELS.items():
        times = {}
        for name, mod in sorted(mods.items()):
            best = float("inf")
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                fn(mod, inst, chance, args.evals, args.seed)
                best = min(best, time.perf_counter() - t0)
            times[name] = best
        speedup = times["python"] / times["cython"] if len(times) == 2 else float("nan")
        print(f"{kernel:<14}" + "".join(f"{times[k]:>16.4f}" for k in sorted(times)) + f"{speedup:>10.1f}")


if __name__ == "__main__":
    main()
