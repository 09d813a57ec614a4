"""Compare the compiled and pure-Python max-min beam kernels.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from mmcast import _kernels_py
from mmcast.antenna import build_codebook
from mmcast.channel import ChannelModel
from mmcast.partition import partition_and_plan
from mmcast.topology import generate_topology

try:
    from mmcast import _kernels as compiled
except ImportError:
    compiled = None


def kernel_case(n_targets: int, seed: int = 0):
    cb = build_codebook([15.0, 30.0, 45.0, 60.0])
    t = cb.table
    rng = np.random.default_rng(seed)
    model = ChannelModel()
    args = (rng.uniform(-110, -60, n_targets), rng.uniform(0, 360, n_targets),
            t.boresight, t.theta3, t.half_ml, t.g0, t.gsl, model.noise_dbm, model.eta_w_hz)
    return args


def bench(fn, args, repeat):
    number = max(1, int(2000 / max(1, len(args[0]))))
    best = min(timeit.repeat(lambda: fn(*args), number=number, repeat=repeat))
    return best / number


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"{'targets':>8} {'python us':>11} {'cython us':>11} {'speedup':>8}")
    for n in (1, 4, 16, 64):
        case = kernel_case(n)
        py = bench(_kernels_py.beam_min_rates, case, args.repeat) * 1e6
        if compiled is None:
            print(f"{n:8d} {py:11.2f} {'n/a':>11} {'n/a':>8}")
            continue
        assert compiled.beam_min_rates(*case).tobytes() == _kernels_py.beam_min_rates(*case).tobytes()
        cy = bench(compiled.beam_min_rates, case, args.repeat) * 1e6
        print(f"{n:8d} {py:11.2f} {cy:11.2f} {py / cy:8.1f}x")

    # end to end: the partition is where the kernel is called in practice
    import mmcast.channel as channel
    cb = build_codebook([15.0, 30.0, 45.0, 60.0])
    model = ChannelModel()
    topo = generate_topology(60, 20.0, 1)
    for name, impl in (("python", _kernels_py), ("cython", compiled)):
        if impl is None:
            continue
        channel.kernels.beam_min_rates = impl.beam_min_rates
        t = min(timeit.repeat(lambda: partition_and_plan(topo, topo.users, cb, model, 30.0, 6.0, 10.0),
                              number=3, repeat=args.repeat)) / 3
        print(f"partition |U|=60 with {name} kernel: {t * 1e3:.1f} ms")


if __name__ == "__main__":
    main()
