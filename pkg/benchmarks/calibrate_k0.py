"""Scan the k0 offset and report the runner-up scheme at |U| = 5 and |U| = 30.

The default ``channel.k0_offset_db`` is the least attenuating 1 dB step at
which D2D is the runner-up at |U| = 5 and MC is the runner-up at |U| = 30
(100 runs per point, master seed 0, other settings default).

Usage: python benchmarks/calibrate_k0.py [--lo 60] [--hi 70] [--runs 100] [--workers 4]
"""
import argparse

from mmcast.config import load_config
from mmcast.harness import aggregate, run_sweep


def runner_up(rows, n):
    nt = {r["scheme"]: r["nt_mean"] for r in rows if r["num_users"] == n}
    second = max((s for s in nt if s != "MD2D"), key=nt.get)
    return second, nt["MD2D"] / nt[second] - 1.0


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lo", type=int, default=60)
    ap.add_argument("--hi", type=int, default=70)
    ap.add_argument("--runs", type=int, default=100)
    ap.add_argument("--workers", type=int, default=4)
    args = ap.parse_args()
    chosen = None
    print(f"{'offset dB':>9} {'2nd@5':>6} {'gain@5':>7} {'2nd@30':>6} {'gain@30':>7}")
    for attenuation in range(args.lo, args.hi + 1):
        cfg = load_config(overrides={"experiment.num_users": "5,30", "experiment.runs_per_point": str(args.runs),
                                     "channel.k0_offset_db": str(-attenuation)})
        rows = aggregate(run_sweep(cfg, args.workers), cfg.schemes)
        s5, g5 = runner_up(rows, 5)
        s30, g30 = runner_up(rows, 30)
        print(f"{-attenuation:9d} {s5:>6} {g5:7.3f} {s30:>6} {g30:7.3f}")
        if s5 == "D2D" and s30 == "MC":
            chosen = -attenuation
    print(f"calibrated k0_offset_db = {chosen}")


if __name__ == "__main__":
    main()
