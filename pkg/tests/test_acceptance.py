"""Acceptance criteria, each checked at its stated tolerance.

Every criterion records one ``CRITERION n PASS|FAIL`` line; the lines are
printed in the terminal summary (see conftest.py) and also when this file
is run directly with ``python tests/test_acceptance.py``.
"""
import math
import statistics
import time
from functools import lru_cache

import numpy as np
import pytest

from mmcast.baselines import SCHEMES, run_scheme
from mmcast.config import load_config
from mmcast.harness import aggregate, derive_seed, raw_csv, run_sweep, sweep
from mmcast.metrics import dbm_to_watts, evaluate
from mmcast.oracle import exhaustive_optimum
from mmcast.partition import partition_and_plan
from mmcast.schedule import check_feasibility
from mmcast.topology import generate_topology

RESULTS: dict[int, str] = {}
USERS = (5, 10, 15, 20, 25, 30)


def record(n: int, ok: bool, detail: str):
    RESULTS[n] = f"CRITERION {n:2d} {'PASS' if ok else 'FAIL'}: {detail}"
    assert ok, RESULTS[n]


@lru_cache(maxsize=None)
def main_sweep():
    """Defaults, |U| 5..30, LOS and NLOS, D = 1 Gb and 10 Gb, 100 runs per point."""
    cfg = load_config(overrides={"experiment.modes": "LOS,NLOS", "experiment.demand_bits": "1e9,1e10"})
    records = run_sweep(cfg)
    rows = aggregate(records, cfg.schemes)
    table = {(r["mode"], r["demand_bits"], r["num_users"], r["scheme"]): r for r in rows}
    return cfg, records, table


def means(mode="LOS", demand=1e9):
    _, _, table = main_sweep()
    return {(n, s): table[(mode, demand, n, s)] for n in USERS for s in SCHEMES}


def gain_over_second(n):
    m = means()
    second = max((s for s in SCHEMES if s != "MD2D"), key=lambda s: m[(n, s)]["nt_mean"])
    return second, m[(n, "MD2D")]["nt_mean"] / m[(n, second)]["nt_mean"] - 1.0


def test_criterion_01_feasibility_suite():
    cb = load_config().antenna.codebook()
    channel = load_config().channel
    t0 = time.perf_counter()
    violations, count = [], 0
    for i in range(1000):
        n = 5 + i % 26
        mode = ("LOS", "NLOS")[(i // 26) % 2]
        seed = derive_seed(1, i)
        topo = generate_topology(n, 20.0, seed)
        model = channel.model(mode, shadowing_seed=seed)
        for scheme in SCHEMES:
            part, sched = run_scheme(scheme, topo, topo.users, cb, model, 30.0, 6.0, 10.0, 1e9, 18e-6)
            for partition in (part, None):
                report = check_feasibility(sched, partition, topo.users, topo, cb, model, 30.0)
                if not report.ok:
                    violations.append((i, scheme, report.failed()))
            count += 1
    elapsed = time.perf_counter() - t0
    record(1, not violations and elapsed < 300,
           f"{count} schedules on 1000 instances, {len(violations)} violating, {elapsed:.0f} s (< 300 s)")


def test_criterion_02_oracle_dominance():
    cfg = load_config()
    cb = cfg.antenna.codebook()
    t0 = time.perf_counter()
    worse, infeasible, ratios = 0, 0, []
    for i in range(200):
        seed = derive_seed(2, i)
        topo = generate_topology(4, 20.0, seed)
        model = cfg.channel.model(("LOS", "NLOS")[i % 2], shadowing_seed=seed)
        sol = exhaustive_optimum(topo, topo.users, cb, model, 30.0, 1e9, 18e-6)
        _, md2d = run_scheme("MD2D", topo, topo.users, cb, model, 30.0, 6.0, 10.0, 1e9, 18e-6)
        worse += sol.objective > md2d.total_slots
        infeasible += not check_feasibility(sol.best_schedule, sol.best_partition, topo.users, topo, cb,
                                            model, 30.0).ok
        ratios.append(md2d.total_slots / sol.objective)
    elapsed = time.perf_counter() - t0
    med = statistics.median(ratios)
    record(2, worse == 0 and infeasible == 0 and med <= 1.5 and elapsed < 600,
           f"200 instances, oracle worse {worse}, oracle infeasible {infeasible}, "
           f"median MD2D/oracle {med:.3f} (<= 1.5), {elapsed:.0f} s (< 600 s)")


def test_criterion_03_scheme_ordering():
    m = means()
    bad = [n for n in USERS if m[(n, "MD2D")]["nt_mean"] < max(m[(n, s)]["nt_mean"] for s in SCHEMES[1:])]
    gains = ", ".join(f"{n}:{gain_over_second(n)[1]:+.3f}" for n in USERS)
    record(3, not bad, f"MD2D gain over best other scheme per |U| {gains}; failing |U| {bad}")


def test_criterion_04_gain_at_30():
    second, g = gain_over_second(30)
    record(4, 0.10 <= g <= 0.45, f"|U|=30 MD2D vs {second}: {g:+.3f} (band [0.10, 0.45])")


def test_criterion_05_gain_at_5():
    second, g = gain_over_second(5)
    record(5, 0.02 <= g <= 0.25, f"|U|=5 MD2D vs {second}: {g:+.3f} (band [0.02, 0.25])")


def test_criterion_06_fdmac_flat():
    m = means()
    a, b = m[(5, "FDMAC")]["nt_mean"], m[(30, "FDMAC")]["nt_mean"]
    var = abs(b - a) / a
    record(6, var < 0.10, f"FDMAC NT {a / 1e9:.3f} vs {b / 1e9:.3f} Gb/s, relative change {var:.4f} (< 0.10)")


def test_criterion_07_demand_invariance():
    lo, hi = means(demand=1e9), means(demand=1e10)
    worst = max(abs(hi[k]["nt_mean"] / lo[k]["nt_mean"] - 1.0) for k in lo)
    record(7, worst < 0.02, f"max relative NT change 1 Gb -> 10 Gb over all schemes and |U|: {worst:.2e} (< 0.02)")


def test_criterion_08_threshold_surface():
    cfg = load_config(overrides={"experiment.schemes": "MD2D", "experiment.num_users": "9",
                                 "experiment.r_th_m": "1,2,3,4,5,6,7,8,9",
                                 "experiment.theta_th_deg": "1,5,10,15"})
    rows = aggregate(run_sweep(cfg), cfg.schemes)
    surface = {(r["r_th_m"], r["theta_th_deg"]): r["nt_mean"] for r in rows}
    best = max(surface, key=surface.get)
    per_theta = "; ".join(
        f"theta {t:g}: " + " ".join(f"{surface[(float(r), t)] / 1e9:.2f}" for r in range(1, 10))
        for t in (1.0, 5.0, 10.0, 15.0))
    record(8, best[1] in (5.0, 10.0) and 4.0 <= best[0] <= 8.0,
           f"argmax at r_th={best[0]:g} m, theta_th={best[1]:g} deg "
           f"(want theta in {{5, 10}}, r in [4, 8]); NT Gb/s by r_th=1..9 -> {per_theta}")


def test_criterion_09_nlos_degradation():
    los, nlos = means("LOS"), means("NLOS")
    bad = [k for k in los if not (nlos[k]["nt_mean"] < los[k]["nt_mean"] and nlos[k]["ec_mean"] > los[k]["ec_mean"])]
    ratio = max(nlos[k]["nt_mean"] / los[k]["nt_mean"] for k in los)
    record(9, not bad, f"{len(los) - len(bad)}/{len(los)} (|U|, scheme) points degrade; "
                       f"worst NLOS/LOS NT ratio {ratio:.3f}")


def test_criterion_10_energy_efficiency():
    m = means()
    bad = [n for n in USERS if m[(n, "MD2D")]["ee_mean"] < max(m[(n, s)]["ee_mean"] for s in SCHEMES[1:])]
    ratio = m[(30, "MD2D")]["ee_mean"] / m[(30, "MC")]["ee_mean"]
    record(10, not bad and ratio >= 1.3, f"EE dominance failing |U| {bad}; EE(MD2D)/EE(MC) at 30 = {ratio:.3f} (>= 1.3)")


def test_criterion_11_metric_identities():
    _, records, _ = main_sweep()
    worst_rel, slack_bad, runs = 0.0, 0, 0
    for rec in records:
        p_w = dbm_to_watts(rec.point.tx_power_dbm)
        for m in rec.metrics.values():
            runs += 1
            nt, ec, ee = m.network_throughput_bps, m.energy_consumption_j, m.energy_efficiency_bpj
            worst_rel = max(worst_rel, abs(ee * ec - nt) / nt)
            # sum_k D / R_k = EC / P_t  must not exceed the scheduled airtime
            slack_bad += ec / p_w > m.total_slots * 18e-6
    record(11, worst_rel <= 1e-12 and slack_bad == 0,
           f"{runs} scheme runs, max |EE*EC - NT|/NT {worst_rel:.1e} (<= 1e-12), airtime shortfalls {slack_bad}")


def test_criterion_12_complexity():
    cfg = load_config()
    cb = cfg.antenna.codebook()
    model = cfg.channel.model("LOS")
    sizes = (10, 20, 40, 80, 160)
    times = []
    for n in sizes:
        topos = [generate_topology(n, 20.0, derive_seed(12, s)) for s in range(5)]
        best = math.inf
        for _ in range(3):
            t0 = time.perf_counter()
            for topo in topos:
                partition_and_plan(topo, topo.users, cb, model, 30.0, 6.0, 10.0)
            best = min(best, time.perf_counter() - t0)
        times.append(best / len(topos))
    slope = float(np.polyfit(np.log(sizes), np.log(times), 1)[0])
    detail = ", ".join(f"{n}:{t * 1e3:.1f}ms" for n, t in zip(sizes, times))
    record(12, slope <= 3.3, f"log-log slope {slope:.2f} (<= 3.3); {detail}")


def test_criterion_13_determinism(tmp_path):
    cfg = load_config(overrides={"experiment.num_users": "5,20", "experiment.runs_per_point": "10",
                                 "experiment.modes": "LOS,NLOS", "experiment.master_seed": "13"})
    a = open(sweep(cfg, str(tmp_path / "a"))[0], "rb").read()
    b = open(sweep(cfg, str(tmp_path / "b"))[0], "rb").read()
    c = raw_csv(run_sweep(cfg, workers=2), cfg.schemes).encode()
    record(13, a == b == c, f"raw CSV {len(a)} bytes; repeat identical {a == b}; parallel identical {a == c}")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
