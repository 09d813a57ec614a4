"""Monte-Carlo experiment driver.

Each run draws one topology (and one frozen shadowing realization) from a
seed derived from ``(master_seed, run_index)`` and evaluates every requested
scheme on it. A sweep is the cross product of the configured sweep axes
times ``runs_per_point`` runs; results go to a raw per-run CSV and an
aggregated per-point CSV.
"""
from __future__ import annotations

import csv
import io
import itertools
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .baselines import SCHEMES, run_scheme
from .config import ExperimentConfig
from .errors import InfeasibleSchedule, InvalidArgument
from .metrics import MetricsReport, evaluate
from .topology import Topology, generate_topology

RAW_COLUMNS = ["scheme", "seed", "run", "num_users", "tx_power_dbm", "demand_bits", "mode",
               "r_th_m", "theta_th_deg", "slots", "nt_bps", "ec_j", "ee_bpj", "status"]
AGG_COLUMNS = ["scheme", "num_users", "tx_power_dbm", "demand_bits", "mode", "r_th_m", "theta_th_deg",
               "runs", "failures", "slots_mean", "nt_mean", "nt_sem", "ec_mean", "ec_sem", "ee_mean", "ee_sem"]


@dataclass(frozen=True, order=True)
class Point:
    mode: str
    num_users: int
    tx_power_dbm: float
    demand_bits: float
    r_th_m: float
    theta_th_deg: float


@dataclass
class RunRecord:
    point: Point
    run_index: int
    seed: int
    metrics: dict[str, MetricsReport | None]
    errors: dict[str, str] = field(default_factory=dict)
    wall_time_s: float = 0.0

    def rows(self, schemes) -> list[list]:
        out = []
        p = self.point
        for s in schemes:
            m = self.metrics.get(s)
            common = [s, self.seed, self.run_index, p.num_users, repr(p.tx_power_dbm), repr(p.demand_bits),
                      p.mode, repr(p.r_th_m), repr(p.theta_th_deg)]
            if m is None:
                out.append(common + ["", "", "", "", "error: " + self.errors.get(s, "unknown")])
            else:
                out.append(common + [m.total_slots, repr(m.network_throughput_bps), repr(m.energy_consumption_j),
                                     repr(m.energy_efficiency_bpj), "ok"])
        return out


def derive_seed(master_seed: int, run_index: int) -> int:
    """Per-run seed: first uint64 word of SeedSequence([master_seed, run_index])."""
    return int(np.random.SeedSequence([master_seed, run_index]).generate_state(1, np.uint64)[0])


def points(config: ExperimentConfig) -> list[Point]:
    return sorted(Point(*combo) for combo in itertools.product(
        config.modes, config.num_users, config.tx_power_dbm, config.demand_bits,
        config.r_th_m, config.theta_th_deg))


def run_topology(config: ExperimentConfig, point: Point, run_index: int) -> Topology:
    return generate_topology(point.num_users, config.area_side_m, derive_seed(config.master_seed, run_index))


def run_point(config: ExperimentConfig, point: Point, run_index: int) -> RunRecord:
    t0 = time.perf_counter()
    seed = derive_seed(config.master_seed, run_index)
    topo = generate_topology(point.num_users, config.area_side_m, seed)
    model = config.channel.model(point.mode, shadowing_seed=seed)
    codebook = config.antenna.codebook()
    record = RunRecord(point, run_index, seed, {})
    for scheme in config.schemes:
        try:
            _, sched = run_scheme(scheme, topo, topo.users, codebook, model, point.tx_power_dbm,
                                  point.r_th_m, point.theta_th_deg, point.demand_bits, config.slot_duration_s)
            record.metrics[scheme] = evaluate(sched, point.num_users, point.tx_power_dbm)
        except (InfeasibleSchedule, InvalidArgument) as exc:
            record.metrics[scheme] = None
            record.errors[scheme] = str(exc).replace(",", ";")
    record.wall_time_s = time.perf_counter() - t0
    return record


def _task(args):
    config, point, run_index = args
    return run_point(config, point, run_index)


def run_sweep(config: ExperimentConfig, workers: int = 1) -> list[RunRecord]:
    """All runs of the sweep in canonical order (point, then run index)."""
    config.validate()
    tasks = [(config, p, r) for p in points(config) for r in range(config.runs_per_point)]
    if workers <= 1:
        records = [_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_task, tasks, chunksize=max(1, len(tasks) // (8 * workers))))
    records.sort(key=lambda r: (r.point, r.run_index))
    return records


def raw_csv(records: list[RunRecord], schemes) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RAW_COLUMNS)
    for rec in records:
        w.writerows(rec.rows(schemes))
    return buf.getvalue()


def _mean_sem(values: list[float]) -> tuple[float, float]:
    n = len(values)
    if n == 0:
        return math.nan, math.nan
    mean = math.fsum(values) / n
    if n < 2:
        return mean, math.nan
    var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var / n)


def aggregate(records: list[RunRecord], schemes) -> list[dict]:
    """Mean and standard error per (point, scheme), folded in canonical order."""
    groups: dict[tuple[Point, str], list[RunRecord]] = {}
    for rec in records:
        for s in schemes:
            groups.setdefault((rec.point, s), []).append(rec)
    out = []
    order = {s: i for i, s in enumerate(SCHEMES)}
    for (p, s), recs in sorted(groups.items(), key=lambda kv: (kv[0][0], order.get(kv[0][1], 99))):
        ok = [r.metrics[s] for r in recs if r.metrics.get(s) is not None]
        row = {"scheme": s, "num_users": p.num_users, "tx_power_dbm": p.tx_power_dbm,
               "demand_bits": p.demand_bits, "mode": p.mode, "r_th_m": p.r_th_m,
               "theta_th_deg": p.theta_th_deg, "runs": len(recs), "failures": len(recs) - len(ok)}
        row["slots_mean"] = _mean_sem([m.total_slots for m in ok])[0]
        row["nt_mean"], row["nt_sem"] = _mean_sem([m.network_throughput_bps for m in ok])
        row["ec_mean"], row["ec_sem"] = _mean_sem([m.energy_consumption_j for m in ok])
        row["ee_mean"], row["ee_sem"] = _mean_sem([m.energy_efficiency_bpj for m in ok])
        out.append(row)
    return out


def aggregate_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=AGG_COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
    return buf.getvalue()


def sweep(config: ExperimentConfig, out_dir: str, workers: int = 1) -> tuple[str, str]:
    """Run the sweep and write ``raw.csv`` and ``aggregate.csv`` into ``out_dir``."""
    records = run_sweep(config, workers)
    os.makedirs(out_dir, exist_ok=True)
    raw_path = os.path.join(out_dir, "raw.csv")
    agg_path = os.path.join(out_dir, "aggregate.csv")
    with open(raw_path, "w", newline="") as fh:
        fh.write(raw_csv(records, config.schemes))
    with open(agg_path, "w", newline="") as fh:
        fh.write(aggregate_csv(aggregate(records, config.schemes)))
    return raw_path, agg_path
