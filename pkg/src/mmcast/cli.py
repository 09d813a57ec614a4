"""Command line: ``mmcast {run,sweep,oracle,check,defaults}``.

Every configuration field can be overridden with ``--set section.key=value``;
the common ones also have dedicated flags. Invalid input exits with status 2
and a message naming the offending field.
"""
import argparse
import sys

from .baselines import run_scheme
from .config import ConfigError, ExperimentConfig, dump_config, load_config
from .errors import InfeasibleSchedule, InvalidArgument
from .harness import derive_seed, sweep
from .metrics import evaluate
from .oracle import exhaustive_optimum
from .schedule import Schedule, check_feasibility
from .topology import Topology, generate_topology

EXIT_USAGE = 2
EXIT_INFEASIBLE = 1

_FLAG_KEYS = {
    "users": "experiment.num_users",
    "scheme": "experiment.schemes",
    "r_th": "experiment.r_th_m",
    "theta_th": "experiment.theta_th_deg",
    "tx_power": "experiment.tx_power_dbm",
    "demand": "experiment.demand_bits",
    "mode": "experiment.modes",
    "runs": "experiment.runs_per_point",
    "seed": "experiment.master_seed",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_config_args(p: argparse.ArgumentParser, *, sweepable: bool):
    p.add_argument("--config", metavar="FILE", help="INI configuration file")
    p.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE",
                   help="override any configuration field (repeatable)")
    p.add_argument("--tx-power", help="transmit power in dBm")
    p.add_argument("--demand", help="multicast data size in bits")
    p.add_argument("--mode", help="LOS or NLOS")
    if sweepable:
        p.add_argument("--users", help="number of users (comma-separated list for sweeps)")
        p.add_argument("--scheme", help="MD2D, MC, D2D or FDMAC (comma-separated)")
        p.add_argument("--r-th", help="radius threshold in m")
        p.add_argument("--theta-th", help="angle threshold in degrees")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mmcast", description="mmWave multicast scheduling with D2D relaying")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="evaluate one configuration point on one seeded topology")
    p.add_argument("config_file", nargs="?", help="INI configuration file")
    p.add_argument("--seed", type=int, required=True, help="master seed")
    p.add_argument("--run-index", type=int, default=0, help="run index within the master seed")
    p.add_argument("--topology-out", metavar="FILE", help="write the topology record")
    p.add_argument("--trace-out", metavar="FILE", help="write the schedule trace (single scheme only)")
    _add_config_args(p, sweepable=True)

    p = sub.add_parser("sweep", help="Monte-Carlo sweep writing raw.csv and aggregate.csv")
    p.add_argument("config_file", nargs="?", help="INI configuration file")
    p.add_argument("--seed", type=int, required=True, help="master seed")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--runs", type=int, help="runs per point")
    p.add_argument("--workers", type=int, default=1, help="worker processes")
    _add_config_args(p, sweepable=True)

    p = sub.add_parser("oracle", help="exact minimum-slot schedule of a topology record")
    p.add_argument("topology", help="topology record file")
    p.add_argument("--max-users", type=int, default=5, help="refuse larger groups")
    p.add_argument("--trace-out", metavar="FILE", help="write the optimal schedule trace")
    _add_config_args(p, sweepable=False)

    p = sub.add_parser("check", help="feasibility-check a schedule trace against a topology record")
    p.add_argument("topology", help="topology record file")
    p.add_argument("schedule", help="schedule trace file")
    _add_config_args(p, sweepable=False)

    p = sub.add_parser("defaults", help="print the effective configuration as INI")
    p.add_argument("config_file", nargs="?", help="INI configuration file")
    p.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE")
    p.add_argument("--config", metavar="FILE")
    return parser


def _overrides(args) -> dict[str, str]:
    items: dict[str, str] = {}
    for attr, key in _FLAG_KEYS.items():
        value = getattr(args, attr, None)
        if value is not None:
            items[key] = str(value)
    for entry in args.set:
        key, sep, value = entry.partition("=")
        if not sep:
            raise ConfigError(key or entry, "expected --set section.key=value")
        items[key.strip()] = value
    return items


def _config(args) -> ExperimentConfig:
    path = getattr(args, "config_file", None) or args.config
    return load_config(path, _overrides(args))


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InvalidArgument(f"{path}: {exc.strerror}") from exc


def _write(path: str, text: str):
    with open(path, "w") as fh:
        fh.write(text)


def _single(cfg: ExperimentConfig, name: str):
    values = getattr(cfg, name)
    if len(values) != 1:
        raise ConfigError(f"experiment.{name}", "this command takes a single value")
    return values[0]


def _format_report(scheme: str, m) -> str:
    return (f"{scheme:6s} slots={m.total_slots:<8d} NT={m.network_throughput_bps / 1e9:.6f} Gb/s "
            f"EC={m.energy_consumption_j:.6f} J EE={m.energy_efficiency_bpj / 1e9:.6f} Gb/J")


def cmd_run(args) -> int:
    cfg = _config(args)
    n = _single(cfg, "num_users")
    mode, p_dbm, demand = _single(cfg, "modes"), _single(cfg, "tx_power_dbm"), _single(cfg, "demand_bits")
    r_th, theta_th = _single(cfg, "r_th_m"), _single(cfg, "theta_th_deg")
    if args.trace_out and len(cfg.schemes) != 1:
        raise ConfigError("experiment.schemes", "--trace-out needs exactly one scheme")
    seed = derive_seed(cfg.master_seed, args.run_index)
    topo = generate_topology(n, cfg.area_side_m, seed)
    model = cfg.channel.model(mode, shadowing_seed=seed)
    codebook = cfg.antenna.codebook()
    if args.topology_out:
        _write(args.topology_out, topo.dumps())
    print(f"# users={n} mode={mode} tx_power_dbm={p_dbm!r} demand_bits={demand!r} "
          f"r_th_m={r_th!r} theta_th_deg={theta_th!r} seed={seed}")
    status = 0
    for scheme in cfg.schemes:
        try:
            _, sched = run_scheme(scheme, topo, topo.users, codebook, model, p_dbm, r_th, theta_th,
                                  demand, cfg.slot_duration_s)
        except InfeasibleSchedule as exc:
            print(f"{scheme:6s} infeasible: {exc}")
            status = EXIT_INFEASIBLE
            continue
        print(_format_report(scheme, evaluate(sched, n, p_dbm)))
        if args.trace_out:
            _write(args.trace_out, sched.dumps())
    return status


def cmd_sweep(args) -> int:
    cfg = _config(args)
    if args.workers < 1:
        raise ConfigError("--workers", "must be >= 1")
    raw, agg = sweep(cfg, args.out, workers=args.workers)
    print(raw)
    print(agg)
    return 0


def _instance(args):
    cfg = _config(args)
    topo = Topology.loads(_read(args.topology))
    model = cfg.channel.model(_single(cfg, "modes"), shadowing_seed=topo.seed)
    return cfg, topo, model, cfg.antenna.codebook()


def cmd_oracle(args) -> int:
    cfg, topo, model, codebook = _instance(args)
    p_dbm, demand = _single(cfg, "tx_power_dbm"), _single(cfg, "demand_bits")
    sol = exhaustive_optimum(topo, topo.users, codebook, model, p_dbm, demand, cfg.slot_duration_s,
                             max_group_size=args.max_users)
    print(f"optimal slots={sol.objective} explored={sol.explored}")
    print(sol.best_schedule.dumps(), end="")
    if args.trace_out:
        _write(args.trace_out, sol.best_schedule.dumps())
    return 0


def cmd_check(args) -> int:
    cfg, topo, model, codebook = _instance(args)
    sched = Schedule.loads(_read(args.schedule), codebook)
    report = check_feasibility(sched, None, topo.users, topo, codebook, model, _single(cfg, "tx_power_dbm"))
    for line in report.lines():
        print(line)
    if not report.ok:
        print("infeasible: violated constraint(s) " + ", ".join(report.failed()),
              file=sys.stderr)
        return EXIT_INFEASIBLE
    return 0


def cmd_defaults(args) -> int:
    print(dump_config(_config(args)), end="")
    return 0


COMMANDS = {"run": cmd_run, "sweep": cmd_sweep, "oracle": cmd_oracle, "check": cmd_check,
            "defaults": cmd_defaults}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except InvalidArgument as exc:
        print(f"mmcast {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InfeasibleSchedule as exc:
        print(f"mmcast {args.command}: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
