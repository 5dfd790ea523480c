"""Command-line driver.

Subcommands: ``run``, ``compare``, ``maps-dump``, ``oracle-assignment`` and
``vessel``.  Configuration errors exit with status 2 and name the flag.
"""

import argparse
import math
import sys

from . import __version__
from .chaos import DEFAULT_SEED, MapKind, chaotic_sequence
from .exceptions import CfdoError, ConfigError
from .experiment import (
    AlgorithmSpec,
    ExperimentConfig,
    build_objective,
    parse_algorithms,
    read_config_file,
    run_experiment,
)
from .objectives import ObjectiveSpec
from .optimizer import CLAMP, REDRAW, optimize
from .problems import (
    VESSEL_DOMAIN,
    FeasibleRecorder,
    PenaltyConfig,
    brute_force_assignment,
    load_assignment,
    vessel_constraints,
)

EXIT_CONFIG = 2

# built-in defaults, applied after the config file and the flags
DEFAULTS = {
    "fn": "F4",
    "pop": 30,
    "iters": 50,
    "runs": 30,
    "seed": 0,
    "wf": 0.0,
    "boundary": REDRAW,
    "workers": 1,
    "format": "csv",
}


def _common(parser, runs=True):
    parser.add_argument("--fn", help="objective: F1..F10, a classic name, pressure_vessel or task_assignment")
    parser.add_argument("--pop", type=int, help="population size (default 30)")
    parser.add_argument("--iters", type=int, help="iterations per run (default 50)")
    if runs:
        parser.add_argument("--runs", type=int, help="runs per algorithm (default 30)")
        parser.add_argument("--workers", type=int, help="parallel worker processes (default 1)")
    parser.add_argument("--seed", type=int, help="seed, or base seed for multi-run commands (default 0)")
    parser.add_argument("--wf", type=float, help="weight factor in [0, 1] (default 0)")
    parser.add_argument("--boundary", choices=(REDRAW, CLAMP), help="out-of-box repair (default redraw)")
    parser.add_argument("--dim", type=int, help="dimension of a classic objective")
    parser.add_argument("--instance", help="assignment instance file for task_assignment")
    parser.add_argument("--transform", help="shift/rotation file for a registry objective")
    parser.add_argument("--out", help="write the report to this path")
    parser.add_argument("--format", choices=("csv", "json"), help="report format (default csv)")


def build_parser():
    parser = argparse.ArgumentParser(prog="cfdo", description="Fitness Dependent Optimizer experiments")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="single optimization; prints the best-so-far trace")
    p.add_argument("--algo", choices=("fdo", "cfdo"), default="fdo")
    p.add_argument("--map", help="chaotic map for --algo cfdo (default singer)")
    _common(p, runs=False)

    p = sub.add_parser("compare", help="multi-run comparison against the first algorithm")
    p.add_argument("--algos", help="comma-separated list, e.g. fdo,cfdo:singer,CFDO5 (first is the baseline)")
    p.add_argument("--algo", choices=("fdo", "cfdo"), help="shorthand: fdo alone, or fdo vs cfdo")
    p.add_argument("--map", help="map for the cfdo entry of --algo cfdo")
    p.add_argument("--config", help="key = value file; flags override it")
    _common(p)

    p = sub.add_parser("maps-dump", help="print iterates of a chaotic map")
    p.add_argument("--map", required=True)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--x0", type=float, default=DEFAULT_SEED, help="initial value (default 0.7)")

    p = sub.add_parser("oracle-assignment", help="exact assignment by enumeration")
    p.add_argument("instance", help="instance file: n, then n rows of n costs")

    p = sub.add_parser("vessel", help="pressure-vessel campaign with a feasibility report")
    p.add_argument("--algo", choices=("fdo", "cfdo"), default="cfdo")
    p.add_argument("--map", help="chaotic map for --algo cfdo (default singer)")
    p.add_argument("--penalty", type=float, default=1e6, help="static penalty coefficient (default 1e6)")
    p.add_argument("--printed-g2", action="store_true", help="use the -R + 0.00954 R head constraint")
    p.add_argument("--pop", type=int)
    p.add_argument("--iters", type=int, help="iterations per run (default 2000)")
    p.add_argument("--runs", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--wf", type=float)
    p.add_argument("--boundary", choices=(REDRAW, CLAMP))
    return parser


def _algorithm(args):
    if args.algo == "fdo":
        if args.map is not None:
            raise ConfigError("--map only applies to --algo cfdo", "--map")
        return AlgorithmSpec(None)
    try:
        return AlgorithmSpec(MapKind.from_name(args.map or "singer").value)
    except ValueError as exc:
        raise ConfigError(str(exc), "--map") from None


def _settings(args, keys):
    """Merge flags over the optional config file over the defaults."""
    merged = dict(DEFAULTS)
    if getattr(args, "config", None):
        merged.update(read_config_file(args.config))
    for key in keys:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def _experiment_config(s, algorithms):
    return ExperimentConfig(
        algorithms=algorithms,
        objective=s["fn"],
        population=s["pop"],
        iterations=s["iters"],
        runs=s.get("runs", 1),
        base_seed=s["seed"],
        wf=s["wf"],
        boundary=s["boundary"],
        workers=s.get("workers", 1),
        instance=s.get("instance"),
        transform=s.get("transform"),
        dimension=s.get("dim"),
    )


_KEYS = ("fn", "pop", "iters", "runs", "workers", "seed", "wf", "boundary", "dim",
         "instance", "transform", "out", "format")


def cmd_run(args, out):
    algorithm = _algorithm(args)
    s = _settings(args, _KEYS)
    config = _experiment_config(s, (algorithm,))
    objective = build_objective(config)
    fdo_config = algorithm.config(population=config.population, iterations=config.iterations,
                                  wf=config.wf, boundary=config.boundary, seed=config.base_seed)
    record = optimize(fdo_config, objective)
    lines = [f"{t + 1} {float(v)!r}" for t, v in enumerate(record.trace)]
    lines.append(f"best={record.best_fitness!r} evaluations={record.evaluations} label={fdo_config.label}")
    lines.append("position=" + ",".join(repr(float(v)) for v in record.best_position))
    text = "\n".join(lines) + "\n"
    if s.get("out"):
        with open(s["out"], "w") as fh:
            fh.write(text)
    out.write(text)
    return 0


def cmd_compare(args, out):
    s = _settings(args, _KEYS + ("algos",))
    if args.algos is not None and (args.algo is not None or args.map is not None):
        raise ConfigError("use either --algos or --algo/--map", "--algos")
    if args.algo is not None:
        algorithms = (AlgorithmSpec(None),) if args.algo == "fdo" else (AlgorithmSpec(None), _algorithm(args))
    elif args.map is not None:
        raise ConfigError("--map requires --algo cfdo", "--map")
    else:
        algorithms = parse_algorithms(s.get("algos", "fdo,cfdo:singer"))
    config = _experiment_config(s, algorithms)
    fmt = s["format"]
    if fmt not in ("csv", "json"):
        raise ConfigError(f"must be csv or json, got {fmt!r}", "--format")
    report = run_experiment(config)
    text = report.to_csv() if fmt == "csv" else report.to_json() + "\n"
    if s.get("out"):
        report.write(s["out"], fmt)
    else:
        out.write(text)
    return 0


def cmd_maps_dump(args, out):
    try:
        kind = MapKind.from_name(args.map)
    except ValueError as exc:
        raise ConfigError(str(exc), "--map") from None
    if args.count < 0:
        raise ConfigError("must be non-negative", "--count")
    try:
        values = chaotic_sequence(kind, args.count, args.x0)
    except ValueError as exc:
        raise ConfigError(str(exc), "--x0") from None
    out.write("".join(f"{v!r}\n" for v in values))
    return 0


def _format_cost(cost):
    return str(int(cost)) if float(cost).is_integer() else repr(cost)


def cmd_oracle_assignment(args, out):
    try:
        instance = load_assignment(args.instance)
    except OSError as exc:
        raise ConfigError(str(exc), "instance") from None
    perm, cost = brute_force_assignment(instance)
    out.write(f"cost={_format_cost(cost)} perm={','.join(map(str, perm))}\n")
    return 0


def cmd_vessel(args, out):
    algorithm = _algorithm(args)
    if not args.penalty > 0:
        raise ConfigError("must be positive", "--penalty")
    s = _settings(args, ("pop", "iters", "runs", "seed", "wf", "boundary"))
    if args.iters is None:
        s["iters"] = 2000
    penalty = PenaltyConfig(args.penalty, printed_g2=args.printed_g2)
    # validates the shared flags
    _experiment_config(dict(s, fn="pressure_vessel"), (algorithm,))
    feasible_runs = 0
    best = (math.inf, None, None)
    for k in range(s["runs"]):
        recorder = FeasibleRecorder(penalty)
        objective = ObjectiveSpec("pressure_vessel", recorder, VESSEL_DOMAIN)
        seed = s["seed"] + k
        config = algorithm.config(population=s["pop"], iterations=s["iters"], wf=s["wf"],
                                  boundary=s["boundary"], seed=seed)
        record = optimize(config, objective)
        if recorder.best_position is None:
            out.write(f"run {k} seed={seed} feasible=no penalized={record.best_fitness!r}\n")
            continue
        feasible_runs += 1
        x = recorder.best_position
        out.write(f"run {k} seed={seed} feasible=yes cost={recorder.best_cost!r}\n")
        if recorder.best_cost < best[0]:
            best = (recorder.best_cost, x, seed)
    out.write(f"feasible runs: {feasible_runs}/{s['runs']}\n")
    if best[1] is not None:
        cost, x, seed = best
        g = vessel_constraints(x, penalty.printed_g2)
        out.write(f"best cost={cost!r} seed={seed}\n")
        out.write("x=" + ",".join(repr(float(v)) for v in x) + "\n")
        out.write("g=" + ",".join(repr(float(v)) for v in g) + "\n")
    return 0


COMMANDS = {
    "run": cmd_run,
    "compare": cmd_compare,
    "maps-dump": cmd_maps_dump,
    "oracle-assignment": cmd_oracle_assignment,
    "vessel": cmd_vessel,
}


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except ConfigError as exc:
        flag = f"{exc.flag}: " if exc.flag else ""
        parser.exit(EXIT_CONFIG, f"cfdo {args.command}: error: {flag}{exc}\n")
    except CfdoError as exc:
        parser.exit(EXIT_CONFIG, f"cfdo {args.command}: error: {exc}\n")


if __name__ == "__main__":
    sys.exit(main())
