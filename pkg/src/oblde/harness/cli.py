"""``oblde`` command line: run, compare, timing, list.

Exit status is 0 on success; failures print one ``error[<category>]: ...``
line to stderr and exit with 2 (config), 3 (I/O) or 4 (runtime).
"""

import argparse
import sys
from pathlib import Path

from ..objective import list_functions
from .compare import COMPARE_HEADER, POSTHOC_HEADER, compare_table, friedman_table
from .config import ALGORITHMS, ConfigError, ExperimentConfig
from .io import emit, read_csv, summary_to_csv, table_to_csv
from .runner import run_experiment
from .timing import reference_loop, timing_protocol

EXIT_CONFIG, EXIT_IO, EXIT_RUNTIME = 2, 3, 4


def _load_config(args):
    config = ExperimentConfig()
    if args.config:
        config = ExperimentConfig.from_text(Path(args.config).read_text())
    if args.set:
        config = config.with_overrides(args.set)
    return config.validate()


def cmd_run(args):
    config = _load_config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    pairs, summary = run_experiment(config, workers=args.workers)
    wall = not args.no_wall_time
    if args.format in ("csv", "both"):
        emit(pairs, "csv", out / "runs.csv", wall_time=wall)
    if args.format in ("json", "both"):
        emit(pairs, "json", out / "runs.json", config=config, wall_time=wall)
    (out / "summary.csv").write_text(summary_to_csv(summary))
    (out / "config.txt").write_text(config.to_text())
    for s in summary:
        print(f"{s.function:<32} D={s.dimension:<4} {s.algorithm:<18} {s.formatted()}")
    return 0


def cmd_compare(args):
    pairs = read_csv(Path(args.runs))
    rows = compare_table(pairs, reference=args.reference, alpha=args.alpha)
    text = table_to_csv(COMPARE_HEADER, [r.cells() for r in rows])
    if args.out:
        Path(args.out).write_text(text)
    sys.stdout.write(text)
    if args.friedman:
        result, algorithms, posthoc = friedman_table(pairs)
        print(f"# friedman chi2={result.chi_square:.4f} df={result.df} p={result.p_value:.4g}")
        ph = [[algorithms[r.index], r.average_rank, r.z, r.p_value, r.p_hochberg] for r in posthoc]
        ph_text = table_to_csv(POSTHOC_HEADER, ph)
        if args.friedman != "-":
            Path(args.friedman).write_text(ph_text)
        sys.stdout.write(ph_text)
    return 0


def cmd_timing(args):
    T0 = reference_loop()
    T1 = None
    print("algorithm,D,T0,T1,T2,complexity")
    for alg in args.algorithms:
        if alg not in ALGORITHMS:
            raise ConfigError("algorithms", f"unknown algorithm {alg!r}")
        r = timing_protocol(args.dimension, args.function, alg, NP=args.NP, budget=args.budget,
                            repeats=args.repeats, T0=T0, T1=T1)
        T1 = r.T1
        print(f"{alg},{args.dimension},{r.T0:.4f},{r.T1:.4f},{r.T2:.4f},{r.complexity:.2f}")
    return 0


def cmd_list(args):
    if args.what == "functions":
        print("\n".join(list_functions()))
    elif args.what == "algorithms":
        print("\n".join(ALGORITHMS))
    else:
        sys.stdout.write(ExperimentConfig().to_text())
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="oblde", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="execute an experiment")
    r.add_argument("--config", help="key = value config file")
    r.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key")
    r.add_argument("--out", default="results", help="output directory (default: results)")
    r.add_argument("--format", choices=("csv", "json", "both"), default="csv")
    r.add_argument("--workers", type=int, default=None,
                   help="worker processes (default: $OBLDE_WORKERS or 1)")
    r.add_argument("--no-wall-time", action="store_true",
                   help="leave wall_ms empty so reruns are byte-identical")
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("compare", help="rank-sum table from a runs CSV")
    c.add_argument("runs")
    c.add_argument("--reference", default="de")
    c.add_argument("--alpha", type=float, default=0.05)
    c.add_argument("--out")
    c.add_argument("--friedman", nargs="?", const="-", metavar="PATH",
                   help="also run the Friedman test and post hoc (optionally write to PATH)")
    c.set_defaults(func=cmd_compare)

    t = sub.add_parser("timing", help="T0/T1/T2 complexity measurement")
    t.add_argument("--dimension", type=int, default=50)
    t.add_argument("--function", default="shifted-rotated-rastrigin")
    t.add_argument("--algorithms", nargs="+", default=["de", "betacobl", "ibetacobl"])
    t.add_argument("--NP", type=int, default=100)
    t.add_argument("--budget", type=int, default=200_000)
    t.add_argument("--repeats", type=int, default=5)
    t.set_defaults(func=cmd_timing)

    ls = sub.add_parser("list", help="list functions, algorithms or the default config")
    ls.add_argument("what", choices=("functions", "algorithms", "config"))
    ls.set_defaults(func=cmd_list)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error[config]: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except KeyError as exc:
        print(f"error[config]: {exc.args[0]}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return EXIT_IO
    except Exception as exc:  # noqa: BLE001 - surfaced as a categorized line
        print(f"error[runtime]: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
