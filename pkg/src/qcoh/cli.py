"""Command-line interface.

    qcoh run tradeoff_histograms --qubits 3,4 --ranks 2,3 --seed 7 --out h.csv
    qcoh run additivity_table --qubits 3,4,5 --ranks 1-4 --preset ci --out t.csv
    qcoh run dicke_curves --qubits 3-10 --out dicke.csv --plot
    qcoh inspect --state eq11
    qcoh inspect --state-file state.txt

``--config`` loads a flat key=value file; explicit flags override it.
"""

import argparse
import sys

from .experiments import (
    EXPERIMENTS,
    ConfigError,
    build_config,
    format_report,
    parse_int_list,
    read_config_file,
    run_experiment,
)
from .states import StateFileError, ValidationError


def _add_run_parser(sub):
    p = sub.add_parser("run", help="run a seeded experiment")
    p.add_argument("experiment", choices=EXPERIMENTS)
    p.add_argument("--qubits", help="comma/range list, e.g. 3,4,5 or 3-10")
    p.add_argument("--ranks", help="comma/range list, e.g. 1-4")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--bins", type=int)
    p.add_argument("--pivot", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--preset", choices=("paper", "ci"))
    p.add_argument("--out", help="CSV output path (a .meta.json sidecar is "
                                 "written next to it)")
    p.add_argument("--plot", action="store_true", default=None,
                   help="also render figures next to the CSV")
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--state", help="named state for single_state runs")
    p.add_argument("--state-file", dest="state_file",
                   help="state file for single_state runs")
    return p


def _add_inspect_parser(sub):
    p = sub.add_parser("inspect", help="report every measure of one state")
    p.add_argument("--state",
                   help="eq11 | mcs:<d> | dicke:<n>,<r> | ghzx:<n>,<p>")
    p.add_argument("--state-file", dest="state_file")
    p.add_argument("--pivot", type=int, default=0)
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcoh",
        description="coherence/mixedness trade-off and additivity experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_run_parser(sub)
    _add_inspect_parser(sub)
    return parser


def _run(args) -> int:
    overrides = {}
    if args.config:
        overrides.update(read_config_file(args.config))
    overrides.pop("experiment", None)
    cli_fields = {
        "samples": args.samples, "seed": args.seed, "bins": args.bins,
        "pivot": args.pivot, "workers": args.workers, "out": args.out,
        "plot": args.plot, "preset": args.preset, "state": args.state,
        "state_file": args.state_file,
    }
    if args.qubits:
        cli_fields["n_qubits"] = parse_int_list(args.qubits)
    if args.ranks:
        cli_fields["ranks"] = parse_int_list(args.ranks)
    overrides.update({k: v for k, v in cli_fields.items() if v is not None})
    config = build_config(args.experiment, **overrides)
    result = run_experiment(config)
    if config.experiment == "single_state":
        sys.stdout.write(format_report(result))
        return 0
    print(f"{config.experiment}: {len(result.rows)} rows "
          f"(seed {config.seed}, samples {config.samples}, "
          f"{result.metadata['wall_time_s']} s)")
    if config.out:
        csv_path, sidecar = result.write(config.out)
        print(f"wrote {csv_path} and {sidecar}")
        if config.plot:
            from . import figures

            for path in figures.render(result, csv_path):
                print(f"wrote {path}")
    elif config.plot:
        print("note: --plot needs --out to know where to put figures")
    return 0


def _inspect(args) -> int:
    config = build_config("single_state", state=args.state,
                          state_file=args.state_file, pivot=args.pivot)
    sys.stdout.write(format_report(run_experiment(config)))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _run(args)
        return _inspect(args)
    except (ConfigError, StateFileError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
