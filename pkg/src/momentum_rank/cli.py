"""Command-line interface: ``momentum-rank <command> ...``.

Data goes to stdout, diagnostics to stderr. Exit status is 0 on success, 2
for usage or input errors and 1 for anything unexpected.
"""

from __future__ import annotations

import argparse
import configparser
import logging
import sys
from datetime import date
from pathlib import Path

from . import report as fmt
from .analytics import WindowSpec, inversion_curves, sliding_frontier_sizes, topk_box_stats
from .core import (
    CARRY_FORWARD,
    DEFAULT_FLOOR,
    DEFAULT_MOMENTUM,
    INTERSECTION,
    MODES,
    MOMENTUM_FUNCTIONS,
    SIMPLE,
    MomentumError,
    build_frontier_report,
    compute_delta_system,
    explain_exclusion,
)
from .ingest import SnapshotStore, load_snapshot, save_snapshot_file
from .synth import COUPLED, GAIN_MODELS, SynthConfig, frontier_size_experiment, generate_population

log = logging.getLogger("momentum_rank")


class UsageError(MomentumError):
    pass


def _iso_date(text: str) -> date:
    try:
        return date.fromisoformat(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an ISO date: {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("expected at least one integer")
    return values


def _add_window_inputs(p: argparse.ArgumentParser) -> None:
    p.add_argument("--before", required=True, type=Path, help="snapshot at the start of the window")
    p.add_argument("--after", required=True, type=Path, help="snapshot at the end of the window")
    p.add_argument("--mode", choices=MODES, default=SIMPLE, help="relative gain definition")
    p.add_argument("--floor", type=float, default=DEFAULT_FLOOR, help="minimum baseline score")
    p.add_argument("--policy", choices=(INTERSECTION, CARRY_FORWARD), default=INTERSECTION)


def _add_format(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "json"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="momentum-rank",
        description="Momentum leaders: the Pareto frontier over absolute and relative score gain.",
    )
    parser.add_argument("--config", type=Path, help="INI file whose [<command>] section overrides defaults")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("frontier", help="ranked list of momentum leaders for one window")
    _add_window_inputs(p)
    p.add_argument("--momentum-fn", default=DEFAULT_MOMENTUM, choices=sorted(MOMENTUM_FUNCTIONS))
    p.add_argument("--plot", type=Path, help="write a frontier scatter figure (.svg/.png/.pdf)")
    p.add_argument("--intervals-plot", type=Path, help="write a dominance-interval figure")
    _add_format(p)
    p.set_defaults(func=cmd_frontier)

    p = sub.add_parser("explain", help="why an entity is, or is not, a momentum leader")
    _add_window_inputs(p)
    p.add_argument("--entity", required=True)
    p.add_argument("--all-dominators", action="store_true", help="list every dominating leader")
    _add_format(p)
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("windows", help="frontier sizes over sliding windows of a snapshot store")
    p.add_argument("--store", required=True, type=Path)
    p.add_argument("--length", type=int, default=90, help="window length in days")
    p.add_argument("--step", type=int, default=30, help="days between window end dates")
    p.add_argument("--from", dest="first", type=_iso_date, help="first window end date")
    p.add_argument("--to", dest="last", type=_iso_date, help="last window end date")
    p.add_argument("--floor", type=float, default=DEFAULT_FLOOR)
    p.add_argument("--mode", choices=MODES, default=SIMPLE)
    p.add_argument("--max-staleness", type=int, default=7, help="days a snapshot may predate a boundary")
    p.add_argument("--plot", type=Path, help="write a histogram figure")
    _add_format(p)
    p.set_defaults(func=cmd_windows)

    p = sub.add_parser("curves", help="relative/absolute gain inversion curves")
    _add_window_inputs(p)
    p.add_argument("--kmin", type=int, default=0)
    p.add_argument("--kmax", type=int, default=10)
    p.add_argument("--out", required=True, help="output prefix for the .tsv tables")
    p.add_argument("--plot", action="store_true", help="also write PREFIX.png")
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("boxstats", help="rank distribution of the top-K gainers")
    _add_window_inputs(p)
    p.add_argument("--k", type=_int_list, default=[10, 50, 100, 500])
    p.add_argument("--plot", type=Path, help="write a box-plot figure")
    _add_format(p)
    p.set_defaults(func=cmd_boxstats)

    p = sub.add_parser("simulate", help="frontier sizes of synthetic power-law populations")
    p.add_argument("--n", type=_int_list, default=[20_000], help="population size(s), comma separated")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--trials", type=int, default=70)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--model", choices=GAIN_MODELS, default=COUPLED)
    p.add_argument("--coupling", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=0.8)
    p.add_argument("--dump", type=Path, help="write the first trial's snapshots into this directory")
    _add_format(p)
    p.set_defaults(func=cmd_simulate)

    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", type=Path)
    known, rest = pre.parse_known_args(argv)
    if known.config is None:
        return
    cfg = configparser.ConfigParser()
    try:
        with known.config.open(encoding="utf-8") as fh:
            cfg.read_file(fh)
    except OSError as exc:
        raise UsageError(f"{known.config}: {exc.strerror or exc}") from None
    except configparser.Error as exc:
        raise UsageError(f"{known.config}: {exc}") from None
    subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    for name, sp in subparsers.choices.items():
        if not cfg.has_section(name):
            continue
        actions = {a.dest: a for a in sp._actions}
        overrides = {}
        for key, raw in cfg.items(name):
            dest = key.replace("-", "_")
            if dest not in actions:
                raise UsageError(f"{known.config}: unknown option {key!r} in [{name}]")
            action = actions[dest]
            try:
                value = action.type(raw) if action.type else raw
            except (argparse.ArgumentTypeError, ValueError) as exc:
                raise UsageError(f"{known.config}: [{name}] {key}: {exc}") from None
            if action.choices is not None and value not in action.choices:
                raise UsageError(f"{known.config}: [{name}] {key}: {value!r} not in {sorted(action.choices)}")
            overrides[dest] = value
            action.required = False
        sp.set_defaults(**overrides)


def _system(args):
    before = load_snapshot(args.before)
    after = load_snapshot(args.after)
    return compute_delta_system(before, after, mode=args.mode, floor=args.floor, policy=args.policy)


def _emit(text: str) -> None:
    sys.stdout.write(text)


def cmd_frontier(args) -> int:
    system = _system(args)
    rep = build_frontier_report(system, args.momentum_fn)
    doc = fmt.ReportDocument(rep, floor=args.floor, mode=args.mode)
    _emit(doc.to_json() + "\n" if args.format == "json" else doc.to_text())
    if args.plot or args.intervals_plot:
        from . import plotting

        if args.plot:
            log.info("wrote %s", plotting.plot_frontier(rep, args.plot))
        if args.intervals_plot:
            log.info("wrote %s", plotting.plot_intervals(rep, args.intervals_plot))
    return 0


def cmd_explain(args) -> int:
    system = _system(args)
    rep = build_frontier_report(system)
    result = explain_exclusion(args.entity, rep)
    dominators = None
    if args.all_dominators:
        dominators = [] if rep.is_leader(args.entity) else rep.dominators_of(args.entity)
    if args.format == "json":
        _emit(fmt.dumps(fmt.explanation_dict(result, dominators)) + "\n")
    else:
        _emit(fmt.explanation_text(result, dominators))
    return 0


def cmd_windows(args) -> int:
    if not args.store.is_dir():
        raise UsageError(f"no snapshot store at {args.store}")
    store = SnapshotStore.open(args.store, create=False)
    if not len(store):
        raise UsageError(f"snapshot store {args.store} is empty")
    first = args.first or store.dates[0]
    last = args.last or store.dates[-1]
    if last < first:
        raise UsageError("--to is before --from")
    spec = WindowSpec.stepped(
        first, last, length=args.length, step=args.step, floor=args.floor,
        max_staleness=args.max_staleness, mode=args.mode,
    )
    hist = sliding_frontier_sizes(store.history(), spec)
    for w in hist.skipped:
        log.warning("skipped window ending %s: %s", w.end.isoformat(), w.reason)
    if args.format == "json":
        _emit(fmt.dumps(fmt.histogram_dict(hist)) + "\n")
    else:
        _emit(fmt.histogram_text(hist))
    if args.plot:
        from . import plotting

        log.info("wrote %s", plotting.plot_histogram(hist, args.plot))
    return 0


def cmd_curves(args) -> int:
    if args.kmax < args.kmin:
        raise UsageError("--kmax is below --kmin")
    system = _system(args)
    rel, ab = inversion_curves(system, range(args.kmin, args.kmax + 1))
    prefix = args.out
    outputs = {
        f"{prefix}_relative.tsv": fmt.curve_table(rel),
        f"{prefix}_absolute.tsv": fmt.curve_table(ab),
        f"{prefix}_superposition.tsv": fmt.superposition_table(rel, ab),
    }
    written = []
    try:
        for path, text in outputs.items():
            Path(path).write_text(text, encoding="utf-8")
            written.append(path)
        if args.plot:
            from . import plotting

            written.append(str(plotting.plot_curves(rel, ab, f"{prefix}.png")))
    except OSError as exc:
        raise UsageError(f"cannot write output: {exc}") from None
    _emit("".join(f"{path}\n" for path in written))
    return 0


def cmd_boxstats(args) -> int:
    system = _system(args)
    stats = topk_box_stats(system, args.k)
    if args.format == "json":
        _emit(fmt.dumps(fmt.boxstats_dict(stats)) + "\n")
    else:
        _emit(fmt.boxstats_text(stats))
    if args.plot:
        from . import plotting

        log.info("wrote %s", plotting.plot_boxstats(stats, args.plot))
    return 0


def cmd_simulate(args) -> int:
    cfg = SynthConfig(
        n=args.n[0], alpha=args.alpha, gain_model=args.model,
        coupling=args.coupling, beta=args.beta, seed=args.seed,
    )
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    if any(n < 1 for n in args.n):
        raise UsageError("--n values must be >= 1")
    rows = frontier_size_experiment(cfg, args.n, args.trials)
    if args.format == "json":
        _emit(fmt.dumps(fmt.experiment_dict(rows)) + "\n")
    else:
        _emit(fmt.experiment_text(rows))
    if args.dump:
        args.dump.mkdir(parents=True, exist_ok=True)
        for snap in generate_population(cfg):
            path = save_snapshot_file(snap, args.dump / f"{snap.as_of.isoformat()}.csv")
            log.info("wrote %s", path)
    return 0


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"momentum-rank: error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        return int(exc.code or 0)

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("momentum-rank: %(levelname)s: %(message)s"))
    log.handlers[:] = [handler]
    log.propagate = False
    log.setLevel(logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except MomentumError as exc:
        print(f"momentum-rank: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        log.debug("internal error", exc_info=True)
        print(f"momentum-rank: internal error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
