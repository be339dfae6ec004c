"""Command-line entry point.

Exit codes: 0 when the search finished (optimum proven), 2 when a time limit
cut it short and an incumbent is reported, 1 on input or usage errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import __version__
from .bounds import convergence_run, theorem1_epsilon
from .dataset import BinaryDataset, EncodingSchema, encode, fit_encoding, load_csv
from .distances import linf_base, mmd_overlap, total_variation
from .mio import export_mio
from .msdd import count_terms, msdd_enumerate
from .solver import SolverConfig, solve
from .synth import Population, plant, sample

REPORT_VERSION = 1
EXIT_OK, EXIT_ERROR, EXIT_TIMEOUT = 0, 1, 2
BASELINES = ("tv", "linf", "mmd")


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _parse_kinds(text: str | None, path: str | None) -> dict[str, str]:
    kinds = {}
    if path:
        kinds.update(json.loads(Path(path).read_text(encoding="utf-8")))
    if text:
        for item in text.split(","):
            name, sep, kind = item.partition("=")
            if not sep:
                raise CliError(f"bad --kinds entry {item!r}; expected name=kind")
            kinds[name.strip()] = kind.strip()
    return kinds


def _load(args) -> tuple[BinaryDataset, EncodingSchema, tuple[str, str]]:
    if not args.csv:
        raise CliError("--csv is required")
    protected = [c.strip() for c in args.protected.split(",") if c.strip()]
    if not protected:
        raise CliError("--protected needs at least one column")
    table = load_csv(args.csv, args.group, protected, _parse_kinds(args.kinds, args.kinds_file))
    schema = fit_encoding(table)
    return encode(table, schema), schema, table.group_values


def _config(args) -> SolverConfig:
    limit = None if args.time_limit is not None and args.time_limit <= 0 else args.time_limit
    return SolverConfig(min_support=args.min_support, time_limit=limit)


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def build_report(data: BinaryDataset, schema: EncodingSchema, group_values, cfg: SolverConfig,
                 delta: float, baselines=()) -> tuple[dict, object]:
    res = solve(data, cfg)
    n_min = min(data.n_mu, data.n_nu)
    if res.signed_exact > 0:
        over = group_values[0]
    elif res.signed_exact < 0:
        over = group_values[1]
    else:
        over = None
    report = {
        "report_version": REPORT_VERSION,
        "dataset": {
            "rows": data.n_samples,
            "groups": {"mu": group_values[0], "nu": group_values[1]},
            "n_mu": data.n_mu,
            "n_nu": data.n_nu,
            "n_literals": data.n_features,
            "term_space": str(count_terms(data.n_features)),
            "clamped": dict(data.clamped),
        },
        "msd": res.msd,
        "msd_exact": str(res.msd_exact),
        "signed_discrepancy": res.signed_discrepancy,
        "over_represented": over,
        "subgroup": {
            "description": schema.describe(res.best_term),
            "literals": res.best_term.to_list(),
            "support_mu": res.support_mu,
            "support_nu": res.support_nu,
        },
        "bound": {"delta": delta, "n_min": n_min, "epsilon": theorem1_epsilon(data.n_features, n_min, delta)},
        "solver": {
            "proven_optimal": res.proven_optimal,
            "nodes_explored": res.nodes_explored,
            "nodes_pruned": res.nodes_pruned,
            "min_support": cfg.min_support,
            "time_limit": cfg.time_limit,
        },
    }
    funcs = {"tv": total_variation, "linf": linf_base, "mmd": mmd_overlap}
    if baselines:
        report["baselines"] = {name: funcs[name](data) for name in baselines}
    return report, res


def format_report(report: dict, elapsed: float | None = None) -> str:
    d, s = report["dataset"], report["subgroup"]
    lines = [
        f"samples: {d['rows']} ({d['groups']['mu']}: {d['n_mu']}, {d['groups']['nu']}: {d['n_nu']}), "
        f"{d['n_literals']} literal columns",
        f"MSD: {report['msd']:.6g}  (signed {report['signed_discrepancy']:+.6g}, "
        f"over-represented: {report['over_represented'] or 'none'})",
        f"subgroup: {s['description']}",
        f"support: {d['groups']['mu']}={s['support_mu']}, {d['groups']['nu']}={s['support_nu']}",
        f"deviation bound at delta={report['bound']['delta']}: {report['bound']['epsilon']:.6g}",
    ]
    for name, value in report.get("baselines", {}).items():
        lines.append(f"{name}: {value:.6g}")
    status = "proven optimal" if report["solver"]["proven_optimal"] else "TIME LIMIT (incumbent only)"
    line = f"solver: {status}, {report['solver']['nodes_explored']} nodes"
    if elapsed is not None:
        line += f", {elapsed:.2f}s"
    lines.append(line)
    return "\n".join(lines) + "\n"


def cmd_audit(args) -> int:
    data, schema, groups = _load(args)
    cfg = _config(args)
    if args.baselines in (None, "none"):
        names = ()
    elif args.baselines == "all":
        names = BASELINES
    else:
        names = tuple(b.strip() for b in args.baselines.split(","))
        for b in names:
            if b not in BASELINES:
                raise CliError(f"unknown baseline {b!r}; choose from {BASELINES}")
    report, res = build_report(data, schema, groups, cfg, args.delta, names)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.json:
        Path(args.json).write_text(text, encoding="utf-8")
    if args.format == "json":
        sys.stdout.write(text)
    else:
        sys.stdout.write(format_report(report, res.elapsed))
    return EXIT_OK if res.proven_optimal else EXIT_TIMEOUT


def cmd_msdd(args) -> int:
    data, schema, _ = _load(args)
    limit = None if args.time_limit is not None and args.time_limit <= 0 else args.time_limit
    res = msdd_enumerate(data, args.distance, args.min_support, limit)
    doc = {
        "distance": args.distance,
        "best_distance": res.best_distance,
        "best_term": res.best_term.to_list(),
        "description": schema.describe(res.best_term),
        "subgroups_considered": res.subgroups_considered,
        "subgroups_skipped_small": res.subgroups_skipped_small,
        "subgroups_skipped_one_sided": res.subgroups_skipped_one_sided,
        "visited": res.visited,
        "term_space": str(count_terms(data.n_features)),
        "completed": res.completed,
        "feasible": res.feasible,
    }
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_OK if res.completed else EXIT_TIMEOUT


def _population(args) -> Population:
    if getattr(args, "population", None):
        return Population.load(args.population)
    return plant(args.n, None, args.m, args.gamma, seed=args.seed, k=args.k)


def cmd_converge(args) -> int:
    if args.csv:
        data, _, _ = _load(args)
        name = Path(args.csv).stem
    else:
        pop = _population(args)
        data = sample(pop, args.n_mu, args.n_nu, seed=args.seed)
        name = "synth"
    seeds = [int(s) for s in args.seeds.split(",")]
    sizes = [int(s) for s in args.sizes.split(",")] if args.sizes else None
    ladder = convergence_run(data, _config(args), seeds, sizes, dataset_name=args.dataset_name or name)
    _emit(ladder.to_csv(), args.out)
    return EXIT_OK if all(r.proven_optimal for r in ladder.rows) else EXIT_TIMEOUT


def write_dataset_csv(data: BinaryDataset, path, group_values=("mu", "nu")) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([*data.feature_names, "group"])
        for row, g in zip(data.X.tolist(), data.groups.tolist()):
            w.writerow([*row, group_values[g]])


def cmd_synth(args) -> int:
    pop = _population(args)
    sample_seed = args.sample_seed if args.sample_seed is not None else args.seed
    data = sample(pop, args.n_mu, args.n_nu, seed=sample_seed)
    doc = pop.to_json()
    doc["true_msd"] = str(pop.true_msd)
    doc["true_argmax"] = pop.true_argmax.to_list()
    if args.population_out:
        Path(args.population_out).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    else:
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    if args.csv_out:
        write_dataset_csv(data, args.csv_out)
    return EXIT_OK


def cmd_export_mio(args) -> int:
    data, _, _ = _load(args)
    model = export_mio(data, _config(args), args.out, negations=args.negations)
    sys.stdout.write(
        f"wrote {args.out}: {len(model.variables)} variables, {len(model.constraints)} constraints\n"
    )
    return EXIT_OK


def _data_args(p, required=True):
    p.add_argument("--csv", required=required, help="input CSV with a header row")
    p.add_argument("--group", default="group", help="two-valued column splitting the samples")
    p.add_argument("--protected", default="", help="comma-separated protected columns")
    p.add_argument("--kinds", help="name=continuous|categorical|binary,... (default categorical)")
    p.add_argument("--kinds-file", help="JSON object mapping column names to kinds")


def _common_args(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--time-limit", type=float, default=600.0, help="seconds; <= 0 disables")
    p.add_argument("--min-support", type=int, default=10)


def _synth_args(p):
    p.add_argument("--population", help="population JSON (overrides --n/--k/--m/--gamma)")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--m", type=float, default=0.15)
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--n-mu", type=int, default=10_000)
    p.add_argument("--n-nu", type=int, default=10_000)


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="msdaudit", description="Maximum subgroup discrepancy audits.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("audit", help="find the most discrepant subgroup in a CSV")
    _data_args(p)
    _common_args(p)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--baselines", default="none", help="none, all, or a list from tv,linf,mmd")
    p.add_argument("--json", help="also write the JSON report here")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("msdd", help="enumerate subgroups with a restricted-sample distance")
    _data_args(p)
    _common_args(p)
    p.add_argument("--distance", choices=("tv", "mmd", "msd"), default="tv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_msdd)

    p = sub.add_parser("converge", help="subsampling ladder, written as CSV")
    _data_args(p, required=False)
    _common_args(p)
    _synth_args(p)
    p.add_argument("--seeds", default="0,1,2,3,4")
    p.add_argument("--sizes", help="comma-separated ladder (default: 5 geometric steps from 1000)")
    p.add_argument("--dataset-name")
    p.add_argument("--out")
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("synth", help="planted-subgroup population and a sample from it")
    _common_args(p)
    _synth_args(p)
    p.add_argument("--sample-seed", type=int)
    p.add_argument("--population-out")
    p.add_argument("--csv-out")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("export-mio", help="write the mixed-integer model in LP format")
    _data_args(p)
    _common_args(p)
    p.add_argument("--out", required=True)
    p.add_argument("--negations", action="store_true", help="add complemented literal columns")
    p.set_defaults(func=cmd_export_mio)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError, FileNotFoundError, OSError) as exc:
        sys.stderr.write(f"msdaudit {args.command}: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
