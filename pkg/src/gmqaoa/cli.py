"""Command-line front end.

Exit codes: 0 success, 1 usage, 2 I/O or parse failure, 3 capacity or
degenerate estimate.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from .analytic import MODES, preoptimize_gm_angles, schedule_record
from .evt import DegenerateEstimateError, constant_angles, emin_estimate_quantile
from .harness import ExperimentConfig, fig2_csv, flat_csv, results_json, run_cell
from .hubo import (
    CapacityError,
    enumerate_spectrum,
    generate_maxcut_hypergraph,
    generate_sk,
    load_instance,
    save_instance,
    sigma_squared,
)
from .report import FIGURES, MissingDataError, figure_csv, figure_svg
from .search import OptBudget
from .simulator import prefix_states, success_probability
from .variational import optimize_layerwise

EXIT_USAGE, EXIT_IO, EXIT_COMPUTE = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_budget(p: argparse.ArgumentParser) -> None:
    d = OptBudget()
    p.add_argument("--beta-points", type=int, default=d.beta_points)
    p.add_argument("--gamma-points", type=int, default=d.gamma_points)
    p.add_argument("--refine-evals", type=int, default=d.refine_evals)
    p.add_argument("--multistart", type=int, default=d.multistart)


def _budget(args) -> OptBudget:
    return OptBudget(beta_points=args.beta_points, gamma_points=args.gamma_points,
                     refine_evals=args.refine_evals, multistart=args.multistart)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gmqaoa", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="write random HUBO instances")
    gen.add_argument("problem", choices=("sk", "maxcut"))
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--d", type=int, required=True)
    gen.add_argument("--count", type=int, default=1)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--maxcut-sign", type=int, choices=(1, -1), default=1)
    gen.add_argument("--out", default=None)

    run = sub.add_parser("run", help="run one method on one instance file")
    run.add_argument("instance")
    run.add_argument("--method", choices=("xm", "gm", "gma", "gmc"), required=True)
    run.add_argument("--depth", type=int, required=True)
    run.add_argument("--mode", choices=MODES, default="paper")
    _add_budget(run)

    ang = sub.add_parser("angles", help="analytic GM angles, no circuit simulation")
    ang.add_argument("--n", type=int)
    ang.add_argument("--sigma2", type=float)
    ang.add_argument("--instance")
    ang.add_argument("--depth", type=int, required=True)
    ang.add_argument("--mode", choices=MODES, default="paper")
    _add_budget(ang)

    sw = sub.add_parser("sweep", help="run an ensemble experiment from a JSON config")
    sw.add_argument("config")
    sw.add_argument("--out", default=None)
    sw.add_argument("--workers", type=int, default=None)

    rep = sub.add_parser("report", help="emit per-figure plot data from sweep results")
    rep.add_argument("results")
    rep.add_argument("--figure", choices=FIGURES, required=True)
    rep.add_argument("--svg", action="store_true")
    rep.add_argument("--out", default=None)
    return parser


def _out_dir(arg: str | None) -> Path:
    path = Path(arg or os.environ.get("GMQAOA_OUT", "."))
    path.mkdir(parents=True, exist_ok=True)
    return path


def cmd_gen(args) -> int:
    if args.count < 1:
        raise UsageError("--count must be >= 1")
    out = _out_dir(args.out)
    for i in range(args.count):
        try:
            if args.problem == "sk":
                inst = generate_sk(args.n, args.d, args.seed, i)
            else:
                inst = generate_maxcut_hypergraph(args.n, args.d, args.seed, i, args.maxcut_sign)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        path = out / f"instance_{i}.json"
        save_instance(inst, path)
        print(f"{path}\t{len(inst.terms)} terms\t{inst.label}")
    return 0


def _depth_check(depth: int) -> None:
    if depth < 1:
        raise UsageError("--depth must be >= 1")


def cmd_run(args) -> int:
    _depth_check(args.depth)
    inst = load_instance(args.instance)
    spectrum = enumerate_spectrum(inst)
    sigma2 = sigma_squared(inst)
    e_est = emin_estimate_quantile(math.sqrt(sigma2), inst.n)
    method = args.method.upper().replace("GMA", "GMa").replace("GMC", "GMc")
    out = {"method": method, "n": inst.n, "e_min": spectrum.e_min, "sigma2": sigma2,
           "e_min_est": e_est}
    if method in ("XM", "GM"):
        trace = optimize_layerwise(spectrum, method, args.depth, _budget(args))
        schedule, probs = trace.schedule, list(trace.p_success)
        out["evals"] = list(trace.evals)
    else:
        if method == "GMa":
            if sigma2 <= 0 or inst.n < 2:
                raise DegenerateEstimateError("analytic angles need n >= 2 and sigma2 > 0")
            schedule = preoptimize_gm_angles(inst.n, sigma2, args.depth, _budget(args), args.mode)
            out["mode"] = args.mode
        else:
            schedule = constant_angles(e_est, args.depth)
        probs = [success_probability(s, spectrum) for s in prefix_states(spectrum, schedule, "GM")[1:]]
    out.update(betas=list(schedule.betas), gammas=list(schedule.gammas), p_success=probs)
    print(json.dumps(out, indent=1))
    return 0


def cmd_angles(args) -> int:
    _depth_check(args.depth)
    if args.sigma2 is not None and args.instance is not None:
        raise UsageError("give either --sigma2 or --instance, not both")
    if args.instance is not None:
        inst = load_instance(args.instance)
        n, sigma2 = inst.n, sigma_squared(inst)
    elif args.sigma2 is not None:
        if args.n is None:
            raise UsageError("--n is required with --sigma2")
        n, sigma2 = args.n, args.sigma2
        if not sigma2 > 0:
            raise UsageError("--sigma2 must be positive")
    else:
        raise UsageError("one of --sigma2 or --instance is required")
    if n < 2:
        raise UsageError("--n must be >= 2")
    if not sigma2 > 0:
        raise DegenerateEstimateError("instance has zero spectral variance")
    schedule = preoptimize_gm_angles(n, sigma2, args.depth, _budget(args), args.mode)
    print(json.dumps(schedule_record(schedule, n, sigma2, args.mode), indent=1))
    return 0


def cmd_sweep(args) -> int:
    text = Path(args.config).read_text(encoding="utf-8")
    data = json.loads(text)
    workers = args.workers or int(os.environ.get("GMQAOA_WORKERS", "0") or 0)
    if workers:
        data["workers"] = workers
    try:
        config = ExperimentConfig.from_dict(data)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid config: {exc}") from exc
    out = _out_dir(args.out)
    cells = []
    for d in config.d_list:
        for n in config.n_list:
            if d > n:
                continue
            try:
                cells.append(run_cell(config, n, d))
            except Exception as exc:
                print(f"cell {config.problem} n={n} D={d} failed: {exc}", file=sys.stderr)
                return EXIT_COMPUTE if isinstance(exc, (CapacityError, DegenerateEstimateError, ValueError)) else EXIT_IO
            print(f"cell {config.problem} n={n} D={d} done", file=sys.stderr)
    (out / "results.json").write_text(results_json(config, cells, text), encoding="utf-8")
    (out / "results.csv").write_text(flat_csv(cells), encoding="utf-8")
    if {"XM", "GM"} <= set(config.methods):
        (out / "fig2.csv").write_text(fig2_csv(cells), encoding="utf-8")
    else:
        (out / "fig5.csv").write_text(figure_csv(cells, "fig5"), encoding="utf-8")
    return 0


def cmd_report(args) -> int:
    path = Path(args.results)
    if path.is_dir():
        path = path / "results.json"
    cells = json.loads(path.read_text(encoding="utf-8"))["cells"]
    out = _out_dir(args.out or str(path.parent))
    try:
        text = figure_csv(cells, args.figure)
        svg = figure_svg(cells, args.figure) if args.svg else None
    except MissingDataError as exc:
        raise UsageError(str(exc)) from exc
    (out / f"{args.figure}.csv").write_text(text, encoding="utf-8")
    if svg is not None:
        (out / f"{args.figure}.svg").write_text(svg, encoding="utf-8")
    print(out / f"{args.figure}.csv")
    return 0


COMMANDS = {"gen": cmd_gen, "run": cmd_run, "angles": cmd_angles, "sweep": cmd_sweep,
            "report": cmd_report}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"gmqaoa: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CapacityError, DegenerateEstimateError) as exc:
        print(f"gmqaoa: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"gmqaoa: cannot read input: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
