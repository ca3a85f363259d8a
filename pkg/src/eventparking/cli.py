"""Command-line pipeline: generate, solve, simulate, compare.

Every command is deterministic given its full flag set: rerunning with
the same flags and seed reproduces output files byte for byte.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from .arrivals import sample_arrivals
from .assign import build_problem, solve_exact, verify_assignment, write_assignment_csv
from .metrics import (
    compare_methods,
    failed_search_report,
    rerouting_time,
    write_comparison_csv,
    write_convergence_csv,
    write_failures_csv,
    write_profiles_csv,
    write_rerouting_csv,
)
from .scenario import (
    ScenarioError,
    generate_synthetic,
    load_scenario,
    save_scenario,
    with_strategy_mix,
)
from .sim import replication_streams, run_many


def _parse_mix(text: str) -> tuple[float, float, float, float]:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(
            f"--mix needs 4 comma-separated weights, got {text!r}"
        )
    try:
        mix = tuple(float(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"--mix: {exc}") from exc
    if any(w < 0 for w in mix):
        raise argparse.ArgumentTypeError("--mix weights must be >= 0")
    if not math.isclose(sum(mix), 1.0, rel_tol=0, abs_tol=1e-6):
        raise argparse.ArgumentTypeError(
            f"--mix weights must sum to 1, got {sum(mix)!r}"
        )
    return mix


def _fraction(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(
            f"--random-fraction must lie in [0, 1], got {value!r}"
        )
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eventparking",
        description=(
            "Assign event-bound vehicles to parking lots optimally and "
            "evaluate the optimum against simulated driver search."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a synthetic scenario file")
    gen.add_argument("--lots", type=int, default=21, help="number of lots")
    gen.add_argument("--capacity", type=int, default=3992, help="total spaces")
    gen.add_argument("--entries", type=int, default=12, help="entry links")
    gen.add_argument("--seed", type=int, default=7, help="generation seed")
    gen.add_argument("--name", default=None, help="scenario name")
    gen.add_argument("-o", "--out", required=True, help="output scenario file")
    gen.add_argument("--quiet", action="store_true", help="suppress summary")

    def common(cmd: argparse.ArgumentParser, runs_help: str | None = None) -> None:
        cmd.add_argument("--scenario", required=True, help="scenario file path")
        cmd.add_argument("--seed", type=int, default=0, help="experiment seed")
        if runs_help is not None:
            cmd.add_argument("--runs", type=int, default=10, help=runs_help)
        cmd.add_argument("--out", default=".", help="output directory")
        cmd.add_argument(
            "--arrival-mode",
            choices=("poisson", "uniform"),
            default="poisson",
            help="arrival-time model",
        )
        cmd.add_argument("--quiet", action="store_true", help="suppress summary")

    sol = sub.add_parser("solve", help="solve the optimal assignment")
    common(sol)

    simc = sub.add_parser("simulate", help="run seeded simulation replications")
    common(simc, runs_help="replication count")
    simc.add_argument(
        "--mix",
        type=_parse_mix,
        default=None,
        help="strategy-mix override as g1,g2,g3,g4 weights summing to 1",
    )
    simc.add_argument(
        "--random-fraction",
        type=_fraction,
        default=None,
        help="fraction of drivers picking lots uniformly at random",
    )

    cmp_ = sub.add_parser("compare", help="paired three-method comparison")
    common(cmp_, runs_help="replication count")
    return parser


def cmd_generate(args: argparse.Namespace) -> int:
    s = generate_synthetic(
        n_lots=args.lots,
        total_capacity=args.capacity,
        n_entries=args.entries,
        seed=args.seed,
        name=args.name,
    )
    save_scenario(s, args.out)
    if not args.quiet:
        print(
            f"wrote {s.name}: {len(s.lots)} lots, {s.total_capacity} spaces, "
            f"{len(s.entries)} entries -> {args.out}"
        )
    return 0


def cmd_solve(args: argparse.Namespace) -> int:
    s = load_scenario(args.scenario)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    arrivals_ss, _, _ = replication_streams(args.seed, 0)
    sched = sample_arrivals(s, arrivals_ss, args.arrival_mode)
    problem = build_problem(s, sched)
    assignment = solve_exact(problem)
    problems = verify_assignment(assignment, problem)
    if problems:
        print("assignment validation failed: " + "; ".join(problems), file=sys.stderr)
        return 1
    path = out_dir / "assignment.csv"
    write_assignment_csv(assignment, problem, path)
    if not args.quiet:
        total_min = assignment.total_cost_s / 60.0
        mean_min = total_min / max(problem.n_vehicles, 1)
        print(f"optimal total cost: {total_min:.1f} min")
        print(f"optimal mean per-vehicle cost: {mean_min:.1f} min")
        print(f"wrote {path}")
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    s = load_scenario(args.scenario)
    if args.mix is not None or args.random_fraction is not None:
        s = with_strategy_mix(
            s,
            args.mix if args.mix is not None else s.strategy_mix,
            args.random_fraction,
        )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    reps, convergence = run_many(s, args.runs, args.seed, args.arrival_mode)
    first = reps[0]
    rr = rerouting_time(first.run, first.optimal, first.problem)
    failures = failed_search_report([rep.run for rep in reps])
    write_convergence_csv(out_dir / "convergence.csv", convergence)
    write_failures_csv(out_dir / "failures.csv", failures)
    write_rerouting_csv(out_dir / "rerouting.csv", first.run, rr)
    write_profiles_csv(out_dir / "profiles.csv", first.profiles)
    if not args.quiet:
        _, mean_min, failed = convergence[-1]
        print(
            f"{args.runs} replication(s): mean rerouting {mean_min:.1f} min, "
            f"{failed} failed searches"
        )
        print(f"wrote {out_dir / 'convergence.csv'}")
        print(f"wrote {out_dir / 'failures.csv'}")
        print(f"wrote {out_dir / 'rerouting.csv'} (first replication)")
        print(f"wrote {out_dir / 'profiles.csv'} (first replication)")
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    s = load_scenario(args.scenario)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    results = compare_methods(s, args.runs, args.seed, args.arrival_mode)
    path = out_dir / "comparison.csv"
    write_comparison_csv(path, results)
    if not args.quiet:
        for row in results:
            print(
                f"{row.method}: mean rerouting {row.mean_rerouting_min:.1f} min, "
                f"{row.total_failures} failed searches"
            )
        print(f"wrote {path}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "generate": cmd_generate,
        "solve": cmd_solve,
        "simulate": cmd_simulate,
        "compare": cmd_compare,
    }
    try:
        return handlers[args.command](args)
    except (ScenarioError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
