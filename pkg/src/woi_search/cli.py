"""Command-line entry point: ``woi-search run|compare|validate``.

Exit codes: 0 success, 2 invalid config, 1 runtime or I/O failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict

from .config import ConfigError, load_config
from .experiment import ExperimentIOError, compare_modes, run_experiment

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2


def _overrides(args) -> dict:
    out = {}
    if getattr(args, "reps", None) is not None:
        out["repetitions"] = args.reps
    if getattr(args, "seed", None) is not None:
        out["seed"] = args.seed
    if getattr(args, "mode", None) is not None:
        out["mode"] = args.mode
    return out


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("config", nargs="?", help="JSON config file (or a preset name)")
    p.add_argument("--preset", help="case1 | case2 | single:<fn>:<woi>, e.g. single:ZDT1:0.5,0.5")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="woi-search", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log allocation rounds")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run repeated seeded searches and write artifacts")
    _add_common(p)
    p.add_argument("--mode", choices=["simultaneous", "sequential"])
    p.add_argument("--reps", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="directory for reports and CSV artifacts")

    p = sub.add_parser("compare", help="simultaneous vs sequential over matched seeds")
    _add_common(p)
    p.add_argument("--reps", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="directory for comparison.csv")

    p = sub.add_parser("validate", help="check a config and print it with defaults applied")
    _add_common(p)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        spec = load_config(args.config, args.preset, _overrides(args))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    base = spec.base
    try:
        if args.command == "validate":
            print(json.dumps({
                "concepts": [c.id for c in base.portfolio],
                "woi": list(base.woi.limits),
                "target_l": base.target_l,
                "budget": base.total_generation_budget,
                "mode": base.mode,
                "seed": base.effective_seed,
                "repetitions": spec.repetitions,
                "ga": asdict(base.ga),
                "policy": {"gq0": base.policy.gq0, "quotas": list(base.policy.quotas),
                           "category_sizes": base.policy.category_sizes},
            }, indent=2))
            return EXIT_OK

        if args.command == "run":
            result = run_experiment(spec, out_dir=args.out)
            print(f"{'metric':<28}{'mean':>12}{'median':>12}{'min':>12}{'max':>12}")
            for name, s in result.summary.items():
                print(f"{name:<28}{s.mean:>12.2f}{s.median:>12.2f}{s.min:>12.2f}{s.max:>12.2f}")
            for i, r in enumerate(result.reports):
                print(f"run {i}: seed={r.seed} satisficing={r.satisficing_ids} stop={r.stop_reason}")
            return EXIT_OK

        comparison = compare_modes(spec, out_dir=args.out)
        print(f"{'concept':<12}{'simultaneous':>14}{'sequential':>14}")
        for cid, sim, seq in comparison.rows:
            print(f"{cid:<12}{sim:>14.1f}{seq:>14.1f}")
        print(f"ratio simultaneous/sequential = {comparison.ratio:.3f}")
        return EXIT_OK
    except ExperimentIOError as exc:
        print(f"I/O error: {exc}; partial outputs: {exc.manifest}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
