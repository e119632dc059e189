"""Command-line frontend.

Subcommands:
  verify   run the seeded verification suites, exit 0 iff all pass
  sweep    run a scenario config over its n grid, write CSV + JSON
  point    run a single chain length from a config, print the row as JSON
  oracle   dense-oracle equivalence check at one mode count

Exit codes for sweep/point: 0 success, 2 config/precondition failure,
3 numerical failure.  All outputs embed the tool version, a hash of the
canonical scenario encoding, and the seed, and are byte-deterministic for
fixed inputs.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__, discrimination, jw_oracle, quasifree, verification
from .errors import NumericalFailure, ValidationError


def _config_hash(scenario_dict: dict) -> str:
    canonical = json.dumps(scenario_dict, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]


def _load_scenario(path: str) -> discrimination.ScenarioConfig:
    try:
        with open(path) as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config {path} is not valid JSON: {exc}") from None
    return discrimination.scenario_from_dict(data)


def _meta(cfg: discrimination.ScenarioConfig, seed: int) -> dict:
    return {
        "tool": "qfdisc",
        "version": __version__,
        "config_hash": _config_hash(discrimination.scenario_to_dict(cfg)),
        "seed": seed,
    }


def cmd_sweep(args) -> int:
    cfg = _load_scenario(args.config)
    result = discrimination.run_sweep(cfg, jobs=args.jobs)
    meta = _meta(cfg, args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{cfg.label}_sweep.csv"
    json_path = out / f"{cfg.label}_sweep.json"
    discrimination.write_csv(result.rows, csv_path, meta)
    discrimination.write_json(discrimination.sweep_summary(result, meta), json_path)
    print(f"wrote {csv_path}")
    print(f"wrote {json_path}")
    print(f"superexponential_observed={result.superexponential_observed}")
    return 0


def cmd_point(args) -> int:
    cfg = _load_scenario(args.config)
    discrimination.validate_scenario(cfg)
    row = discrimination.run_point(cfg, args.n)
    payload = discrimination.json_safe(asdict(row))
    payload.update(_meta(cfg, args.seed))
    text = json.dumps(payload, indent=2, sort_keys=True)
    print(text)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{cfg.label}_point_n{args.n}.json").write_text(text + "\n")
    return 0


def cmd_verify(args) -> int:
    print(f"qfdisc verify: version={__version__} seed={args.seed} "
          f"max_d={args.max_d} instances={args.instances}")
    results = verification.run_all(
        seed=args.seed,
        max_d=args.max_d,
        instances=args.instances,
        perturb=args.self_test_perturb,
    )
    for item in results:
        print(item.line())
    failed = [item for item in results if not item.passed]
    print(f"{len(results) - len(failed)}/{len(results)} suites passed")
    return 1 if failed else 0


def cmd_oracle(args) -> int:
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(args.instances):
        mq = verification.random_hermitian_unit_spectrum(rng, args.d)
        mr = verification.random_hermitian_unit_spectrum(rng, args.d)
        sq = jw_oracle.dense_state(mq)
        sr = jw_oracle.dense_state(mr)
        alpha, beta = jw_oracle.dense_error_probs(sq, sr)
        worst = max(
            worst,
            abs(alpha - math.exp(quasifree.type1_log_error(sq.occupations))),
            abs(beta - math.exp(quasifree.type2_log_error(sr.occupations))),
        )
    passed = worst <= 1e-10
    status = "PASS" if passed else "FAIL"
    print(
        f"{status} oracle d={args.d} instances={args.instances} seed={args.seed} "
        f"version={__version__}: max deviation {worst:.3e} vs 1e-10"
    )
    return 0 if passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qfdisc",
        description="Number-threshold discrimination of quasi-free states "
        "on finite chain segments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run the seeded verification suites")
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--max-d", type=int, default=8, help="largest mode count")
    p_verify.add_argument("--instances", type=int, default=100)
    p_verify.add_argument(
        "--self-test-perturb",
        action="store_true",
        help="inject a deliberate formula error; verify must then fail",
    )
    p_verify.set_defaults(func=cmd_verify)

    p_sweep = sub.add_parser("sweep", help="run a scenario over its n grid")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--out", default="out")
    p_sweep.add_argument("--jobs", type=int, default=1)
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.set_defaults(func=cmd_sweep)

    p_point = sub.add_parser("point", help="run one chain length from a config")
    p_point.add_argument("--n", type=int, required=True)
    p_point.add_argument("--config", required=True)
    p_point.add_argument("--out", default=None)
    p_point.add_argument("--seed", type=int, default=0)
    p_point.set_defaults(func=cmd_point)

    p_oracle = sub.add_parser("oracle", help="dense oracle check at one mode count")
    p_oracle.add_argument("--d", type=int, required=True)
    p_oracle.add_argument("--instances", type=int, default=50)
    p_oracle.add_argument("--seed", type=int, default=0)
    p_oracle.set_defaults(func=cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
