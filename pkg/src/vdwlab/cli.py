"""Command-line driver.

Every verb builds an ExperimentConfig, runs it, prints the summary and
(optionally) writes records.jsonl / summary.csv / replay.json plus any
colouring artifact under --out.  Exit codes: 0 success, 2 validation
failure, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import ConfigError, ExperimentConfig
from .experiments import BudgetExceeded, run
from .lattice import EnumerationBudgetError

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_BUDGET = 3

# flag name -> (type, help); every verb shares this vocabulary
_PARAM_FLAGS: dict[str, tuple] = {
    "N": (int, "interval length"),
    "D": (int, "torus dimension"),
    "r": (int, "forbidden-progression exponent parameter"),
    "rho": (float, "annulus outer radius"),
    "width": (float, "annulus width"),
    "M": (int, "number of annulus centres"),
    "Q": (float, "coefficient bound"),
    "B": (float, "gap exponent"),
    "L": (float, "base box length"),
    "s": (int, "number of quadratic-form variables"),
    "m": (int, "block size / matrix size"),
    "trials": (int, "number of Monte-Carlo trials"),
    "d": (int, "progression difference / digit bound"),
    "d_max": (int, "largest difference scanned by the verifier"),
    "X": (float, "orbit length / weight scale"),
    "k": (int, "target progression length / reference index"),
    "c2": (float, "diophantine exponent knob"),
    "c1": (float, "structure refinement exponent knob"),
    "n_digits": (int, "digit count for the digit construction"),
    "n_samples": (int, "extra multiplier samples for condition one"),
    "d_limit": (int, "cap on differences tested by condition two"),
    "family_dim": (int, "max dimension of the coordinate subspace family"),
    "xi_max": (int, "frequency box radius for the coverage certificate"),
    "grid": (int, "grid points per dimension for the coverage certificate"),
    "grid_b": (int, "adversarial grid points per linear coordinate"),
    "grid_c": (int, "adversarial grid points for the constant term"),
    "budget": (int, "attempt / flip budget"),
    "construction": (str, "colouring construction name"),
    "colouring": (str, "path to a colouring file"),
    "witness": (str, "path to a witness JSON file"),
    "mode": (str, "search mode: best | witness"),
    "param_grid": (str, "JSON list of parameter dicts for search"),
    "forms": (int, "number of random forms"),
    "xi_count": (int, "number of frequencies"),
    "eta": (float, "plateau cutoff parameter"),
    "delta": (float, "interval majorant scale / determinant threshold"),
    "deltas": (str, "comma-separated determinant thresholds"),
    "n": (int, "matrix dimension"),
    "fixed_diag": (bool, "also run the fixed-diagonal determinant tail"),
    "diag": (str, "comma-separated fixed diagonal entries"),
    "box_X": (float, "box-cutoff scale"),
    "box_D": (int, "box-cutoff dimension"),
    "ball_D": (int, "ball-minorant dimension"),
    "ball_rho": (float, "ball-minorant radius"),
    "ball_k": (int, "ball-minorant bandwidth override"),
}

_VERBS = [
    "generate",
    "verify",
    "verify-witness",
    "centres",
    "dio-check",
    "bohr",
    "quadgap",
    "dettail",
    "cliquepack",
    "cutoffs",
    "compare-st",
    "blue-freq",
    "search",
    "reference",
]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vdwlab",
        description="Torus-annulus colourings of [N] and their verification toolkit",
    )
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in _VERBS:
        p = sub.add_parser(verb)
        p.add_argument("--seed", type=int, default=0, help="64-bit experiment seed")
        p.add_argument("--toy", action="store_true",
                       help="acknowledge overriding formula defaults")
        p.add_argument("--out", type=str, default=None, help="output directory")
        p.add_argument("--config", type=str, default=None,
                       help="JSON file of parameter key/values (flags win)")
        for name, (typ, helptext) in _PARAM_FLAGS.items():
            flag = "--" + name.replace("_", "-")
            if typ is bool:
                p.add_argument(flag, dest=name, action="store_true", default=None,
                               help=helptext)
            else:
                p.add_argument(flag, dest=name, type=typ, default=None, help=helptext)
    return parser


def _collect_params(args) -> dict:
    params = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            params.update(json.load(fh))
    for name in _PARAM_FLAGS:
        value = getattr(args, name, None)
        if value is not None:
            params[name] = value
    if isinstance(params.get("deltas"), str):
        params["deltas"] = [float(x) for x in params["deltas"].split(",")]
    if isinstance(params.get("diag"), str):
        params["diag"] = [float(x) for x in params["diag"].split(",")]
    return params


def _write_outputs(result, out_dir: str) -> None:
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    (path / "records.jsonl").write_text(result.jsonl(), encoding="utf-8")
    (path / "summary.csv").write_text(result.csv(), encoding="utf-8")
    (path / "replay.json").write_text(
        json.dumps(result.config.replay_stanza(), sort_keys=True, indent=2) + "\n",
        encoding="utf-8",
    )
    col = result.artifacts.get("colouring")
    if col is not None:
        col.save(path / "colouring.vdwf")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = ExperimentConfig(
            experiment=args.verb,
            seed=args.seed,
            toy_ack=args.toy,
            output=args.out,
            params=_collect_params(args),
        )
        result = run(cfg)
    except (ConfigError, ValueError, KeyError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (BudgetExceeded, EnumerationBudgetError) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    print(json.dumps({"summary": result.summary,
                      "config_hash": cfg.config_hash()},
                     sort_keys=True, default=str))
    if args.out:
        _write_outputs(result, args.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
