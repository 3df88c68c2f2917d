"""Command line entry point: ``pldg generate | run | verify | render``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .experiment import (
    GENERATORS,
    ExperimentConfig,
    GenerationExhausted,
    dumps,
    generate,
    load_points,
    points_json,
    run_experiment,
    run_trial,
    write_atomic,
)
from .render import render_record

log = logging.getLogger("pldg")


def _config_flags(p: argparse.ArgumentParser, seed_required: bool) -> None:
    p.add_argument("--seed", type=int, required=seed_required, default=0)
    p.add_argument("--n", type=int, default=50, help="points per instance")
    p.add_argument("--region", type=float, default=3.0, help="square side, in radio ranges")
    p.add_argument("--generator", choices=GENERATORS, default="uniform")
    p.add_argument("--variant", default="both", help="PLDG, PLDG' (or pldg-prime), or both")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--clearance", type=float, default=10.0,
                   help="multiple of 1e-9 kept clear of every decision threshold")


def _config(args) -> ExperimentConfig:
    return ExperimentConfig(seed=args.seed, n=args.n, region=args.region,
                            generator=args.generator, variant=args.variant,
                            trials=args.trials, clearance=args.clearance)


def cmd_generate(args) -> int:
    config = _config(args)
    ps = generate(config, args.trial)
    text = dumps(points_json(ps))
    if args.output:
        write_atomic(Path(args.output), text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_run(args) -> int:
    config = _config(args)
    status = run_experiment(config, args.out, svg=args.svg, jobs=args.jobs)
    print(f"{config.trials} trial(s) written to {args.out}: {'FAIL' if status else 'ok'}")
    return status


def cmd_verify(args) -> int:
    """Re-run every record from its stored points and compare with what was stored."""
    status = 0
    for path in args.files:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        ps = load_points(path)
        cfg = data.get("config") or {"seed": ps.seed or 0, "n": len(ps)}
        config = ExperimentConfig(**{**cfg, "n": len(ps),
                                     **({"variant": args.variant} if args.variant else {})})
        record = run_trial(config, data.get("trial", 0), ps=ps)
        ok = record["verdict"]["passed"]
        if "pldg_edges" in data:
            for variant, edges in record["pldg_edges"].items():
                if variant in data["pldg_edges"] and data["pldg_edges"][variant] != edges:
                    log.error("%s: stored %s edges differ from re-run", path, variant)
                    ok = False
        print(f"{path}: {'ok' if ok else 'FAIL'}")
        status |= 0 if ok else 1
    return status


def cmd_render(args) -> int:
    data = json.loads(Path(args.file).read_text(encoding="utf-8"))
    if "pldg_edges" not in data:
        ps = load_points(args.file)
        config = ExperimentConfig(seed=ps.seed or 0, n=len(ps), variant=args.variant or "PLDG'")
        data = run_trial(config, 0, ps=ps)
    out = render_record(data, args.output, variant=args.variant and _variant_key(args.variant))
    print(out)
    return 0


def _variant_key(name: str) -> str:
    from .protocol import Variant

    return Variant.parse(name).value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pldg", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write one valid point set as JSON")
    _config_flags(p, seed_required=True)
    p.add_argument("--trial", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("run", help="generate, run, verify; one JSON record per trial")
    _config_flags(p, seed_required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--svg", action="store_true", help="also render one SVG per trial")
    p.add_argument("--jobs", type=int, default=1, help="trials run in parallel processes")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="re-run and re-verify stored records or point sets")
    p.add_argument("files", nargs="+")
    p.add_argument("--variant", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("render", help="render a record (or point set) to SVG")
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--variant", default=None)
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, GenerationExhausted) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
