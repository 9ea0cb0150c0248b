"""Command-line front end.

Exit status: 0 success/valid/ok, 1 falsified/rejected, 2 usage or input
error, 3 size bound exceeded.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from dataclasses import dataclass
from pathlib import Path

from . import fixtures, modelfile
from .modelfile import ModelFormatError
from .proof import SCHEMAS, ProofError, check_derivation, get_schema, lattice_edges, load_derivation, SYSTEMS
from .search import (
    DEFAULT_SEED, ITEM_ORDER, MAX_EXHAUSTIVE, MAX_SAMPLED, find_countermodel, paper_fixture_suite, search_formula,
)
from .semantics import (
    BoundExceeded, Exhaustive, PropertySet, Sample, UnknownState, evaluate, frame_label, property_report, truth_set,
)
from .syntax import FormulaSyntaxError, has_box, parse, print_formula
from .transform import close_under, complementation, star_translate, supplementation

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_BOUND = 0, 1, 2, 3


@dataclass(frozen=True)
class Config:
    seed: int = DEFAULT_SEED
    exhaustive_max: int = MAX_EXHAUSTIVE
    sample_max: int = MAX_SAMPLED
    output: str = "human"
    verbose: bool = False

    @classmethod
    def from_args(cls, args: argparse.Namespace, environ=os.environ) -> "Config":
        seed = DEFAULT_SEED
        if environ.get("CONTINGENT_SEED"):
            seed = int(environ["CONTINGENT_SEED"])
        if getattr(args, "seed", None) is not None:
            seed = args.seed
        return cls(seed=seed, output=args.format, verbose=args.verbose)


class UsageError(Exception):
    pass


def _formula(text: str):
    try:
        return parse(text)
    except FormulaSyntaxError as e:
        raise UsageError(f"formula {text!r}: {e}") from None


def cmd_eval(args, cfg: Config, out) -> int:
    model = modelfile.load(args.model)
    f = _formula(args.formula)
    if args.state is None:
        names = model.frame.names(truth_set(model, f))
        print("{" + " ".join(names) + "}", file=out)
        return EXIT_OK if len(names) == model.frame.size else EXIT_FALSE
    value = evaluate(model, args.state, f)
    if cfg.output == "machine":
        print(f"state={args.state} formula={print_formula(f).replace(' ', '')} value={str(value).lower()}", file=out)
    else:
        print(str(value).lower(), file=out)
    if cfg.verbose:
        print("truth set: {" + " ".join(model.frame.names(truth_set(model, f))) + "}", file=out)
    return EXIT_OK if value else EXIT_FALSE


def cmd_props(args, cfg: Config, out) -> int:
    model = modelfile.load(args.model)
    report = property_report(model.frame)
    label = frame_label(model.frame)
    flags = " ".join(f"{k}={str(v).lower()}" for k, v in report.items())
    print(flags + (f" {label}" if label else ""), file=out)
    return EXIT_OK


def cmd_check(args, cfg: Config, out) -> int:
    d = load_derivation(args.derivation)
    result = check_derivation(d)
    if cfg.output == "machine":
        if result:
            print(f"verdict=ok lines={len(d.lines)} system={d.system}", file=out)
        else:
            print(f"verdict=error line={result.line} reason={result.reason!r}", file=out)
    else:
        print(result, file=out)
    return EXIT_OK if result else EXIT_FALSE


def _safe_name(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9_-]+", "_", text).strip("_") or "formula"


def cmd_search(args, cfg: Config, out) -> int:
    props = PropertySet.parse(args.props)
    mode = Sample(args.sample, cfg.seed) if args.sample else Exhaustive()
    limit = cfg.sample_max if args.sample else cfg.exhaustive_max
    if args.max > limit:
        raise BoundExceeded(f"--max {args.max} exceeds the {mode} bound of {limit}")
    min_size = args.min_size or 1
    if args.target in SCHEMAS or args.target in {s.display for s in SCHEMAS.values()}:
        report = find_countermodel(get_schema(args.target), props, args.max, mode,
                                   min_size=min_size, workers=args.workers)
    else:
        report = search_formula(_formula(args.target), props, args.max, mode,
                                min_size=min_size, workers=args.workers)
    print(report.machine(timings=args.timings) if cfg.output == "machine" else report.human(), file=out)
    if report.falsified:
        path = Path(args.out or f"{_safe_name(report.target)}.witness.model")
        header = f"# falsifies {print_formula(report.formula)} at {report.state}\n"
        path.write_text(header + modelfile.dumps(report.witness), encoding="utf-8")
        if cfg.output != "machine":
            print(f"witness written to {path}", file=out)
        return EXIT_FALSE
    return EXIT_OK


def cmd_transform(args, cfg: Config, out) -> int:
    if args.which == "star":
        f = _formula(args.input)
        if has_box(f):
            raise UsageError("star translation needs an L(Δ) formula (no B)")
        print(print_formula(star_translate(f)), file=out)
        return EXIT_OK
    model = modelfile.load(args.input)
    if args.which == "supplement":
        result = supplementation(model)
    elif args.which == "complement":
        result = complementation(model)
    else:
        result = close_under(model, PropertySet.parse(args.props or ""))
    text = modelfile.dumps(result)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return EXIT_OK


def cmd_fixtures(args, cfg: Config, out) -> int:
    if args.action == "list":
        for name in fixtures.MODELS:
            print(f"model       {fixtures.path('models', name)}", file=out)
        for name in fixtures.DERIVATIONS:
            print(f"derivation  {fixtures.path('derivations', name)}", file=out)
        return EXIT_OK
    if args.action == "lattice":
        for weak, strong in lattice_edges():
            print(f"{SYSTEMS[weak].display} -> {SYSTEMS[strong].display}", file=out)
        return EXIT_OK
    if args.action == "items":
        results = paper_fixture_suite(ITEM_ORDER, samples=args.samples, seed=cfg.seed)
        for r in results:
            print(r.machine(timings=args.timings) if cfg.output == "machine" else r.human(), file=out)
        return EXIT_OK if all(r.passed for r in results) else EXIT_FALSE
    from .acceptance import run_all

    results = run_all(samples=args.samples, seed=cfg.seed)
    for r in results:
        print(r.machine() if cfg.output == "machine" else r.line(), file=out)
    return EXIT_OK if all(r.ok for r in results) else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "machine"), default="human")
    common.add_argument("--seed", type=int, default=None, help=f"RNG seed (default {DEFAULT_SEED} or $CONTINGENT_SEED)")
    common.add_argument("--verbose", "-v", action="store_true")

    parser = argparse.ArgumentParser(prog="contingent", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate a formula in a model")
    p.add_argument("model")
    p.add_argument("formula")
    p.add_argument("state", nargs="?", help="state name; omit to print the truth set")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("props", parents=[common], help="report frame properties m, c, n, z")
    p.add_argument("model")
    p.set_defaults(func=cmd_props)

    p = sub.add_parser("check", parents=[common], help="check a derivation file")
    p.add_argument("derivation")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("search", parents=[common], help="bounded countermodel search")
    p.add_argument("target", help="schema name (dC, sdM, dM', ...) or formula text")
    p.add_argument("--props", default="", help="frame class flags, e.g. mc")
    p.add_argument("--max", type=int, default=2)
    p.add_argument("--min-size", type=int, default=None)
    how = p.add_mutually_exclusive_group()
    how.add_argument("--exhaustive", action="store_true", help="enumerate every frame (default)")
    how.add_argument("--sample", type=int, metavar="N", help="sample N random frames instead")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="witness model file")
    p.add_argument("--timings", action="store_true", help="add elapsed_ms to machine output")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("transform", parents=[common], help="supplement, complement, close or star-translate")
    p.add_argument("which", choices=("supplement", "complement", "close", "star"))
    p.add_argument("input", help="model file, or formula text for star")
    p.add_argument("--props", help="flags for close")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("fixtures", parents=[common], help="shipped fixtures and the acceptance suite")
    p.add_argument("action", choices=("run-all", "items", "list", "lattice"))
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--timings", action="store_true")
    p.set_defaults(func=cmd_fixtures)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = Config.from_args(args)
    try:
        return args.func(args, cfg, out)
    except BoundExceeded as e:
        print(f"contingent: bound exceeded: {e}", file=sys.stderr)
        return EXIT_BOUND
    except (UsageError, ModelFormatError, ProofError, UnknownState, ValueError) as e:
        print(f"contingent: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
