"""Command-line front end.

    fanoqh analyze "dp(1)*pdp(1)"        # or a polytope JSON file
    fanoqh verify-lemma --trials 1000 --max-n 12
    fanoqh generate "pdp(1)" -o pdp1.json
    fanoqh predicates pdp1.json

Every flag can also be set through ``FANOQH_<FIELD>`` environment variables
(e.g. ``FANOQH_TOLERANCE_RESIDUAL``); flags win.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .config import Config
from .hessian import structured_det
from .polytope import (
    LatticePolytope,
    PolytopeError,
    is_facet_symmetric,
    is_reflexive,
    is_smooth,
    parse_family,
    realize,
)
from .verify import DEGENERATE, INCONCLUSIVE, SEMISIMPLE, analyze, analyze_polytope, lemma_trials

EXIT_CODES = {SEMISIMPLE: 0, DEGENERATE: 2, INCONCLUSIVE: 3}


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--tol-residual", type=float, dest="tolerance_residual")
    p.add_argument("--tol-dedupe", type=float, dest="tolerance_dedupe")
    p.add_argument("--deg-threshold", type=float, dest="degeneracy_threshold")
    p.add_argument("--precision", choices=["double", "high"])
    p.add_argument("--max-dim", type=int, dest="max_dim")
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=["json", "text"], dest="output")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="fanoqh", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="certify non-degeneracy of all critical points")
    a.add_argument("input", help="family expression such as 'seg*dp(1)' or a polytope JSON file")

    v = sub.add_parser("verify-lemma", parents=[common], help="closed-form vs dense determinant property test")
    v.add_argument("--trials", type=int, default=1000)
    v.add_argument("--max-n", type=int, default=12)
    v.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)

    g = sub.add_parser("generate", parents=[common], help="write the polytope of a family expression")
    g.add_argument("expr")
    g.add_argument("-o", "--output-file")

    q = sub.add_parser("predicates", parents=[common], help="reflexive / smooth / facet-symmetric")
    q.add_argument("path")
    return parser


def _config(args) -> Config:
    keys = ("tolerance_residual", "tolerance_dedupe", "degeneracy_threshold", "precision", "max_dim", "seed", "output")
    return Config.from_env(**{k: getattr(args, k, None) for k in keys})


def _load_polytope(path: str) -> LatticePolytope:
    with open(path) as fh:
        return LatticePolytope.from_json(fh.read())


def _fail(msg: str) -> int:
    print(f"fanoqh: {msg}", file=sys.stderr)
    return 1


def cmd_analyze(args, config: Config) -> int:
    src = args.input
    if os.path.exists(src) or src.endswith(".json"):
        report = analyze_polytope(_load_polytope(src), config)
    else:
        expr = parse_family(src)
        if expr.dim > config.max_dim:
            return _fail(f"dimension {expr.dim} exceeds --max-dim {config.max_dim}")
        report = analyze(expr, config)
    print(report.to_json() if config.output == "json" else report.to_text())
    if report.verdict is None:
        return _fail(report.error or "invalid input")
    return EXIT_CODES[report.verdict]


def _corrupted_det(p):
    return structured_det(p) * (1 + 1e-6)


def cmd_verify_lemma(args, config: Config) -> int:
    if args.trials < 1 or args.max_n < 1:
        return _fail("--trials and --max-n must be positive")
    det_fn = _corrupted_det if args.corrupt else structured_det
    summary = lemma_trials(args.trials, args.max_n, config.seed, det_fn=det_fn)
    if config.output == "json":
        print(json.dumps(summary.to_dict(), indent=1))
    else:
        print(
            f"{summary.trials} trials, n <= {summary.max_n}, seed {summary.seed}: "
            f"worst det rel error {summary.worst_det_rel:.3e}, worst eigenvalue rel error {summary.worst_eig_rel:.3e} "
            f"-> {'PASS' if summary.passed else 'FAIL'}"
        )
    return 0 if summary.passed else 2


def cmd_generate(args, config: Config) -> int:
    poly = realize(parse_family(args.expr))
    text = poly.to_json()
    if args.output_file:
        with open(args.output_file, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def cmd_predicates(args, config: Config) -> int:
    poly = _load_polytope(args.path)
    poly.require_interior_origin()
    reflexive = is_reflexive(poly)
    smooth = is_smooth(poly) if reflexive else None
    symmetric = is_facet_symmetric(poly)
    if config.output == "json":
        print(json.dumps({
            "reflexive": reflexive,
            "smooth": smooth,
            "facet_symmetric": symmetric,
            "facets": [{"normal": list(f.normal), "offset": f.offset} for f in poly.facets],
        }, indent=1))
    else:
        def fmt(b):
            return "n/a" if b is None else str(b).lower()

        print(f"reflexive={fmt(reflexive)} smooth={fmt(smooth)} facet_symmetric={fmt(symmetric)}")
        for f in poly.facets:
            print(f"  <x, {list(f.normal)}> <= {f.offset}")
    return 0


COMMANDS = {
    "analyze": cmd_analyze,
    "verify-lemma": cmd_verify_lemma,
    "generate": cmd_generate,
    "predicates": cmd_predicates,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _config(args)
        return COMMANDS[args.command](args, config)
    except (PolytopeError, OSError, ValueError) as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
