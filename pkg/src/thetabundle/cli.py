"""Command-line interface: JSON in, JSON out.

Exit codes: 0 success, 1 a verified property failed, 2 the input could not
be parsed, 3 the input was parsed but violates a mathematical invariant.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import brauer, checks, heisenberg, pairing, selfdual
from .errors import NotAlternating, ThetaError
from .fingroup import FiniteAbelianGroup

EXIT_OK, EXIT_FAILED, EXIT_PARSE, EXIT_INVARIANT = 0, 1, 2, 3


class ParseError(Exception):
    pass


def _load(path: str | None) -> dict:
    if path is None:
        raise ParseError("--input is required")
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        doc = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(str(exc)) from exc
    if not isinstance(doc, dict):
        raise ParseError("expected a JSON object")
    return doc


def _parse(build, doc):
    """Run a constructor, turning structural problems into parse errors."""
    try:
        return build(doc)
    except ThetaError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ParseError(f"malformed input: {exc!r}") from exc


# --------------------------------------------------------------------------
# commands


def classify_pairing(args) -> tuple[dict, int]:
    e = _parse(pairing.AlternatingPairing.from_json, _load(args.input))
    nf = pairing.mumford_normal_form(e)
    report = nf.to_json()
    report["index"] = nf.index
    report["group"] = e.group.to_json()
    report["radical_order"] = nf.radical.order
    return report, EXIT_OK


def heisenberg_cmd(args) -> tuple[dict, int]:
    if args.input:
        K = _parse(FiniteAbelianGroup.from_json, _load(args.input))
    else:
        K = FiniteAbelianGroup([args.max_k or 2])
    rep = heisenberg.standard_rep(K)
    e = heisenberg.commutator_pairing(K)
    report = {
        "group": K.to_json(),
        "dimension": rep.dimension,
        "irreducible": heisenberg.verify_irreducible(rep),
        "pairing": e.to_json(),
        "homogeneous_index": pairing.homogeneous_index(e),
    }
    if args.dump:
        report["representation"] = rep.dump()
    return report, EXIT_OK


def selfdual_orbits(args) -> tuple[dict, int]:
    max_rank = args.max_rank or 2
    reports = [selfdual.sp_orbits(r).to_json() for r in range(1, max_rank + 1)]
    D, Q = selfdual.build_block("dihedral"), selfdual.build_block("quaternion")
    groups = {"D": D, "Q": Q}
    for a in ("D", "Q"):
        for b in ("D", "Q"):
            groups[f"{a}.{b}"] = selfdual.central_product(groups[a], groups[b])
    signs = {name: {**G.to_json(), "classified_sign": selfdual.classify_sign(G)} for name, G in groups.items()}
    return {"orbit_reports": reports, "signs": signs}, EXIT_OK


def brauer_cmd(args) -> tuple[dict, int]:
    if args.input:
        doc = _load(args.input)
        model = _parse(lambda d: brauer.AbelianVarietyModel.from_json(d.get("model", d)), doc)
        klass = doc.get("class")
    else:
        g = 1 if args.g is None else args.g
        n = 2 if args.n is None else args.n
        model = brauer.AbelianVarietyModel(g, n, (brauer.standard_polarization(g),) if g else ())
        klass = None
    B = brauer.brauer_group(model)
    report = {"model": model.to_json(), "brauer_group": B.to_json()}
    if klass is not None:
        e = _parse(lambda m: brauer.pairing_from_coordinates(model.g, model.level, _upper(m)), klass)
        c = B.class_of(e)
        report["class"] = {
            "order": c.order(),
            "cyclic_blocks": [{"n": n, "d": d} for n, d in brauer.cyclic_decomposition(c)],
            **brauer.is_projectivization(e, model).to_json(),
        }
    return report, EXIT_OK


def _upper(matrix) -> list[int]:
    size = len(matrix)
    if any(len(row) != size for row in matrix):
        raise ValueError("class matrix must be square")
    for i in range(size):
        for j in range(size):
            if (matrix[i][j] + matrix[j][i]) or (i == j and matrix[i][i]):
                raise NotAlternating("class matrix is not alternating")
    return [matrix[i][j] for i in range(size) for j in range(i + 1, size)]


def verify(args) -> tuple[dict, int]:
    names = list(checks.SUITES) if args.suite == "all" else [args.suite]
    results = []
    for name in names:
        results.append(_run_suite(name, args).to_json())
    passed = all(r["passed"] for r in results)
    return {"passed": passed, "suites": results}, EXIT_OK if passed else EXIT_FAILED


def _run_suite(name: str, args) -> checks.SuiteResult:
    seed = args.seed
    if name == "heisenberg":
        return checks.heisenberg_suite(args.max_k or 12)
    if name == "uh-basis":
        return checks.uh_suite(args.max_k or 6)
    if name == "normal-form":
        return checks.normal_form_suite(seed=seed)
    if name == "weight1":
        return checks.weight1_suite(seed=seed)
    if name == "orbits":
        return checks.orbit_suite(args.max_rank or 3)
    if name == "signs":
        return checks.sign_suite(seed=seed, max_rank=args.max_rank or 3)
    if name == "brauer":
        return checks.brauer_suite(args.g, args.n)
    if name == "cocycle":
        return checks.cocycle_suite()
    if name == "obstruction":
        return checks.obstruction_suite()
    return checks.multiplicativity_suite(seed=seed)


COMMANDS = {
    "classify-pairing": classify_pairing,
    "heisenberg": heisenberg_cmd,
    "selfdual-orbits": selfdual_orbits,
    "brauer": brauer_cmd,
    "verify": verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thetabundle", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", help="JSON input file, '-' for stdin")
        p.add_argument("--output", help="write the JSON report here instead of stdout")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--max-k", type=int)
        p.add_argument("--max-rank", type=int)
        p.add_argument("--g", type=int)
        p.add_argument("--n", type=int)
        return p

    common(sub.add_parser("classify-pairing", help="normal form of an alternating pairing"))
    common(sub.add_parser("heisenberg", help="standard representation report for K")).add_argument(
        "--dump", action="store_true", help="include all representation matrices"
    )
    common(sub.add_parser("selfdual-orbits", help="Sp-orbits of weight -2 characters and block signs"))
    common(sub.add_parser("brauer", help="Brauer group of a model, optionally a class report"))
    p = common(sub.add_parser("verify", help="run a verification suite"))
    p.add_argument("suite", choices=sorted(checks.SUITES) + ["all"])
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, code = COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ThetaError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return code
