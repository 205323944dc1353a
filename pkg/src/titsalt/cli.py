"""Command-line front end: ``titsalt decide`` and ``titsalt info``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time

from . import __version__
from .congruence import WHomomorphismUnavailable, build_whom
from .decision import FALSE, PROPERTIES, TRUE, UNDECIDED, Analysis, decide
from .fields import clear_denominators
from .finite_image import DEFAULT_CAP
from .io import GroupInput, SchemaError, parse_group

EXIT_CODES = {TRUE: 0, FALSE: 1, UNDECIDED: 2}
EXIT_ERROR = 3

REPORT_KEYS = ("tool_version", "input", "field", "n", "r", "property", "verdict", "reason",
               "certificate", "timings", "seed", "prime", "point", "cap", "fast_path_bound")


def run_decision(G: GroupInput, prop: str, *, prime: int | None = None, point: str | None = None,
                 cap: int | None = None, seed: int | None = None, fast_path_bound: int | None = None,
                 analysis: Analysis | None = None) -> dict:
    """Decide ``prop`` for the group and return a JSON-ready report."""
    ov = G.overrides
    prime = prime if prime is not None else ov.get("prime")
    point = point if point is not None else ov.get("point")
    cap = cap if cap is not None else ov.get("cap", DEFAULT_CAP)
    seed = seed if seed is not None else ov.get("seed", 0)
    t0 = time.perf_counter()
    an = analysis or Analysis(G.generators, prime=prime, point=point, cap=cap, seed=seed,
                              fast_path_bound=fast_path_bound)
    dec = decide(prop, an)
    timings = {k: round(v, 6) for k, v in an.timings.items()}
    timings["total"] = round(time.perf_counter() - t0, 6)
    report = {
        "tool_version": __version__,
        "input": G.name,
        "field": G.field.describe(),
        "n": G.n,
        "r": G.r,
        "property": prop,
        "verdict": dec.verdict,
        "reason": dec.reason,
        "certificate": dec.certificate,
        "timings": timings,
        "seed": seed,
        "prime": an._whom.p if an._whom is not None else prime,
        "point": an._whom.point if an._whom is not None else point,
        "cap": cap,
        "fast_path_bound": fast_path_bound,
    }
    assert tuple(report) == REPORT_KEYS
    return report


def exit_code(report: dict) -> int:
    return EXIT_CODES[report["verdict"]]


def _info(G: GroupInput) -> dict:
    ring = clear_denominators(G.generators)
    out = {"input": G.name, "field": G.field.describe(), "characteristic": G.field.characteristic,
           "n": G.n, "r": G.r, "mu": ring.mu_str, "overrides": G.overrides}
    try:
        psi = build_whom(G.generators, prime=G.overrides.get("prime"), point=G.overrides.get("point"),
                         seed=G.overrides.get("seed", 0))
        out["congruence"] = psi.to_json()
    except (WHomomorphismUnavailable, ValueError, ArithmeticError) as exc:
        out["congruence"] = {"error": str(exc)}
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="titsalt", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)
    d = sub.add_parser("decide", help="decide a property of a matrix group")
    d.add_argument("property", choices=PROPERTIES)
    d.add_argument("file")
    d.add_argument("--prime", type=int, help="reduction prime (characteristic-zero inputs)")
    d.add_argument("--point", help="substitution point for function-field inputs")
    d.add_argument("--cap", type=int, help=f"finite image size cap (default {DEFAULT_CAP})")
    d.add_argument("--seed", type=int, help="seed for randomized choices (default 0)")
    d.add_argument("--report", help="write the JSON report to this path")
    d.add_argument("--fast-path-bound", type=int, dest="fast_path_bound",
                   help="refute when the solvable radical of the image has larger index")
    i = sub.add_parser("info", help="print the parsed descriptor and congruence data")
    i.add_argument("file")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        G = parse_group(args.file)
        if args.command == "info":
            print(json.dumps(_info(G), indent=2))
            return 0
        report = run_decision(G, args.property, prime=args.prime, point=args.point, cap=args.cap,
                              seed=args.seed, fast_path_bound=args.fast_path_bound)
    except (OSError, SchemaError, WHomomorphismUnavailable, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    text = json.dumps(report, indent=2, default=str)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text + "\n")
    print(f"{report['property']}: {report['verdict']}" + (f" ({report['reason']})" if report["reason"] else ""))
    return exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
