#!/usr/bin/env python3
"""
CLI Runner - command-line front end for ring sequence and compressing map analysis.

Verdicts are reported in the structured output. The exit code only says whether
the computation ran (0), the input was invalid (2), a budget was exceeded (3) or
the run stopped on an interrupt or an internal consistency failure (1).
"""

import argparse
import json
import sys
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from algebra.coord_poly import CoordPoly
from algebra.errors import BudgetExceededError, ConsistencyError
from algebra.galois_ring import GaloisCtx, parse_elem_spec, parse_poly_spec
from algebra.primitivity import CONSTRAINTS, analyze, analyze_ctx, enumerate_counts, search
from algebra.residue_ring import RingCtx
from analysis import compress, injectivity
from analysis.partition import closure_partition, relation
from analysis.sequences import export_sequence, lfsr_sequence, trace_sequence, value_set
from config.settings import ENUMERATION_CONFIG, OUTPUT_CONFIG
from schemas.request_schema import CommandRequest
from utils.file_utils import write_output
from utils.logger import get_logger, set_verbose

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID = 2
EXIT_BUDGET = 3


class OutputFormatter:
    """Handle different output formats for CLI results."""

    @staticmethod
    def format_json(result: Dict[str, Any]) -> str:
        return json.dumps(result, indent=OUTPUT_CONFIG["indent"], sort_keys=True, default=str) + "\n"

    @staticmethod
    def format_text(result: Dict[str, Any], prefix: str = "") -> str:
        """Format a result as key: value lines, nested records indented."""
        output = []
        for key in sorted(result):
            value = result[key]
            if isinstance(value, dict):
                output.append(f"{prefix}{key}:")
                output.append(OutputFormatter.format_text(value, prefix + "  ").rstrip("\n"))
            elif isinstance(value, list):
                output.append(f"{prefix}{key}: {json.dumps(value)}")
            else:
                output.append(f"{prefix}{key}: {value}")
        return "\n".join(line for line in output if line) + "\n"

    @classmethod
    def render(cls, result: Dict[str, Any], output_format: str) -> str:
        if output_format == "json":
            return cls.format_json(result)
        if output_format == "text":
            return cls.format_text(result)
        raise ValueError(f"Unsupported output format: {output_format}")


# ----------------------------------------------------------------------
# helpers


def _ring(request: CommandRequest) -> RingCtx:
    return RingCtx(request.p, request.e)


def _ctx(request: CommandRequest) -> GaloisCtx:
    return GaloisCtx.from_spec(_ring(request), request.poly)


def _elem(ctx: GaloisCtx, text: Optional[str]):
    return ctx.one if text is None else parse_elem_spec(text, ctx.n, ctx.ring)


def _opt_poly(text: Optional[str], ring: RingCtx) -> Optional[CoordPoly]:
    return None if text is None else CoordPoly.parse(text, ring.p, ring.e)


def _map_record(psi: compress.CompressingMap) -> Dict[str, Any]:
    record = {"table": list(psi.table), "alphabet_size": psi.alphabet_size, "provenance": psi.provenance}
    if psi.alphabet_size <= psi.ring.p:
        record["poly"] = str(psi.coord_poly())
    return record


# ----------------------------------------------------------------------
# subcommands


def run_primitive(request: CommandRequest, args) -> Dict[str, Any]:
    if request.action == "check":
        ring = _ring(request)
        return analyze(ring, parse_poly_spec(request.poly, ring)).model_dump()
    if request.action == "search":
        ctx = search(request.p, request.e, request.n, request.constraint, start=args.start)
        return {"poly": ctx.format_poly(), "description": ctx.describe_poly(),
                "report": analyze_ctx(ctx).model_dump()}
    report = enumerate_counts(request.p, request.e, request.n, workers=request.workers)
    return {**report.model_dump(), "counts": list(report.counts())}


def run_seq(request: CommandRequest, args) -> Dict[str, Any]:
    ctx = _ctx(request)
    if request.action == "period":
        period = ctx.period()
        expected = ctx.p ** (ctx.e - 1) * (ctx.q - 1)
        return {"poly": ctx.format_poly(), "period": period, "maximal_period": expected,
                "is_primitive": ctx.is_primitive}
    if args.lfsr is not None:
        seq = lfsr_sequence(ctx, [int(v) for v in args.lfsr.split(",")])
    else:
        seq = trace_sequence(ctx, _elem(ctx, request.alpha))
    if request.action == "values":
        values = value_set(seq)
        return {"poly": ctx.format_poly(), "alpha": list(_elem(ctx, request.alpha)),
                "values": values, "count": len(values)}
    if args.export:
        return {"_raw": export_sequence(seq, args.export)}
    return {"poly": ctx.format_poly(), "period": seq.period, "samples": list(seq.samples)}


def _build_map(request: CommandRequest, args) -> compress.CompressingMap:
    ring = _ring(request)
    if args.family is None:
        if request.map_spec is None:
            raise ValueError("map build needs --map or --family")
        return compress.parse_map_spec(request.map_spec, ring)
    f2 = _opt_poly(args.f2, ring)
    if args.family == "str":
        if args.f0 is None:
            raise ValueError("--family str needs --f0")
        f1 = _opt_poly(args.f1, ring) or CoordPoly.constant(1, ring.p, ring.e)
        return compress.family_str(ring, _opt_poly(args.f0, ring), f1,
                                   f2 or CoordPoly.constant(0, ring.p, ring.e))
    if args.family == "weak-pow":
        return compress.family_weak(ring, "pow", f2=f2, ell=args.ell, f1=_opt_poly(args.f1, ring))
    if args.g0 is None:
        raise ValueError("--family weak-lin needs --g0")
    return compress.family_weak(ring, "lin", f2=f2, ell=args.ell, g0=_opt_poly(args.g0, ring),
                                g1=_opt_poly(args.g1, ring), k=args.k)


def run_map(request: CommandRequest, args) -> Dict[str, Any]:
    if request.action == "build":
        return _map_record(_build_map(request, args))
    ctx = _ctx(request)
    if request.action == "census":
        return injectivity.census(ctx, request.alphabet, workers=request.workers,
                                  verify_with_oracle=args.verify, sample=args.sample,
                                  seed=request.seed).model_dump()

    psi = compress.parse_map_spec(request.map_spec, ctx.ring)
    verdict = injectivity.oracle_injective(ctx, psi)
    if request.action == "classify":
        result = {"oracle": verdict.model_dump()}
        result["failure"] = None if verdict.injective else \
            injectivity.classify_failure(ctx, psi, verdict=verdict).model_dump()
        return result

    result = {"oracle": verdict.model_dump(), "criterion": None}
    if not injectivity.delta_sq_in_prime_field(ctx):
        criterion = injectivity.criterion_details(ctx, psi)
        result["criterion"] = criterion.model_dump()
        result["agree"] = criterion.injective == verdict.injective
    result["injective"] = verdict.injective
    return result


def run_partition(request: CommandRequest, args) -> Dict[str, Any]:
    ctx = _ctx(request)
    alpha, beta = _elem(ctx, request.alpha), _elem(ctx, request.beta)
    level = request.level or ctx.e
    classes = closure_partition(relation(ctx, alpha, beta, level, tilde=args.tilde)).classes
    result = {"poly": ctx.format_poly(), "level": level, "tilde": args.tilde, "classes": classes}
    if args.predict:
        predicted = injectivity.predict_partition(ctx, alpha, beta)
        result["gamma"] = injectivity.gamma_decompose(ctx, alpha, beta).model_dump()
        result["predicted"] = None if predicted is None else predicted.classes
        result["prediction_matches"] = None if predicted is None else (level == ctx.e and predicted.classes == classes)
    return result


# golden examples --------------------------------------------------------

def example_1() -> Dict[str, Any]:
    ctx = GaloisCtx.from_spec(RingCtx(3, 3), "1,-1,-4")
    alpha = (13, 3)
    u_mod_9 = [c % 9 for c in ctx.u]
    report = analyze_ctx(ctx)
    values = value_set(trace_sequence(ctx, alpha))
    expected = sorted(set(range(1, 27)) - {9, 18})
    passed = u_mod_9 == [7, 0] and report.is_primitive and not report.is_strongly_primitive and values == expected
    return {"example": 1, "poly": ctx.format_poly(), "p": 3, "e": 3, "u_mod_9": u_mod_9,
            "is_primitive": report.is_primitive, "is_strongly_primitive": report.is_strongly_primitive,
            "period": report.period, "alpha": list(alpha), "value_set": values,
            "value_count": len(values), "passed": passed}


def example_2() -> Dict[str, Any]:
    ctx = GaloisCtx.from_spec(RingCtx(3, 2), "1,1,-1")
    alpha, beta = (1, 0), (5, 1)
    delta_sq = ctx.field_mul(ctx.delta_bar, ctx.delta_bar)
    classes = closure_partition(relation(ctx, alpha, beta, 2)).classes
    condition = injectivity.condition1_check(ctx, alpha, beta)
    prediction = injectivity.predict_partition(ctx, alpha, beta)
    passed = list(ctx.delta_bar) == [2, 1] and list(delta_sq) == [2, 0] and \
        classes == [[0, 1, 2, 3, 6, 7, 8], [4, 5]] and condition.holds
    return {"example": 2, "poly": ctx.format_poly(), "p": 3, "e": 2, "delta_bar": list(ctx.delta_bar),
            "delta_bar_sq": list(delta_sq), "is_strongly_primitive": ctx.is_strongly_primitive,
            "alpha": list(alpha), "beta": list(beta), "classes": classes,
            "condition1_holds": condition.holds,
            "prediction": None if prediction is None else prediction.classes, "passed": passed}


def example_3() -> Dict[str, Any]:
    ctx = GaloisCtx.from_spec(RingCtx(3, 3), "1,-1,-4")
    psi = compress.parse_map_spec("x2^2 + x2", ctx.ring)
    alpha = (13, 3)
    beta = ctx.neg(alpha)
    equal = injectivity.compressed_equal(ctx, psi, alpha, beta)
    verdict = injectivity.oracle_injective(ctx, psi)
    failure = injectivity.classify_failure(ctx, psi, verdict=verdict)
    passed = equal and not verdict.injective and "I" in failure.statements
    return {"example": 3, "poly": ctx.format_poly(), "p": 3, "e": 3, "map": str(psi.coord_poly()),
            "alpha": list(alpha), "beta": list(beta), "compressed_equal": equal,
            "oracle_injective": verdict.injective, "failure_statements": failure.statements,
            "omega": failure.omega, "passed": passed}


EXAMPLES = {"1": example_1, "2": example_2, "3": example_3}


def run_examples(request: CommandRequest, args) -> Dict[str, Any]:
    result = EXAMPLES[request.action]()
    if not result["passed"]:
        logger.error(f"example {request.action} does not reproduce the published values")
    return result


HANDLERS = {
    "primitive": run_primitive,
    "seq": run_seq,
    "map": run_map,
    "partition": run_partition,
    "examples": run_examples,
}


def run(request: CommandRequest, args) -> Dict[str, Any]:
    request.validate_request()
    logger.info(f"Running {request.subcommand} {request.action or ''}")
    return HANDLERS[request.subcommand](request, args)


# ----------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-p", type=int, help="odd prime p")
    common.add_argument("-e", type=int, help="exponent e >= 2 (R = Z/p^e)")
    common.add_argument("-n", type=int, help="degree of f (search/count)")
    common.add_argument("--poly", help="monic polynomial, highest degree first, e.g. 1,1,-1")
    common.add_argument("--alpha", help="element of O, lowest power first, e.g. 13,3 for 3*eta+13")
    common.add_argument("--beta", help="second element of O, same format as --alpha")
    common.add_argument("--map", dest="map_spec", help="map spec: t:v0,v1,... | mod:M | polynomial in x0..x{e-1}")
    common.add_argument("--alphabet", type=int, help="alphabet size k for the census")
    common.add_argument("--level", type=int, help="relation level i in [1, e]")
    common.add_argument("--seed", type=int, help="seed for randomized sampling")
    common.add_argument("--workers", type=int, help="worker processes for enumerations")
    common.add_argument("--budget", type=int, help="enumeration budget")
    common.add_argument("--format", dest="output_format", choices=["json", "text"],
                        default=OUTPUT_CONFIG["default_format"], help="output format")
    common.add_argument("--output", help="write output to this file instead of stdout")
    common.add_argument("--verbose", "-v", action="store_true", help="Enable verbose logging")

    parser = argparse.ArgumentParser(
        description="Exact analysis of ring-LFSR sequences over Z/p^e and their compressing maps",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Classify a polynomial
  python cli_runner.py primitive check -p 3 -e 2 --poly 1,1,-1

  # Count primitive polynomials and compare with the closed forms
  python cli_runner.py primitive count -p 3 -e 2 -n 2

  # Decide entropy preservation of a ~ a mod 2
  python cli_runner.py map check --map mod:2 --poly 1,1,-1 -p 3 -e 2

  # Equivalence classes of the value-pair relation
  python cli_runner.py partition -p 3 -e 2 --poly 1,1,-1 --alpha 1,0 --beta 5,1 --predict

  # Reproduce a worked example
  python cli_runner.py examples 2
        """
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    prim = sub.add_parser("primitive", parents=[common], help="classify, search and count polynomials")
    prim.add_argument("action", choices=["check", "search", "count"])
    prim.add_argument("--constraint", choices=list(CONSTRAINTS), help="search constraint")
    prim.add_argument("--start", type=int, default=0, help="search offset in lexicographic order")

    seq = sub.add_parser("seq", parents=[common], help="generate sequences")
    seq.add_argument("action", choices=["gen", "values", "period"])
    seq.add_argument("--lfsr", help="initial state s(0),...,s(n-1) for recurrence generation")
    seq.add_argument("--export", choices=["plain", "json"], help="print the sequence in an export format")

    mp = sub.add_parser("map", parents=[common], help="build and analyze compressing maps")
    mp.add_argument("action", choices=["build", "check", "classify", "census"])
    mp.add_argument("--family", choices=["str", "weak-pow", "weak-lin"])
    for name in ("f0", "f1", "f2", "g0", "g1"):
        mp.add_argument(f"--{name}", help=f"coordinate polynomial {name} in x0..x{{e-1}}")
    mp.add_argument("--ell", type=int, help="exponent ell of the top digit")
    mp.add_argument("--k", type=int, help="level k of g0 in the linear family")
    mp.add_argument("--verify", action="store_true", help="census: cross-check every map with the oracle")
    mp.add_argument("--sample", type=int, help="census: decide this many seeded random maps instead of all of them")

    part = sub.add_parser("partition", parents=[common], help="equivalence closure of the value-pair relation")
    part.add_argument("--predict", action="store_true", help="also print the predicted partition")
    part.add_argument("--tilde", action="store_true", help="only times with tr(delta alpha eta^t) != 0 mod p")

    ex = sub.add_parser("examples", parents=[common], help="reproduce a worked example")
    ex.add_argument("action", choices=sorted(EXAMPLES))

    return parser


def request_from_args(args) -> CommandRequest:
    return CommandRequest(
        subcommand=args.subcommand,
        action=getattr(args, "action", None),
        p=args.p, e=args.e, n=args.n, poly=args.poly, map_spec=args.map_spec,
        alpha=args.alpha, beta=args.beta, constraint=getattr(args, "constraint", None),
        level=args.level, alphabet=args.alphabet, seed=args.seed, workers=args.workers,
        budget=args.budget, output_format=args.output_format,
    )


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    # Configure logging level
    set_verbose(args.verbose)

    if args.budget is not None:
        ENUMERATION_CONFIG["budget"] = args.budget
    if args.workers is not None:
        ENUMERATION_CONFIG["workers"] = args.workers
    if args.seed is not None:
        ENUMERATION_CONFIG["seed"] = args.seed

    try:
        request = request_from_args(args)
        result = run(request, args)
        if "_raw" in result:
            content = result["_raw"]
        else:
            content = OutputFormatter.render(result, request.output_format)
        if args.output:
            write_output(content, args.output)
        else:
            sys.stdout.write(content)
        return EXIT_OK

    except BudgetExceededError as e:
        logger.error(f"Budget exceeded: {e}")
        return EXIT_BUDGET
    except (ValueError, ValidationError) as e:
        # PreconditionError is a ValueError
        logger.error(f"Invalid input: {e}")
        return EXIT_INVALID
    except ConsistencyError as e:
        logger.error(f"Internal consistency check failed: {e}")
        return EXIT_FAILURE
    except KeyboardInterrupt:
        logger.info("Processing interrupted by user")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
