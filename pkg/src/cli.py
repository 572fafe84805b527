"""
Command-line interface.

    python -m src validate --povm set.json
    python -m src prob --povm set.json --state "(0,0,1)"
    python -m src decompose --povm set.json
    python -m src usd --alpha 90 --degrees --verify
    python -m src sample --povm set.json --state-name psi --n 100000 --seed 7
    python -m src render --figure usd --alpha 1.5708 --out usd.svg

Exit codes: 0 ok/valid, 1 domain-invalid input, 2 usage or parse error.
"""
import argparse
import json
import logging
import math
import sys
from pathlib import Path
from typing import List, Optional, TextIO

from pydantic import ValidationError

from src.core.config import settings
from src.core.exceptions import ParseError, PovmError, SchemaError
from src.core.logging import configure_logging
from src.models import BlochState, PovmSet, Rank, Vec3
from src.schemas import Document, Plane, ProbabilityResponse
from src.services import bloch_core, discrimination
from src.services.document_service import load_document, serialize_document, usd_document
from src.services.render_service import (
    figure_construction,
    figure_decomposition,
    figure_povm,
    figure_usd,
    render_svg,
)
from src.services.sampler import SamplerService
from src.utils.helpers import (
    colorize,
    format_number,
    format_table,
    format_vector,
    parse_plane,
    parse_vector,
    to_radians,
    use_color,
)

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_INVALID, EXIT_USAGE = 0, 1, 2

FIGURES = ("document", "decomposition", "usd", "construction")


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="python -m src",
        description="Bloch-vector calculus for qubit POVMs.",
    )
    parser.add_argument("--verbose", action="store_true", help="log at DEBUG level to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_json(p):
        p.add_argument("--json", action="store_true", help="machine-readable JSON on stdout")

    def add_state(p):
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--state", help='Bloch vector, e.g. "(0,0,1)"')
        group.add_argument("--state-name", help="name of a state stored in the document")

    p = sub.add_parser("validate", help="check that a document's POVM is a valid measurement")
    p.add_argument("--povm", required=True, help="document path, or - for stdin")
    add_json(p)

    p = sub.add_parser("prob", help="outcome probabilities for a state")
    p.add_argument("--povm", required=True)
    add_state(p)
    add_json(p)

    p = sub.add_parser("decompose", help="split elements into rank-1 parts")
    p.add_argument("--povm", required=True)
    p.add_argument("--index", type=int, help="only this element")
    add_json(p)

    p = sub.add_parser("usd", help="error-free discrimination of two pure states")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--alpha", type=float, help="Bloch angle between the states")
    source.add_argument("--psi", help="Bloch vector of the first state (with --phi)")
    source.add_argument("--sweep", type=int, metavar="N", help="tabulate N angles over (0, pi]")
    p.add_argument("--phi", help="Bloch vector of the second state")
    p.add_argument("--degrees", action="store_true", help="--alpha is in degrees")
    p.add_argument("--verify", action="store_true", help="check the error-free conditions")
    p.add_argument("--baseline", action="store_true", help="compare with a projective measurement")
    p.add_argument("--brute-force-step", type=float, metavar="S", help="grid-search the weight a")
    p.add_argument("--emit-document", metavar="FILE", help="write states and POVM as a document")
    add_json(p)

    p = sub.add_parser("sample", help="simulate measurement outcomes")
    p.add_argument("--povm", required=True)
    add_state(p)
    p.add_argument("--n", type=int, required=True, help="number of trials")
    p.add_argument("--seed", type=int, required=True, help="unsigned 64-bit PRNG seed")
    add_json(p)

    p = sub.add_parser("render", help="draw an SVG figure")
    p.add_argument("--povm", help="document path, or - for stdin")
    p.add_argument("--figure", choices=FIGURES, default="document")
    p.add_argument("--alpha", type=float, help="Bloch angle for the usd/construction figures")
    p.add_argument("--degrees", action="store_true")
    p.add_argument("--index", type=int, default=0, help="element for the decomposition figure")
    p.add_argument("--plane", help='projection axes "h;w", default "(1,0,0);(0,0,1)"')
    p.add_argument("--out", help="output file (default stdout)")
    return parser


# --- Shared helpers ---------------------------------------------------------
def _require_povm(doc: Document) -> PovmSet:
    if doc.povm is None:
        raise SchemaError("document has no povm")
    return doc.povm


def _resolve_state(args, doc: Document) -> BlochState:
    if args.state is not None:
        return bloch_core.make_state(parse_vector(args.state))
    states = doc.states or {}
    if args.state_name not in states:
        raise UsageError(f"document has no state named {args.state_name!r}")
    return states[args.state_name]


def _dump(payload) -> str:
    return json.dumps(payload, indent=2)


# --- Subcommands ---------------------------------------------------------
def cmd_validate(args, out: TextIO) -> int:
    report = bloch_core.validate_set(_require_povm(load_document(args.povm)))
    if args.json:
        print(report.model_dump_json(indent=2), file=out)
        return EXIT_OK if report.valid else EXIT_INVALID

    color = use_color(out)
    verdict = colorize("valid" if report.valid else "invalid", "green" if report.valid else "red", color)
    kind = "rank-1" if report.all_rank1 else "mixed-rank"
    print(f"{verdict}, {kind} set, Σa={report.weight_sum:.6g}", file=out)
    rows = [
        [
            str(i),
            "yes" if r.positive else "no",
            r.rank.value if r.rank else "-",
            format_number(r.eigenvalues[0]),
            format_number(r.eigenvalues[1]),
        ]
        for i, r in enumerate(report.elements)
    ]
    print(format_table(["element", "positive", "rank", "eig_lo", "eig_hi"], rows), file=out)
    print(f"|Σv| = {report.vector_sum.norm():.3g}", file=out)
    if report.length_sum_ok is not None:
        print(f"Σ|v| = {report.length_sum:.6g}", file=out)
    for issue in report.issues:
        print(f"issue: {issue}", file=out)
    return EXIT_OK if report.valid else EXIT_INVALID


def cmd_prob(args, out: TextIO) -> int:
    doc = load_document(args.povm)
    povm = _require_povm(doc)
    state = _resolve_state(args, doc)
    probabilities = bloch_core.outcome_distribution(povm, state)
    if args.json:
        print(ProbabilityResponse(probabilities=probabilities).model_dump_json(indent=2), file=out)
        return EXIT_OK
    rows = [
        [str(i), format_number(e.a), format_vector(e.v), format_number(p)]
        for i, (e, p) in enumerate(zip(povm.elements, probabilities))
    ]
    print(format_table(["outcome", "a", "v", "P"], rows), file=out)
    return EXIT_OK


def cmd_decompose(args, out: TextIO) -> int:
    povm = _require_povm(load_document(args.povm))
    indices = range(len(povm))
    if args.index is not None:
        if not 0 <= args.index < len(povm):
            raise UsageError(f"--index {args.index} out of range for {len(povm)} element(s)")
        indices = [args.index]

    results = []
    for i in indices:
        element = povm.elements[i]
        report = bloch_core.validate_element(element)
        if report.rank == Rank.ZERO:
            results.append({"index": i, "rank": Rank.ZERO.value, "decomposition": None})
            continue
        d = bloch_core.decompose_rank1(element)
        results.append({"index": i, "rank": report.rank.value if report.rank else None,
                        "decomposition": d.model_dump()})

    if args.json:
        print(_dump(results), file=out)
        return EXIT_OK
    rows = []
    for item in results:
        d = item["decomposition"]
        if d is None:
            rows.append([str(item["index"]), "zero", "-", "-", "-"])
            continue
        rows.append([
            str(item["index"]),
            item["rank"] or "-",
            format_vector(Vec3.of(d["axis"]), 4),
            "%s / %s" % (format_number(d["major"]["a"]), format_number(d["minor"]["a"])),
            "%s / %s" % (format_number(d["eigen_weights"][0]), format_number(d["eigen_weights"][1])),
        ])
    print(format_table(["element", "rank", "axis", "a_major / a_minor", "lambda1 / lambda2"], rows), file=out)
    return EXIT_OK


def _cmd_usd_sweep(args, out: TextIO) -> int:
    if args.sweep < 1:
        raise UsageError("--sweep needs a positive number of angles")
    alphas = [math.pi * k / args.sweep for k in range(1, args.sweep + 1)]
    points = discrimination.success_curve(alphas)
    if args.json:
        print(_dump([p.model_dump() for p in points]), file=out)
        return EXIT_OK
    rows = [
        [format_number(p.alpha), format_number(p.a), format_number(p.a_inconclusive), format_number(p.p_success)]
        for p in points
    ]
    print(format_table(["alpha", "a", "a_?", "p_success"], rows), file=out)
    return EXIT_OK


def cmd_usd(args, out: TextIO) -> int:
    if args.sweep is not None:
        return _cmd_usd_sweep(args, out)
    if args.alpha is not None:
        design = discrimination.design_usd_for_angle(to_radians(args.alpha, args.degrees))
    else:
        if args.phi is None:
            raise UsageError("--psi requires --phi")
        design = discrimination.design_usd(parse_vector(args.psi), parse_vector(args.phi))

    payload = {"design": design.model_dump()}
    exit_code = EXIT_OK
    verification = baseline = None
    if args.verify:
        verification = discrimination.verify_error_free(design)
        payload["verification"] = verification.model_dump()
        if not verification.valid:
            exit_code = EXIT_INVALID
    if args.baseline:
        baseline = discrimination.von_neumann_baseline(design.r_psi, design.r_phi)
        payload["baseline"] = baseline.model_dump()
    if args.brute_force_step is not None:
        a_best, p_best = discrimination.brute_force_optimal_a(design.alpha, args.brute_force_step)
        payload["brute_force"] = {"a_best": a_best, "p_best": p_best, "step": args.brute_force_step}
    if args.emit_document:
        Path(args.emit_document).write_text(serialize_document(usd_document(design)) + "\n", encoding="utf-8")

    if args.json:
        print(_dump(payload), file=out)
        return exit_code

    print(f"alpha = {format_number(design.alpha)} rad", file=out)
    print(f"a = {format_number(design.a)}", file=out)
    print(f"a_inconclusive = {format_number(design.a_inconclusive)}", file=out)
    print(f"p_success = {format_number(design.p_success)}", file=out)
    if design.degenerate:
        print("degenerate: the states are identical", file=out)
    rows = [
        [name, format_number(e.a), format_vector(e.v)]
        for name, e in zip(("detect-phi", "detect-psi", "inconclusive"), design.povm.elements)
    ]
    print(format_table(["element", "a", "v"], rows), file=out)
    if verification is not None:
        color = use_color(out)
        verdict = colorize("passed" if verification.valid else "failed",
                           "green" if verification.valid else "red", color)
        print(f"error-free verification {verdict}", file=out)
        for issue in verification.issues:
            print(f"issue: {issue}", file=out)
    if baseline is not None:
        p1, p2 = baseline.p_outcome_given_psi
        print(f"projective baseline: P(1|psi) = {format_number(p1)}, P(2|psi) = {format_number(p2)}, "
              f"error = {format_number(baseline.p_error)}", file=out)
    if "brute_force" in payload:
        bf = payload["brute_force"]
        print(f"grid search: a_best = {format_number(bf['a_best'])}, p_best = {format_number(bf['p_best'])}",
              file=out)
    return exit_code


def cmd_sample(args, out: TextIO) -> int:
    doc = load_document(args.povm)
    povm = _require_povm(doc)
    state = _resolve_state(args, doc)
    report = SamplerService().sample_outcomes(povm, state, args.n, args.seed)
    if args.json:
        print(report.model_dump_json(indent=2), file=out)
        return EXIT_OK
    rows = [
        [str(i), str(c), format_number(f), format_number(p), "*" if i in report.flagged else ""]
        for i, (c, f, p) in enumerate(zip(report.counts, report.frequencies, report.expected))
    ]
    print(f"n = {report.n}, seed = {report.seed}", file=out)
    print(format_table(["outcome", "count", "frequency", "expected", "flag"], rows), file=out)
    print(f"max |frequency - expected| = {report.max_abs_deviation:.3g}", file=out)
    return EXIT_OK


def _plane(args) -> Plane:
    if not args.plane:
        return Plane()
    horizontal, vertical = parse_plane(args.plane)
    try:
        return Plane(horizontal=horizontal, vertical=vertical)
    except ValidationError:
        raise UsageError(f"--plane axes must be orthonormal: {args.plane!r}") from None


def cmd_render(args, out: TextIO) -> int:
    plane = _plane(args)
    if args.figure in ("usd", "construction"):
        if args.alpha is None:
            raise UsageError(f"--figure {args.figure} requires --alpha")
        design = discrimination.design_usd_for_angle(to_radians(args.alpha, args.degrees))
        build = figure_usd if args.figure == "usd" else figure_construction
        fig = build(design, plane=plane)
    else:
        if args.povm is None:
            raise UsageError(f"--figure {args.figure} requires --povm")
        doc = load_document(args.povm)
        if args.figure == "decomposition":
            povm = _require_povm(doc)
            if not 0 <= args.index < len(povm):
                raise UsageError(f"--index {args.index} out of range for {len(povm)} element(s)")
            fig = figure_decomposition(povm.elements[args.index], plane=plane)
        else:
            states = {name: s.r for name, s in (doc.states or {}).items()}
            fig = figure_povm(doc.povm, states, plane=plane)

    svg = render_svg(fig)
    if args.out:
        Path(args.out).write_text(svg, encoding="utf-8")
        print(f"wrote {args.out}", file=out)
    else:
        out.write(svg)
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "prob": cmd_prob,
    "decompose": cmd_decompose,
    "usd": cmd_usd,
    "sample": cmd_sample,
    "render": cmd_render,
}


def run_cli(argv: Optional[List[str]] = None, stdout: Optional[TextIO] = None,
            stderr: Optional[TextIO] = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    configure_logging("DEBUG" if args.verbose else settings.LOG_LEVEL)
    logger.debug("running %s", args.command)
    try:
        return COMMANDS[args.command](args, stdout)
    except (ParseError, SchemaError, UsageError) as e:
        print(f"error: {e}", file=stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=stderr)
        return EXIT_USAGE
    except (PovmError, ValidationError) as e:
        print(f"invalid: {e}", file=stderr)
        return EXIT_INVALID
    except ValueError as e:
        print(f"error: {e}", file=stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
