"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 refused
because the work exceeds the requested budget.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import secrets
import sys
from pathlib import Path

from . import algebra, bundle, construct, layering, sampler
from .exactmat import FieldError, FieldSpec
from .rep import (
    InvalidRepresentationError,
    LayeringVector,
    Representation,
    adapt_basis,
    check_relations,
    h_invariants,
    raddim,
    socdim,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _fmt(t) -> str:
    return "(" + ",".join(str(x) for x in t) + ")"


def parse_triple(text: str) -> tuple[int, int, int]:
    try:
        parts = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"bad layering {text!r}: expected d0,d1,d2") from None
    if len(parts) != 3 or min(parts) < 0:
        raise UsageError(f"bad layering {text!r}: expected three nonnegative integers d0,d1,d2")
    return parts


def parse_layering(text: str, vertices) -> LayeringVector:
    """``1,1,1`` for one vertex (one count per layer) or ``1,0;1,1`` for
    several (layers separated by ';', one count per vertex)."""
    try:
        if ";" in text or len(vertices) > 1:
            layers = tuple(tuple(int(x) for x in chunk.split(",")) for chunk in text.split(";"))
        else:
            layers = tuple((int(x),) for x in text.split(","))
        return LayeringVector(layers, tuple(vertices))
    except ValueError as exc:
        raise UsageError(f"bad layering {text!r}: {exc}") from None


def load_presentation(spec: str, p: int | None):
    """A JSON file, or one of the built-in names ``local:N``, ``x3y2`` and
    ``two-vertex:REL[,REL...]``."""
    field = FieldSpec(p) if p else None
    path = Path(spec)
    if path.exists():
        pres = algebra.presentation_from_json(json.loads(path.read_text()))
        return pres.with_field(field) if field else pres
    f = field or algebra.DEFAULT_FIELD
    if spec.startswith("local:"):
        return algebra.make_local_algebra(int(spec.split(":", 1)[1]), None, f)
    if spec == "x3y2":
        return algebra.commutative_x3_y2(f)
    if spec.startswith("two-vertex:"):
        return algebra.two_vertex_presentation(spec.split(":", 1)[1], field=f)
    raise UsageError(f"no presentation file or built-in named {spec!r}")


def _resolve_seed(args, out) -> int:
    if args.seed is not None:
        return args.seed
    if os.environ.get("CI_MODE") == "1":
        raise UsageError("--seed is required when CI_MODE=1")
    seed = secrets.randbits(32)
    print(f"seed: {seed}", file=out)
    return seed


# -- commands ---------------------------------------------------------------------

def cmd_components(args, out) -> int:
    rep = layering.components(args.n, args.d)
    if args.json:
        print(json.dumps(rep.to_json(), sort_keys=True), file=out)
    else:
        print(rep.table(), file=out)
    return EXIT_OK


def cmd_exists(args, out) -> int:
    d = parse_triple(args.layering)
    bad = layering.violated_inequality(args.n, d)
    if args.json:
        print(json.dumps({"n": args.n, "layering": list(d), "nonempty": bad is None, "violated": bad}), file=out)
    elif bad is None:
        print(f"YES: some module has radical layering {_fmt(d)} (n={args.n})", file=out)
    else:
        print(f"NO: {bad}", file=out)
    return EXIT_OK


def cmd_socdim(args, out) -> int:
    n, d = args.n, parse_triple(args.layering)
    if not layering.rad_nonempty(n, d):
        raise UsageError(f"empty stratum: {layering.violated_inequality(n, d)}")
    soc = layering.generic_socdim(n, d)
    h0, h1 = layering.h0_generic(n, d), layering.h1_generic(n, d)
    certified = layering.socdim_formula_certified(n, d)
    if args.json:
        print(
            json.dumps(
                {"n": n, "layering": list(d), "generic_socdim": list(soc), "h0": h0, "h1": h1, "certified": certified}
            ),
            file=out,
        )
    else:
        print(f"layering {_fmt(d)}, n={n}", file=out)
        print(f"generic socdim = {_fmt(soc)}" + ("" if certified else "  (closed form not certified here)"), file=out)
        print(f"h0 = {h0}, h1 = {h1}", file=out)
    return EXIT_OK


def cmd_construct(args, out) -> int:
    n = args.n
    field = FieldSpec(args.p)
    lemma = args.lemma or ("exceptional" if args.a is not None else None)
    if lemma == "exceptional":
        if args.a is None:
            raise UsageError("--lemma exceptional needs --a")
        rep = construct.witness_exceptional(n, args.a, field)
    else:
        if args.layering is None:
            raise UsageError("--layering is required")
        d = parse_triple(args.layering)
        d0, d1, d2 = d
        if lemma == "dim1":
            if d1 != 1:
                raise UsageError("the dim1 family has layerings (d0,1,m)")
            rep = construct.witness_dim1(n, d2, d0, field)
        elif lemma == "dimgt1":
            if d2 != d1 * n - 1:
                raise UsageError("the dimgt1 family has layerings (d0,m,mn-1)")
            rep = construct.witness_dimgt1(n, d1, d0, field)
        else:
            if not layering.rad_nonempty(n, d):
                raise UsageError(f"empty stratum: {layering.violated_inequality(n, d)}")
            seed = _resolve_seed(args, out)
            rep = construct.witness_any(n, d, field, seed)
    got = raddim(rep)
    text = rep.dumps()
    if args.out:
        Path(args.out).write_text(text + "\n")
        print(f"wrote {args.out}: dim {rep.dim}, raddim {got}, socdim {socdim(rep)}", file=out)
    else:
        print(text, file=out)
    return EXIT_OK


def cmd_analyze(args, out) -> int:
    rep = Representation.from_json(json.loads(Path(args.input).read_text()), check=False)
    res = check_relations(rep)
    print(f"relations: {'ok' if res else 'FAILED at ' + str(res.witness)}", file=out)
    if not res:
        return EXIT_FAIL
    print(f"dims: {rep.dims}", file=out)
    print(f"raddim: {raddim(rep)}", file=out)
    print(f"socdim: {socdim(rep)}", file=out)
    arep = adapt_basis(rep)
    for v, sizes in arep.block_sizes.items():
        print(f"adapted block sizes at {v} (deepest first): {sizes}", file=out)
    print(f"block triangular: {arep.is_block_triangular()}, rank conditions: {arep.rank_conditions_hold()}", file=out)
    if len(rep.quiver.vertices) == 1 and rep.presentation.m == 3:
        h = h_invariants(arep)
        print(f"h0 = {h.h0}, h1 = {h.h1}, h0' = {h.h0_dual}, h1' = {h.h1_dual}", file=out)
    return EXIT_OK


def cmd_sample(args, out) -> int:
    n, d = args.n, parse_triple(args.layering)
    if not layering.rad_nonempty(n, d):
        raise UsageError(f"empty stratum: {layering.violated_inequality(n, d)}")
    seed = _resolve_seed(args, out)
    est = sampler.estimate_generic(n, d, args.samples, FieldSpec(args.p), seed)
    want = layering.generic_socdim(n, d)
    h0, h1 = layering.h0_generic(n, d), layering.h1_generic(n, d)
    ok = est.socdim_min == want and est.h0_min == h0 and est.h1_min == h1
    if args.json:
        print(json.dumps(est.to_json(), sort_keys=True), file=out)
    else:
        print(f"layering {_fmt(d)}, n={n}, {est.samples} samples over F_{args.p}, seed {seed}", file=out)
        for k, c in sorted(est.histogram.items()):
            print(f"  socdim {_fmt(k)}: {c}", file=out)
        shown = _fmt(est.socdim_min) if est.socdim_min else "incomparable " + ", ".join(map(_fmt, est.minima))
        print(f"h0 min = {est.h0_min} (closed form {h0}), h1 min = {est.h1_min} (closed form {h1})", file=out)
        print(f"socdim min = {shown} - {'PASS' if ok else 'FAIL'} (closed form {_fmt(want)})", file=out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_fibers(args, out) -> int:
    pres = load_presentation(args.presentation, args.p)
    lv = parse_layering(args.layering, pres.quiver.vertices)
    seed = _resolve_seed(args, out)
    rep = bundle.fiber_constancy_probe(pres, lv, args.samples, seed, zero_prob=args.zero_prob)
    if args.json:
        print(json.dumps(rep.to_json(), sort_keys=True), file=out)
    else:
        print(rep.table(), file=out)
    return EXIT_FAIL if rep.oracle_mismatches else EXIT_OK


def cmd_roots(args, out) -> int:
    rows = layering.roots_table(args.n, args.max)
    header = ["d1", "d2", "q", "is_generator", "is_excluded"]
    if args.out:
        fh = open(args.out, "w", newline="")
    else:
        fh = out
    try:
        w = csv.DictWriter(fh, fieldnames=header, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (str(v).lower() if isinstance(v, bool) else v) for k, v in r.items()})
    finally:
        if args.out:
            fh.close()
    if args.out:
        print(f"wrote {len(rows)} points to {args.out}", file=out)
    return EXIT_OK


def cmd_enumerate(args, out) -> int:
    try:
        got = sampler.brute_force_layerings(args.n, args.d, args.p, args.budget)
    except sampler.BudgetExceeded as exc:
        print(f"refused: {exc}", file=out)
        return EXIT_BUDGET
    want = sampler.predicted_layerings(args.n, args.d)
    print(f"achievable over F_{args.p}: {' '.join(_fmt(t) for t in sorted(got))}", file=out)
    print(f"predicted:            {' '.join(_fmt(t) for t in sorted(want))}", file=out)
    ok = got == want
    print("PASS" if ok else f"FAIL: only enumerated {sorted(got - want)}, only predicted {sorted(want - got)}", file=out)
    return EXIT_OK if ok else EXIT_FAIL


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="radlayer", description="Radical and socle layerings of cube-zero local algebras.")
    ap.add_argument("-v", "--verbose", action="store_true", help="log warnings and progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("components", help="list the layerings whose strata give the irreducible components")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_components)

    p = sub.add_parser("exists", help="is there a module with this radical layering?")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--layering", required=True, help="d0,d1,d2")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_exists)

    p = sub.add_parser("socdim", help="closed-form generic socle layering and h-values")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--layering", required=True, help="d0,d1,d2")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_socdim)

    p = sub.add_parser("construct", help="write a verified witness representation as JSON")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--layering", help="d0,d1,d2")
    p.add_argument("--a", type=int, help="parameter of the exceptional family")
    p.add_argument("--lemma", choices=["dim1", "dimgt1", "exceptional"])
    p.add_argument("--p", type=int, default=32003)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("analyze", help="relations, layerings and h-invariants of a saved representation")
    p.add_argument("--in", dest="input", required=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sample", help="Monte Carlo estimate of the generic socle layering")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--layering", required=True, help="d0,d1,d2")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--p", type=int, default=32003)
    p.add_argument("--seed", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("fibers", help="probe whether fibre dimensions are constant on a stratum")
    p.add_argument("--presentation", required=True, help="JSON file, or local:N, x3y2, two-vertex:REL")
    p.add_argument("--layering", required=True, help="1,1,1 or per-vertex 1,0;1,1;1,1")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--zero-prob", type=float, default=0.5, help="bias towards sparse points (default 0.5)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_fibers)

    p = sub.add_parser("roots", help="lattice points with q <= 1 as CSV")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("enumerate", help="exhaustive layering search over a small field")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--budget", type=int, default=10**6)
    p.set_defaults(func=cmd_enumerate)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(name)s: %(message)s")
    try:
        if getattr(args, "n", None) is not None and args.n < 2:
            raise UsageError("--n must be at least 2")
        return args.func(args, out)
    except (UsageError, FieldError, layering.EmptyStratumError, algebra.PresentationError, InvalidRepresentationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (construct.WitnessSearchError, sampler.SamplingError) as exc:
        print(f"FAIL: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
