"""Batch command-line surface (azk).

One logical command per invocation; JSON in, canonical JSON report out.
All numbers travel as strings so exact rationals survive the wire; the
serialization is byte-stable for identical inputs (sorted keys, fixed
separators, canonical polynomial text).

Exit codes: 0 ok, 1 malformed input or module error, 2 check violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import diffop, spectral, suites, twisted, weyl
from .errors import AzumayaError
from .linalg import PolyMatrix, SpanBasis, char_poly
from .poly import MultiPoly, parse_poly

PROBLEM_VERSION = 1


class UsageError(Exception):
    """Malformed invocation or input; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# payload plumbing
# ---------------------------------------------------------------------------

def _load_problem_file(path: str, command: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}")
    if not isinstance(doc, dict):
        raise UsageError("problem file must be a JSON object")
    extra = set(doc) - {"version", "command", "payload"}
    if extra:
        raise UsageError(f"unknown problem-file fields: {sorted(extra)}")
    if doc.get("version") != PROBLEM_VERSION:
        raise UsageError(f"unsupported problem-file version {doc.get('version')!r}")
    if doc.get("command") != command:
        raise UsageError(
            f"problem file is for command {doc.get('command')!r}, not {command!r}")
    payload = doc.get("payload")
    if not isinstance(payload, dict):
        raise UsageError("payload must be a JSON object")
    return payload


def _take(payload: dict, required=(), optional=()):
    unknown = set(payload) - set(required) - set(optional)
    if unknown:
        raise UsageError(f"unknown payload fields: {sorted(unknown)}")
    missing = [k for k in required if k not in payload]
    if missing:
        raise UsageError(f"missing payload fields: {missing}")


def _fraction(text, what="value") -> Fraction:
    if isinstance(text, float):
        raise UsageError(f"bad {what}: floating point is not exact; "
                         "send rationals as strings")
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad {what}: {text!r} ({exc})")


def _poly(text, what="polynomial") -> MultiPoly:
    try:
        return parse_poly(str(text))
    except ValueError as exc:
        raise UsageError(f"bad {what}: {text!r} ({exc})")


def _matrix(rows, what="matrix") -> PolyMatrix:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise UsageError(f"{what} must be a list of rows")
    return PolyMatrix.from_rows([[_poly(x, what) for x in row] for row in rows])


def _matrix_strings(m: PolyMatrix):
    return m.to_strings()


def _lambda_mode(text):
    if text in (None, "formal"):
        return weyl.FORMAL
    return _fraction(text, "lambda")


# ---------------------------------------------------------------------------
# command handlers: each returns (status, data, diagnostics)
# ---------------------------------------------------------------------------

def _weyl_element(payload):
    lam = _lambda_mode(payload.get("lam"))
    n = int(payload["n"]) if payload.get("n") else None
    try:
        return weyl.parse_weyl(str(payload["expr"]), n=n, lam=lam)
    except ValueError as exc:
        raise UsageError(f"bad expression: {exc}")


def cmd_weyl_nf(payload):
    _take(payload, required=("expr",), optional=("lam", "n"))
    return "ok", {"normal_form": str(_weyl_element(payload))}, []


def cmd_weyl_act(payload):
    _take(payload, required=("expr", "poly", "lam"), optional=("n",))
    elem = _weyl_element(payload)
    f = _poly(payload["poly"])
    return "ok", {"result": str(weyl.act_on_polynomial(elem, f))}, []


def cmd_weyl_fourier(payload):
    _take(payload, required=("expr",), optional=("lam", "n"))
    return "ok", {"result": str(weyl.fourier(_weyl_element(payload)))}, []


def cmd_weyl_reduce(payload):
    _take(payload, required=("expr",), optional=("lam", "n"))
    cert = weyl.reduce_to_scalar(_weyl_element(payload))
    steps = [{"generator": f"{kind}{i + 1}", "side": side}
             for kind, i, side in cert.steps]
    return "ok", {"steps": steps, "scalar": str(cert.final_scalar)}, []


def cmd_azu_solve(payload):
    _take(payload, required=("A", "lambda"), optional=("deg_bound",))
    a = _matrix(payload["A"], "A")
    lam = _fraction(payload["lambda"], "lambda")
    bound = int(payload.get("deg_bound", diffop.default_degree_bound(a)))
    basis = diffop.solve_commutation(a, lam, bound)
    return "ok", {"deg_bound": bound, "dimension": len(basis),
                  "basis": [_matrix_strings(b) for b in basis]}, []


def cmd_azu_basis(payload):
    _take(payload, required=("A", "lambda"))
    a = _matrix(payload["A"], "A")
    lam = _fraction(payload["lambda"], "lambda")
    basis = diffop.fundamental_solutions(a, lam)
    return "ok", {"discriminant": str(diffop.discriminant(a)),
                  "basis": [_matrix_strings(b) for b in basis]}, []


def cmd_azu_classify(payload):
    _take(payload, required=("B",))
    rep = diffop.classify_higgsing(_matrix(payload["B"], "B"))
    return "ok", rep.to_json(), []


def cmd_azu_report(payload):
    _take(payload, required=("A", "lambda", "bhat"), optional=("deg_bound",))
    a = _matrix(payload["A"], "A")
    lam = _fraction(payload["lambda"], "lambda")
    bhat = [_fraction(c, "bhat entry") for c in payload["bhat"]]
    rep = diffop.pushforward_report(a, bhat, lam)
    data = rep.to_json()
    if "deg_bound" in payload:
        bound = int(payload["deg_bound"])
        data["solve_dimension"] = len(diffop.solve_commutation(a, lam, bound))
        data["deg_bound"] = bound
    return "ok", data, []


def _higgs_pair(payload):
    rank = int(payload["rank"])
    base_vars = tuple(payload.get("base_vars", ["z"]))
    phis = [_matrix(m, "phi") for m in payload["phis"]]
    return spectral.HiggsPair(rank, phis, base_vars)


def _check_mode(payload, expected):
    mode = payload.pop("mode", None)
    if mode is not None and mode != expected:
        raise UsageError(f"payload mode {mode!r} does not match subcommand {expected!r}")


def cmd_spec_cover(payload):
    payload = dict(payload)
    _check_mode(payload, "cover")
    _take(payload, required=("rank", "phis"), optional=("base_vars",))
    pair = _higgs_pair(payload)
    cover = spectral.spectral_cover(pair)
    ideal = spectral.image_ideal(pair)
    return "ok", {"cover": str(cover.poly), "reduced": cover.reduced,
                  "image_ideal": str(ideal),
                  "image_equals_cover": ideal == cover.poly}, []


def cmd_spec_admissible(payload):
    payload = dict(payload)
    _check_mode(payload, "admissible")
    _take(payload, required=("rank", "phis"), optional=("base_vars",))
    pair = _higgs_pair(payload)
    ok = spectral.commutativity_admissible(pair)
    if not ok:
        return "violation", {"admissible": False}, ["generator images do not commute"]
    pres = spectral.higgs_to_morphism(pair)
    return "ok", {"admissible": True,
                  "subalgebra_basis": [_matrix_strings(b) for b in pres.subalgebra_basis]}, []


def cmd_spec_family(payload):
    payload = dict(payload)
    _check_mode(payload, "family")
    _take(payload, required=("rank", "phis", "lambda"),
          optional=("base_vars", "degree"))
    lam = _fraction(payload["lambda"], "lambda")
    degree = int(payload.get("degree", 3))
    pair = _higgs_pair({k: payload[k] for k in ("rank", "phis") if k in payload}
                       | {"base_vars": payload.get("base_vars", ["z"])})
    fam = spectral.lambda_family(pair)
    if lam == 0:
        fiber = fam.classical_fiber()
        return "ok", {"lambda": "0",
                      "cover": str(fiber["cover"].poly),
                      "reduced": fiber["cover"].reduced,
                      "image_ideal": str(fiber["image_ideal"])}, []
    probe = fam.probe(lam, degree)
    return "ok", {"lambda": str(lam), "degree": degree,
                  "monomials": probe.monomials, "rank": probe.rank,
                  "kernel_dim": probe.kernel_dim,
                  "injective": probe.injective}, []


def cmd_spec_curvature(payload):
    payload = dict(payload)
    _check_mode(payload, "curvature")
    _take(payload, required=("rank", "gammas"), optional=("base_vars",))
    gammas = [_matrix(g, "gamma") for g in payload["gammas"]]
    base_vars = payload.get("base_vars")
    field = spectral.curvature(gammas, base_vars)
    comps = {f"{i},{j}": _matrix_strings(m) for (i, j), m in sorted(field.items())}
    flat = all(m.is_zero() for m in field.values())
    return "ok", {"components": comps, "flat": flat}, []


def cmd_coc_check(payload):
    alpha = twisted.cochain2_from_json(payload)
    res = twisted.check_2cocycle(alpha)
    if res.ok:
        return "ok", {"cocycle": True}, []
    return "violation", {"cocycle": False, "violation": list(res.where)}, [res.detail]


def cmd_coc_coboundary(payload):
    _take(payload, optional=("beta", "alpha"))
    if ("beta" in payload) == ("alpha" in payload):
        raise UsageError("provide exactly one of 'beta' (build d beta) "
                         "or 'alpha' (decide coboundary)")
    if "beta" in payload:
        beta = twisted.cochain1_from_json(payload["beta"])
        return "ok", {"coboundary": twisted.cochain2_to_json(twisted.coboundary(beta))}, []
    alpha = twisted.cochain2_from_json(payload["alpha"])
    ok, witness = twisted.is_coboundary(alpha)
    if ok:
        return "ok", {"is_coboundary": True,
                      "witness": twisted.cochain1_to_json(witness)}, []
    return "ok", {"is_coboundary": False}, []


def cmd_coc_glue(payload):
    _take(payload, required=("rank", "indices", "gluing"),
          optional=("twist", "descend_endomorphisms"))
    bundle = twisted.bundle_from_json(
        {k: payload[k] for k in ("rank", "indices", "gluing", "twist") if k in payload})
    res = twisted.twisted_gluing_check(bundle)
    if not res.ok:
        return "violation", {"glued": False, "violation": list(res.where)}, [res.detail]
    data = {"glued": True}
    if payload.get("descend_endomorphisms"):
        endo = twisted.endomorphism_azumaya(bundle)
        endo_res = twisted.twisted_gluing_check(endo)
        data["endomorphism_rank"] = endo.rank
        data["endomorphism_cocycle"] = endo_res.ok
        if not endo_res.ok:
            return "violation", data, [endo_res.detail]
    return "ok", data, []


def cmd_coc_match(payload):
    _take(payload, required=("left", "right"))
    left = twisted.cochain2_from_json(payload["left"])
    right = twisted.cochain2_from_json(payload["right"])
    res = twisted.twist_matching_check(left, right)
    if res.ok:
        return "ok", {"match": True}, []
    return "violation", {"match": False, "mismatch": list(res.where)}, [res.detail]


def cmd_hilb_sheaf(payload):
    _take(payload, required=("summands",), optional=("torsion", "g_rank", "g_summands"))
    sheaf = twisted.SheafOnP1(tuple(int(a) for a in payload["summands"]),
                              int(payload.get("torsion", 0)))
    g_summands = [int(c) for c in payload.get("g_summands", [0])]
    g_rank = int(payload.get("g_rank", len(g_summands)))
    p = twisted.hilbert_poly(sheaf, g_rank, g_summands)
    return "ok", {"polynomial": str(p), "degree": p.degree_in("m")}, []


def cmd_hilb_morphism(payload):
    _take(payload, required=("summands",))
    summands = [(int(a), int(d)) for a, d in payload["summands"]]
    p = twisted.morphism_hilbert_poly(summands)
    return "ok", {"polynomial": str(p), "degree": p.degree_in("m")}, []


# -- the built-in worked demonstration ---------------------------------------

CANONICAL_DEMO = "example-5-1-11"


def commutation_demo_report(a: PolyMatrix, lam: Fraction, bhat, deg_bound=None):
    """Full rank-2 commutation walk-through: closed-form quadruple, solver
    span comparison, degree-0 and characteristic-polynomial checks, and the
    eigen-decomposition report for the chosen combination."""
    basis = diffop.fundamental_solutions(a, lam)
    residuals_zero = all(diffop.commutation_constraint(a, b, lam).is_zero()
                         for b in basis)
    if deg_bound is None:
        deg_bound = 2 * max((e.total_degree() for e in a.entries), default=0) + 2
    solved = diffop.solve_commutation(a, lam, deg_bound)
    span = SpanBasis()
    for m in solved:
        span.add(list(m.entries))
    span_match = (len(solved) == 4
                  and all(span.contains(list(b.entries)) for b in basis))
    b = PolyMatrix.zeros(2)
    for c, m in zip(bhat, basis):
        b = b + m.scale(c)
    b0 = PolyMatrix.from_rows([[bhat[0], bhat[1]], [bhat[2], bhat[3]]])
    cp_b, cp_b0 = char_poly(b), char_poly(b0)
    report = diffop.pushforward_report(a, bhat, lam)
    return {
        "A": _matrix_strings(a),
        "lambda": str(lam),
        "bhat": [str(c) for c in bhat],
        "deg_bound": deg_bound,
        "discriminant": str(diffop.discriminant(a)),
        "fundamental_solutions": [_matrix_strings(m) for m in basis],
        "constraint_residuals_zero": residuals_zero,
        "solve_dimension": len(solved),
        "solution_basis": [_matrix_strings(m) for m in solved],
        "span_match": span_match,
        "B": _matrix_strings(b),
        "degree0": _matrix_strings(b0),
        "char_poly_B": str(cp_b),
        "char_poly_degree0": str(cp_b0),
        "char_match": cp_b == cp_b0,
        "pushforward": report.to_json(),
    }


def cmd_demo(name, payload):
    if name == CANONICAL_DEMO:
        a = _matrix(payload.get("A", [["0", "1"], ["0", "0"]]), "A")
        lam = _fraction(payload.get("lambda", "1"), "lambda")
        bhat = [_fraction(c, "bhat entry")
                for c in payload.get("bhat", ["1", "0", "0", "2"])]
        if len(bhat) != 4:
            raise UsageError("bhat needs four entries")
        data = commutation_demo_report(a, lam, bhat)
        ok = (data["constraint_residuals_zero"] and data["span_match"]
              and data["char_match"])
        return ("ok" if ok else "violation"), data, []
    seed = int(payload.get("seed", 0))
    count = int(payload.get("count", 100))
    try:
        result = suites.run_suite(name, seed, count)
    except KeyError as exc:
        raise UsageError(str(exc.args[0]))
    status = "ok" if result.ok else "violation"
    diags = [] if result.ok else [f"{result.failures} failures"]
    return status, result.to_json(), diags


# ---------------------------------------------------------------------------
# dispatch and serialization
# ---------------------------------------------------------------------------

HANDLERS = {
    ("weyl", "nf"): cmd_weyl_nf,
    ("weyl", "act"): cmd_weyl_act,
    ("weyl", "fourier"): cmd_weyl_fourier,
    ("weyl", "reduce"): cmd_weyl_reduce,
    ("azu", "solve"): cmd_azu_solve,
    ("azu", "basis"): cmd_azu_basis,
    ("azu", "classify"): cmd_azu_classify,
    ("azu", "report"): cmd_azu_report,
    ("spec", "cover"): cmd_spec_cover,
    ("spec", "admissible"): cmd_spec_admissible,
    ("spec", "family"): cmd_spec_family,
    ("spec", "curvature"): cmd_spec_curvature,
    ("coc", "check"): cmd_coc_check,
    ("coc", "coboundary"): cmd_coc_coboundary,
    ("coc", "glue"): cmd_coc_glue,
    ("coc", "match"): cmd_coc_match,
    ("hilb", "sheaf"): cmd_hilb_sheaf,
    ("hilb", "morphism"): cmd_hilb_morphism,
}

def build_parser() -> _Parser:
    parser = _Parser(prog="azk", description=__doc__)
    common = _Parser(add_help=False)
    common.add_argument("--text", action="store_true", default=argparse.SUPPRESS,
                        help="human-readable output instead of JSON")
    common.add_argument("--out", metavar="FILE", default=argparse.SUPPRESS,
                        help="write the report to FILE")
    parser.add_argument("--text", action="store_true", help=argparse.SUPPRESS)
    parser.add_argument("--out", metavar="FILE", help=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="group", metavar="GROUP")

    def add(group, name, with_file=True, flags=()):
        if group not in groups:
            groups[group] = sub.add_parser(group).add_subparsers(
                dest="sub", metavar="SUB")
        p = groups[group].add_parser(name, parents=[common])
        if with_file:
            p.add_argument("file", nargs="?", help="JSON problem file")
        for flag in flags:
            if flag == "lambda_":
                p.add_argument("--lambda", dest="lambda_", metavar="Q",
                               help="rational value, or 'formal'")
            elif flag == "a_matrix":
                p.add_argument("--a", dest="a_matrix", metavar="JSON",
                               help="matrix as a JSON list of rows")
            elif flag in ("n", "deg_bound", "seed", "count", "degree"):
                p.add_argument(f"--{flag.replace('_', '-')}", dest=flag, type=int)
            else:
                p.add_argument(f"--{flag}", dest=flag)
        return p

    groups = {}
    add("weyl", "nf", flags=("expr", "lam", "n"))
    add("weyl", "act", flags=("expr", "poly", "lam", "n"))
    add("weyl", "fourier", flags=("expr", "lam", "n"))
    add("weyl", "reduce", flags=("expr", "lam", "n"))
    add("azu", "solve", flags=("lambda_", "deg_bound", "a_matrix"))
    add("azu", "basis", flags=("lambda_", "a_matrix"))
    add("azu", "classify")
    add("azu", "report", flags=("lambda_", "deg_bound", "bhat", "a_matrix"))
    add("spec", "cover")
    add("spec", "admissible")
    add("spec", "family", flags=("lambda_", "degree"))
    add("spec", "curvature")
    add("coc", "check")
    add("coc", "coboundary")
    add("coc", "glue")
    add("coc", "match")
    add("hilb", "sheaf")
    add("hilb", "morphism")
    demo = sub.add_parser("demo").add_subparsers(dest="sub", metavar="NAME")
    canonical = demo.add_parser(CANONICAL_DEMO, parents=[common])
    canonical.add_argument("--bhat", metavar="Q,Q,Q,Q")
    canonical.add_argument("--lambda", dest="lambda_", metavar="Q")
    canonical.add_argument("--a", dest="a_matrix", metavar="JSON")
    for suite_name in sorted(suites.SUITES):
        p = demo.add_parser(suite_name, parents=[common])
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--count", type=int, default=100)
    return parser


def _payload_from_args(args, command: str) -> dict:
    payload = {}
    if getattr(args, "file", None):
        payload = _load_problem_file(args.file, command)
    if getattr(args, "expr", None) is not None:
        payload["expr"] = args.expr
    if getattr(args, "poly", None) is not None:
        payload["poly"] = args.poly
    if getattr(args, "lam", None) is not None:
        payload["lam"] = args.lam
    if getattr(args, "n", None) is not None:
        payload["n"] = args.n
    if getattr(args, "lambda_", None) is not None:
        payload["lambda"] = args.lambda_
    if getattr(args, "deg_bound", None) is not None:
        payload["deg_bound"] = args.deg_bound
    if getattr(args, "degree", None) is not None:
        payload["degree"] = args.degree
    if getattr(args, "bhat", None) is not None:
        payload["bhat"] = [c.strip() for c in str(args.bhat).split(",")]
    if getattr(args, "a_matrix", None) is not None:
        try:
            payload["A"] = json.loads(args.a_matrix)
        except json.JSONDecodeError as exc:
            raise UsageError(f"bad --a matrix: {exc}")
    if getattr(args, "seed", None) is not None:
        payload["seed"] = args.seed
    if getattr(args, "count", None) is not None:
        payload["count"] = args.count
    return payload


def render_report(status, data, diagnostics) -> dict:
    return {"status": status, "data": data, "diagnostics": diagnostics}


def serialize_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n"


def _render_text(report: dict) -> str:
    color = os.environ.get("AZK_COLOR", "auto")
    use_color = color != "never" and sys.stdout.isatty()
    status = report["status"]
    if use_color:
        tint = {"ok": "\033[32m", "violation": "\033[31m", "error": "\033[31m"}
        status = f"{tint.get(status, '')}{status}\033[0m"
    lines = [f"status: {status}"]
    for msg in report["diagnostics"]:
        lines.append(f"note: {msg}")

    def walk(obj, indent=0):
        pad = "  " * indent
        if isinstance(obj, dict):
            for k in sorted(obj):
                v = obj[k]
                if isinstance(v, (dict, list)):
                    lines.append(f"{pad}{k}:")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}{k}: {v}")
        elif isinstance(obj, list):
            for v in obj:
                if isinstance(v, (dict, list)):
                    lines.append(f"{pad}-")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}- {v}")

    walk(report["data"])
    return "\n".join(lines) + "\n"


EXIT_BY_STATUS = {"ok": 0, "violation": 2, "error": 1}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = None
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "group", None) or not getattr(args, "sub", None):
            raise UsageError("expected a GROUP and SUBCOMMAND; see --help")
        command = f"{args.group} {args.sub}"
        if args.group == "demo":
            payload = _payload_from_args(args, command)
            status, data, diagnostics = cmd_demo(args.sub, payload)
        else:
            handler = HANDLERS.get((args.group, args.sub))
            if handler is None:
                raise UsageError(f"unknown command {command!r}")
            payload = _payload_from_args(args, command)
            status, data, diagnostics = handler(payload)
    except UsageError as exc:
        return _emit(render_report("error", {"code": "E_INPUT"}, [str(exc)]), args)
    except AzumayaError as exc:
        return _emit(render_report("error", {"code": exc.code},
                                   [f"{exc.code}: {exc}"]), args)
    return _emit(render_report(status, data, diagnostics), args)


def _emit(report, args) -> int:
    text_mode = bool(getattr(args, "text", False)) if args is not None else False
    out_path = getattr(args, "out", None) if args is not None else None
    body = _render_text(report) if text_mode else serialize_report(report)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)
    return EXIT_BY_STATUS.get(report["status"], 1)


if __name__ == "__main__":
    sys.exit(main())
