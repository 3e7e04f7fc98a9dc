"""Command-line front end: ``code-forge <subcommand> [flags]``.

Exit codes: 0 when every verdict passes, 1 when a verification verdict
fails (the witness is written alongside), 2 for usage, parse and budget errors.
"""

from __future__ import annotations

import argparse
import hashlib
import logging
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .ael import AELParams, ael_certify, ael_compose
from .artifacts import (certificate_to_json, code_digest, distance_to_json, dumps, graph_to_json, load_certificate,
                        load_code, load_distance, load_graph, load_spectral, read_json, write_json)
from .codes import folded_rs, min_distance, rs_outer_additive
from .decode import (DEFAULT_BUDGET, DecodingQuery, ceil_ratio, curve_decoding_check, list_decoding_check, list_recovery_check,
                     recovery_parameter_plan)
from .design import search_inner_code, tau_profile
from .errors import BudgetExceeded, CodeForgeError, ParseError, ViolationFound
from .gf import field_from_order
from .graphs import complete_bipartite, random_regular_bipartite, sigma2
from .suites import equivalence_suite, mixing_suite, quotient_identity_suite, strictification_suite

log = logging.getLogger("code_forge")

OK, FAILED, USAGE = 0, 1, 2


class VerdictFailed(Exception):
    def __init__(self, payload: dict):
        self.payload = payload
        super().__init__("verification verdict failed")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _emit(obj, out: str | None, args, artifacts: dict | None = None) -> None:
    """Write ``obj`` to ``out`` (with a manifest) or print it."""
    if out is None:
        sys.stdout.write(dumps(obj))
        return
    sha = write_json(out, obj)
    _manifest(Path(out).with_name(Path(out).name + ".manifest.json"), args, {Path(out).name: sha, **(artifacts or {})})


def _manifest(path: Path, args, artifacts: dict, verdicts: dict | None = None) -> None:
    inputs = {}
    for flag in ("code", "outer", "inner", "graph", "cert", "bundle"):
        val = getattr(args, flag, None)
        if val and Path(val).is_file():
            inputs[flag] = {"path": val, "sha256": hashlib.sha256(Path(val).read_bytes()).hexdigest()}
    manifest = {"kind": "manifest", "command": args.command, "argv": args.argv, "inputs": inputs,
                "seed": getattr(args, "seed", None), "budget": getattr(args, "budget", None),
                "workers": getattr(args, "workers", 1), "version": __version__,
                "wall_time_s": round(time.perf_counter() - args.t0, 6), "created": time.strftime("%Y-%m-%dT%H:%M:%S"),
                "verdicts": verdicts or {}, "artifacts": artifacts}
    path.write_text(dumps(manifest))


def _load(path: str, kind: str):
    obj = read_json(path)
    return load_code(obj, path) if kind == "code" else load_graph(obj, path)


# --- subcommands ---------------------------------------------------------------


def cmd_field(args):
    field = field_from_order(args.q)
    _emit({**field.to_json(), "q": field.q, "primitive": field.primitive}, args.out, args)
    return OK


def cmd_build_frs(args):
    code = folded_rs(field_from_order(args.q), args.s, args.n, args.k)
    _emit(code.to_json(), args.out, args)
    return OK


def cmd_build_outer(args):
    code = rs_outer_additive(field_from_order(args.q), args.k_in, args.n, args.K)
    _emit(code.to_json(), args.out, args)
    return OK


def cmd_search_inner(args):
    field = field_from_order(args.q)
    found = search_inner_code(field, args.k_in, args.s, args.d, args.r, args.epsilon, args.max_attempts,
                              args.seed, args.budget)
    log.info("certified inner code after %d attempts", found.attempts)
    extra = {}
    if args.cert:
        extra[Path(args.cert).name] = write_json(args.cert, certificate_to_json(found.certificate, found.code))
    _emit(found.code.to_json(), args.out, args, extra)
    return OK


def cmd_build_graph(args):
    if args.kind == "complete":
        graph = complete_bipartite(args.n)
    else:
        graph = random_regular_bipartite(args.n, args.d, args.seed)
    _emit(graph_to_json(graph, sigma2(graph, args.tol)), args.out, args)
    return OK


def cmd_certify_design(args):
    code = _load(args.code, "code")
    cert = tau_profile(code, args.r, args.budget, args.workers)
    _emit(certificate_to_json(cert, code), args.out, args)
    return OK


def cmd_compose_ael(args):
    outer, inner = _load(args.outer, "code"), _load(args.inner, "code")
    graph_obj = read_json(args.graph)
    graph = load_graph(graph_obj, args.graph)
    spectral = load_spectral(graph_obj) or sigma2(graph)
    dist = min_distance(outer, workers=args.workers)
    inner_cert = None
    if args.cert:
        inner_cert = load_certificate(read_json(args.cert), inner, args.cert)
    params = AELParams(outer, inner, graph, args.r, args.epsilon, dist.delta, inner_cert, spectral, dist)
    code = ael_compose(params)
    report = ael_certify(params, args.budget, code, args.workers)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    inner_cert = params.inner_certificate or tau_profile(inner, args.r, args.budget)
    certs = {"outer_distance": distance_to_json(dist, outer),
             "inner_design": certificate_to_json(inner_cert, inner),
             "spectral": spectral.to_json()}
    if report.certificate is not None:
        certs["ael_design"] = certificate_to_json(report.certificate, code)
    files = {"code.json": code.to_json(), "outer.json": outer.to_json(), "inner.json": inner.to_json(),
             "graph.json": graph_to_json(graph, spectral), "certificates.json": certs,
             "report.json": {"kind": "report", "r": args.r, "epsilon": str(params.epsilon),
                             "code_sha256": code_digest(code), **report.to_json()}}
    hashes = {name: write_json(out / name, obj) for name, obj in files.items()}
    verdicts = {"hypothesis": report.hypothesis_verdict,
                "conclusion": {None: "UNCHECKED", True: "PASS", False: "FAIL"}[report.conclusion_holds],
                "corollary": "UNCHECKED" if report.corollary is None else
                ("PASS" if report.corollary["holds"] else "FAIL")}
    _manifest(out / "manifest.json", args, hashes, verdicts)
    print(dumps({"bundle": str(out), "verdicts": verdicts}), end="")
    return OK if report.ok else FAILED


def cmd_verify_lemmas(args):
    suites = [quotient_identity_suite(args.trials, args.seed),
              strictification_suite(max(1, args.trials // 4), args.seed),
              mixing_suite(args.trials, args.seed),
              equivalence_suite(max(1, args.trials // 20), args.seed)]
    payload = {"seed": args.seed, "trials": args.trials, "suites": [s.to_json() for s in suites]}
    _emit(payload, args.out, args)
    return OK if all(s.ok for s in suites) else FAILED


def cmd_check_decoding(args):
    code = _load(args.code, "code")
    if args.cert:
        cert = load_certificate(read_json(args.cert), code, args.cert)
    else:
        need = {"list-decoding": max(1, args.r - 1), "curve": args.r,
                "list-recovery": ceil_ratio(args.ell, args.epsilon)}[args.check]
        cert = tau_profile(code, need, args.budget)
    budget = args.budget or DEFAULT_BUDGET
    try:
        if args.check == "list-decoding":
            rep = list_decoding_check(code, cert, args.r, args.mode, args.trials, args.seed, budget)
        elif args.check == "list-recovery":
            rep = list_recovery_check(code, cert, args.ell, args.epsilon, args.mode, args.trials, args.seed, budget)
        else:
            rep = curve_decoding_check(code, cert, DecodingQuery(ell=args.ell, trials=args.trials, a=args.a),
                                       args.r, args.epsilon, args.seed, budget)
    except ViolationFound as exc:
        raise VerdictFailed({"check": args.check, "verdict": "FAIL", "witness": exc.report.to_json()})
    _emit({"check": args.check, **rep.to_json(), "verdict": rep.verdict}, args.out, args)
    return OK


def cmd_plan_params(args):
    plan = recovery_parameter_plan(args.ell, args.R, args.epsilon)
    _emit(plan.to_json(), args.out, args)
    return OK


def _verify_bundle(bundle: Path) -> list[tuple[str, str, str]]:
    """Re-check a bundle from its files; returns (claim, verdict, detail) rows."""
    code = load_code(read_json(bundle / "code.json"), str(bundle / "code.json"))
    outer = load_code(read_json(bundle / "outer.json"), str(bundle / "outer.json"))
    inner = load_code(read_json(bundle / "inner.json"), str(bundle / "inner.json"))
    graph_obj = read_json(bundle / "graph.json")
    graph = load_graph(graph_obj, str(bundle / "graph.json"))
    certs = read_json(bundle / "certificates.json")
    report = read_json(bundle / "report.json")
    loc = str(bundle / "certificates.json")
    dist = load_distance(certs["outer_distance"], outer, loc + "#outer_distance")
    inner_cert = load_certificate(certs["inner_design"], inner, loc + "#inner_design")
    r, eps = int(report["r"]), Fraction(report["epsilon"])
    spectral = load_spectral(graph_obj) or sigma2(graph)
    params = AELParams(outer, inner, graph, r, eps, dist.delta, inner_cert, spectral, dist)
    rebuilt = ael_compose(params)
    rows = [("composed code matches outer/inner/graph", "PASS" if rebuilt == code else "FAIL",
             f"sha256 {code_digest(code)[:12]}"),
            ("rate = R_out * R_in", "PASS" if code.rate == outer.rate * inner.rate else "FAIL",
             f"{code.rate} = {outer.rate} * {inner.rate}")]
    from .ael import spectral_hypothesis
    holds, rhs = spectral_hypothesis(spectral.lambda_bound, code.field.q, r, eps, dist.delta)
    rows.append(("spectral hypothesis lambda < eps q^(-r^2/2) sqrt(delta_out)",
                 "HOLDS" if holds else "NotApplicable", f"lambda <= {spectral.lambda_bound:.3g}, rhs {rhs:.3g}"))
    if "ael_design" in certs:
        ael_cert = load_certificate(certs["ael_design"], code, loc + "#ael_design")
        for rr in range(1, r + 1):
            ok = ael_cert.tau_hat[rr] <= inner_cert.tau_hat[rr] + eps
            rows.append((f"design transfer tau_AEL({rr}) <= tau_in({rr}) + eps", "PASS" if ok else "FAIL",
                         f"{ael_cert.tau_hat[rr]} <= {inner_cert.tau_hat[rr]} + {eps}"))
        cor = report.get("corollary")
        if cor:
            d_ael = Fraction(cor["delta_ael"])
            ok = d_ael >= 1 - ael_cert.tau_hat[1]
            rows.append(("distance corollary delta >= 1 - tau(1)", "PASS" if ok else "FAIL",
                         f"{d_ael} >= {1 - ael_cert.tau_hat[1]}"))
    else:
        rows.append(("design transfer", "UNCHECKED", "composed code exceeded the budget"))
    return rows


def cmd_report(args):
    bundle = Path(args.bundle)
    rows = _verify_bundle(bundle)
    width = max(len(c) for c, _, _ in rows)
    lines = [f"{'claim':<{width}}  {'verdict':<13}  detail", "-" * (width + 30)]
    lines += [f"{c:<{width}}  {v:<13}  {d}" for c, v, d in rows]
    print("\n".join(lines))
    return FAILED if any(v == "FAIL" for _, v, _ in rows) else OK


# --- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=None, help="enumeration cap (default: CODE_FORGE_BUDGET or 1e7)")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--out", default=None)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="code-forge", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("field", cmd_field, "describe F_q")
    sp.add_argument("--q", type=int, required=True)

    sp = add("build-frs", cmd_build_frs, "folded Reed-Solomon code")
    for flag in ("--q", "--s", "--n", "--k"):
        sp.add_argument(flag, type=int, required=True)

    sp = add("build-outer", cmd_build_outer, "flattened extension-field Reed-Solomon code")
    for flag in ("--q", "--k-in", "--n", "--K"):
        sp.add_argument(flag, type=int, required=True)

    sp = add("search-inner", cmd_search_inner, "search for a certified random inner code")
    for flag in ("--q", "--k-in", "--s", "--d", "--r"):
        sp.add_argument(flag, type=int, required=True)
    sp.add_argument("--epsilon", type=_fraction, required=True)
    sp.add_argument("--max-attempts", type=int, default=200)
    sp.add_argument("--cert", help="also write the design certificate here")

    sp = add("build-graph", cmd_build_graph, "bipartite graph with a spectral certificate")
    sp.add_argument("--kind", choices=["complete", "random"], default="complete")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int, default=None)
    sp.add_argument("--tol", type=float, default=1e-9)

    sp = add("compose-ael", cmd_compose_ael, "compose and certify; writes a bundle directory")
    sp.add_argument("--outer", required=True)
    sp.add_argument("--inner", required=True)
    sp.add_argument("--graph", required=True)
    sp.add_argument("--cert", help="design certificate of the inner code")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--epsilon", type=_fraction, required=True)

    sp = add("certify-design", cmd_certify_design, "exact subspace-design profile of a code")
    sp.add_argument("--code", required=True)
    sp.add_argument("--r", type=int, required=True)

    sp = add("verify-lemmas", cmd_verify_lemmas, "seeded identity, strictification, mixing and equivalence suites")
    sp.add_argument("--trials", type=int, default=200)

    sp = add("check-decoding", cmd_check_decoding, "list-decoding, list-recovery or curve-decoding verifier")
    sp.add_argument("--code", required=True)
    sp.add_argument("--cert")
    sp.add_argument("--check", choices=["list-decoding", "list-recovery", "curve"], default="list-decoding")
    sp.add_argument("--r", type=int, default=2)
    sp.add_argument("--ell", type=int, default=1)
    sp.add_argument("--epsilon", type=_fraction, default=Fraction(1, 2))
    sp.add_argument("--a", type=int, default=None)
    sp.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    sp.add_argument("--trials", type=int, default=100)

    sp = add("plan-params", cmd_plan_params, "list-recovery parameter plan")
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--R", type=_fraction, required=True)
    sp.add_argument("--epsilon", type=_fraction, required=True)

    sp = add("report", cmd_report, "re-verify a bundle and print its verdict table")
    sp.add_argument("--bundle", required=True)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    args.argv, args.t0 = argv, time.perf_counter()
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.command == "build-graph" and args.kind == "random" and args.d is None:
        print("error: --d is required for random graphs", file=sys.stderr)
        return USAGE
    try:
        return args.func(args)
    except VerdictFailed as exc:
        sys.stdout.write(dumps(exc.payload))
        if args.out:
            write_json(args.out, exc.payload)
        return FAILED
    except (BudgetExceeded, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except CodeForgeError as exc:
        stage = f"[{exc.stage}] " if exc.stage else ""
        print(f"error: {stage}{type(exc).__name__}: {exc}", file=sys.stderr)
        return USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
