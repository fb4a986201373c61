"""Command line: ``toricdef hj``, ``toricdef pipeline`` and ``toricdef fuzz``.

JSON reports go to standard output and diagnostics to standard error.
Exit codes: 0 success, 1 usage or internal error, 2 obstruction,
3 property violation (analyzer/oracle disagreement, semicontinuity).

Job documents are JSON objects validated against ``schemas/job-v1.json``:

    {"base": {"kind": "equal-char-0", "N": 4},
     "chain": [2],
     "deformation": {"h": {"2": "x2"}},
     "analysis": {"fields": ["F5", "F7"], "tau": 1, "extension_degree": [1, 2]}}

``deformation.h`` maps i to the Series literal h_{i-1,i+1}, so that
g'_{i-1,i+1} = g_{i-1,i+1} + t*h_{i-1,i+1}; ``deformation.generators`` gives
every g'_{i,j} explicitly instead, keyed ``"i,j"``.

Literal grammar.  A Series is a sum of terms ``coef*x1^e1*...*xe^ee`` where
the coefficient is a Scalar literal, optionally in parentheses.  Equal
characteristic scalars are expressions in t with rational (or residue)
coefficients such as ``3/2*t^2 + 1``; mixed characteristic scalars are
decimal integers, read modulo p^(N+1).  Chains are JSON lists like ``[3,2]``.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .chain import Chain, hj_expand, hj_value
from .errors import ToricDefError
from .fields import FiniteField, parse_field
from .fuzz import exact_family, random_chain
from .jobs import (EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, STAGES, UsageError, Workspace, dump_report,
                   parse_job, run_stage)
from .literals import format_chain, parse_chain
from .scalars import DvrSpec
from .series import format_series


def _err(msg: str):
    print(msg, file=sys.stderr)


# --- hj -------------------------------------------------------------------------------

def cmd_hj(args) -> int:
    try:
        if args.nq is not None:
            n, _, q = args.nq.partition("/")
            n, q = int(n), int(q or 1)
            c = hj_expand(n, q)
        else:
            c = Chain(parse_chain(args.chain))
            n, q = hj_value(c)
    except (ValueError, ToricDefError) as exc:
        _err(f"hj: {exc}")
        return EXIT_USAGE
    dual = hj_expand(n, n - q) if n > 1 else Chain(())
    out = {"chain": list(c.a), "e": c.e, "n": n, "q": q, "dual": list(dual.a),
           "smooth": n == 1}
    print(json.dumps(out, sort_keys=True))
    label = "smooth" if n == 1 else f"X({','.join(map(str, c.a))})"
    _err(f"{label}: n/q = {n}/{q}, e = {c.e}, dual chain {format_chain(dual.a)}")
    return EXIT_OK


# --- pipeline -------------------------------------------------------------------------

def _read_job(path: str) -> dict:
    try:
        text = Path(path).read_text("utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read job: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"job is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise UsageError("job document must be a JSON object")
    return doc


def _summary(report: dict) -> str:
    res = report["result"]
    head = f"{report['stage']}: {report['status']}"
    if "obstruction" in res:
        o = res["obstruction"]
        return f"{head} at t-order {o['order']}, relation {o['triple']}"
    if "agreement" in res:
        pts = sum(s["points"] for s in res["scans"])
        sing = sum(len(s["singular_points"]) for s in res["scans"])
        return f"{head}; {pts} points, {sing} singular, agreement {res['agreement']}"
    if "scans" in res:
        sing = sum(s["singular"] for s in res["scans"])
        return f"{head}; {sing} singular points analyzed"
    return head


def run_pipeline(doc: dict, stage: str, seed=None, truncation=None, workspace=None, budget=None):
    """(report, exit code) for one stage of a job document."""
    job = parse_job(doc, truncation, budget, seed)
    return run_stage(job, stage, Workspace(workspace, _err))


def cmd_pipeline(args) -> int:
    try:
        doc = _read_job(args.job)
        report, code = run_pipeline(doc, args.stage, args.seed, args.truncation, args.workspace, args.budget)
    except UsageError as exc:
        _err(f"pipeline: {exc}")
        return EXIT_USAGE
    except ToricDefError as exc:
        _err(f"pipeline: {type(exc).__name__}: {exc}")
        return EXIT_USAGE
    sys.stdout.write(dump_report(report))
    _err(_summary(report))
    return code


# --- fuzz -----------------------------------------------------------------------------

def _case_seed(seed: int, k: int) -> int:
    return (seed * 1_000_003 + k) % 2**64


def _fuzz_params(args) -> dict:
    return {"count": args.count, "seed": args.seed, "kind": args.kind, "p": args.p,
            "truncation": args.truncation, "max_entry": args.max_entry, "max_e": args.max_e,
            "t_degree": args.t_degree, "fields": args.fields, "extension_degree": args.extension_degree,
            "budget": args.budget}


def fuzz_case_job(params: dict, k: int):
    """Draw case k; returns (job document or None, obstructed draws, non-polynomial draws)."""
    spec = DvrSpec(params["kind"], params["truncation"], params["p"])
    rng = random.Random(_case_seed(params["seed"], k))
    chain = random_chain(rng, params["max_entry"], params["max_e"])
    h, D, obstructed, nonexact = exact_family(chain, spec, rng, t_degree=params["t_degree"])
    if D is None:
        return None, obstructed, nonexact
    base = spec.to_dict()
    doc = {"version": 1, "base": base, "chain": list(chain.a), "seed": _case_seed(params["seed"], k),
           "deformation": {"h": {str(i): format_series(s) for i, s in sorted(h.items())}},
           "analysis": {"fields": params["fields"], "extension_degree": params["extension_degree"],
                        "budget": params["budget"]}}
    if spec.kind == "equal-char-0" or spec.kind == "equal-char-p":
        doc["analysis"]["tau"] = 1 + rng.randrange(min(parse_field(f).q for f in params["fields"]) - 1)
    return doc, obstructed, nonexact


def _fuzz_one(params: dict, k: int) -> dict:
    doc, obstructed, nonexact = fuzz_case_job(params, k)
    out = {"index": k, "obstructed_draws": obstructed, "nonexact_draws": nonexact}
    if doc is None:
        out["status"] = "skipped"
        return out
    try:
        report, code = run_pipeline(doc, "oracle-scan")
    except ToricDefError as exc:
        out.update(status="error", error=f"{type(exc).__name__}: {exc}", job=doc)
        return out
    res = report["result"]
    out.update(status=report["status"], code=code, chain=doc["chain"],
               points=sum(s["points"] for s in res.get("scans", [])),
               singular=sum(len(s["singular_points"]) for s in res.get("scans", [])),
               disagreements=len(res.get("disagreements", [])),
               wild=len(res.get("wild_triage", [])),
               violations=len(res.get("semicontinuity", {}).get("violations", [])))
    if code != EXIT_OK or out["wild"]:
        out["replay"] = {"job": doc, "stage": "oracle-scan", "expected": report}
    return out


def fuzz(params: dict, jobs: int = 1) -> dict:
    ks = range(params["count"])
    if jobs > 1 and params["count"] > 1:
        with ProcessPoolExecutor(jobs) as pool:
            cases = list(pool.map(_fuzz_one, [params] * len(ks), ks))
    else:
        cases = [_fuzz_one(params, k) for k in ks]
    agg = {"count": params["count"], "cases": 0, "skipped": 0, "errors": 0, "obstructed_draws": 0,
           "nonexact_draws": 0, "points": 0, "singular_points": 0, "disagreements": 0,
           "wild_disagreements": 0, "semicontinuity_violations": 0}
    payloads = []
    for c in cases:
        agg["obstructed_draws"] += c["obstructed_draws"]
        agg["nonexact_draws"] += c["nonexact_draws"]
        if c["status"] == "skipped":
            agg["skipped"] += 1
            continue
        if c["status"] == "error":
            agg["errors"] += 1
            payloads.append({"index": c["index"], "error": c["error"], "job": c["job"]})
            continue
        agg["cases"] += 1
        for key, src in (("points", "points"), ("singular_points", "singular"),
                         ("disagreements", "disagreements"), ("wild_disagreements", "wild"),
                         ("semicontinuity_violations", "violations")):
            agg[key] += c[src]
        if "replay" in c:
            payloads.append(dict(c["replay"], index=c["index"]))
    draws = agg["obstructed_draws"] + agg["nonexact_draws"] + agg["cases"] + agg["errors"]
    agg["obstruction_rate"] = round(agg["obstructed_draws"] / draws, 6) if draws else 0.0
    agg["passed"] = agg["cases"] - sum(1 for c in cases if c.get("code", 0) != EXIT_OK)
    return {"tool": "toricdef", "version": __version__, "command": "fuzz", "params": params,
            "aggregate": agg, "payloads": payloads}


def _replay(path: str) -> int:
    try:
        payload = json.loads(Path(path).read_text("utf-8"))
        report, code = run_pipeline(payload["job"], payload["stage"])
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        _err(f"replay: cannot read payload: {exc}")
        return EXIT_USAGE
    except ToricDefError as exc:
        _err(f"replay: {exc}")
        return EXIT_USAGE
    same = report == payload.get("expected")
    sys.stdout.write(dump_report(report))
    _err(f"replay: {'reproduced' if same else 'differs from the saved payload'}; {_summary(report)}")
    return code if same else EXIT_VIOLATION


def cmd_fuzz(args) -> int:
    if args.replay:
        return _replay(args.replay)
    try:
        spec = DvrSpec(args.kind, args.truncation, args.p)
        for f in args.fields:
            F = parse_field(f)
            if not isinstance(F, FiniteField) or F.m != 1:
                raise ValueError(f"fuzz fields must be prime fields, got {f}")
            if spec.kind == "mixed-char" and F.p == spec.p:
                raise ValueError(f"mixed-char needs fields of characteristic != {spec.p}")
            if spec.kind == "equal-char-p" and F.p != spec.p:
                raise ValueError(f"equal-char-{spec.p} needs fields of characteristic {spec.p}")
        if args.count < 0 or args.max_e < 3 or args.max_entry < 2:
            raise ValueError("need count >= 0, max-e >= 3 and max-entry >= 2")
    except ValueError as exc:
        _err(f"fuzz: {exc}")
        return EXIT_USAGE
    params = _fuzz_params(args)
    report = fuzz(params, args.jobs)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for pl in report["payloads"]:
            (out / f"case-{pl['index']:05d}.json").write_text(dump_report(pl), "utf-8")
    sys.stdout.write(dump_report(report))
    agg = report["aggregate"]
    _err(f"fuzz: {agg['cases']} cases, {agg['points']} points, {agg['singular_points']} singular, "
         f"{agg['disagreements']} disagreements, {agg['semicontinuity_violations']} violations, "
         f"obstruction rate {agg['obstruction_rate']}")
    bad = agg["disagreements"] or agg["semicontinuity_violations"] or agg["errors"]
    return EXIT_VIOLATION if bad else EXIT_OK


# --- entry point ----------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        _err(f"{self.prog}: error: {message}")
        raise SystemExit(EXIT_USAGE)


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x]


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="toricdef", description="Deformations of toric surface singularities.")
    ap.add_argument("--version", action="version", version=f"toricdef {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    hj = sub.add_parser("hj", help="Hirzebruch-Jung expansion and value")
    g = hj.add_mutually_exclusive_group(required=True)
    g.add_argument("--nq", help="fraction n/q")
    g.add_argument("--chain", help="chain literal such as [3,2]")
    hj.set_defaults(func=cmd_hj)

    pl = sub.add_parser("pipeline", help="run one stage on a job document")
    pl.add_argument("--job", required=True, help="JSON job document")
    pl.add_argument("--stage", required=True, choices=STAGES)
    pl.add_argument("--seed", type=int, help="overrides the job seed")
    pl.add_argument("--truncation", type=int, help="overrides base.N")
    pl.add_argument("--workspace", help="directory caching completed and normalized generators")
    pl.add_argument("--budget", type=int, help="point enumeration budget (candidate values)")
    pl.set_defaults(func=cmd_pipeline)

    fz = sub.add_parser("fuzz", help="random flat families checked against the oracle")
    fz.add_argument("--count", type=int, default=20)
    fz.add_argument("--seed", type=int, default=0)
    fz.add_argument("--kind", default="equal-char-0", choices=["equal-char-0", "equal-char-p", "mixed-char"])
    fz.add_argument("--p", type=int, help="prime for equal-char-p and mixed-char")
    fz.add_argument("--truncation", type=int, default=4)
    fz.add_argument("--max-entry", type=int, default=4)
    fz.add_argument("--max-e", type=int, default=5)
    fz.add_argument("--t-degree", type=int, default=1, help="t-degree of the random perturbations")
    fz.add_argument("--fields", type=lambda s: s.split(","), default=None,
                    help="comma separated prime fields, e.g. F5,F7")
    fz.add_argument("--extension-degree", type=_int_list, default=[1])
    fz.add_argument("--budget", type=int, default=10**6)
    fz.add_argument("--jobs", type=int, default=1, help="worker processes")
    fz.add_argument("--out", help="directory for replay payloads")
    fz.add_argument("--replay", help="re-run a saved payload and compare")
    fz.set_defaults(func=cmd_fuzz)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "fuzz" and args.fields is None:
        if args.kind == "equal-char-p":
            args.fields = [f"F{args.p}"] if args.p else []
        else:
            args.fields = [f"F{q}" for q in (5, 7, 11) if q != args.p][:2]
    try:
        return args.func(args)
    except KeyboardInterrupt:
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
