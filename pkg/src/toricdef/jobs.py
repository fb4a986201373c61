"""Job documents and the pipeline stages behind the command line.

A job names a base ring, a chain and a deformation; each stage runs the
stages before it, reusing completed and normalized generator sets from a
workspace directory when one is given.  Reports are plain JSON-ready dicts
with sorted keys and no timings, so identical jobs give identical bytes.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import jsonschema

from . import __version__
from .chain import Chain, hj_value, verify_syzygies
from .deform import GeneratorSet, Obstruction, complete_to_flat, syzygy_residuals
from .errors import BudgetExceeded, NoProgress, ParseError, PointNotOnFiber, ToricDefError
from .fiber import PointSpec, analyze_point, semicontinuity_report
from .fields import FiniteField, _undigits, parse_field
from .literals import parse_chain, parse_series
from .oracle import DEFAULT_BUDGET, enumerate_points, extension_field, jacobian_corank, specialize_ideal
from .scalars import DvrSpec
from .series import Series, format_series
from .shift import NormalizedDeformation, check_far_form, normalize, shape_parts

STAGES = ("gens", "check-syzygies", "complete", "normalize", "analyze", "oracle-scan")

EXIT_OK, EXIT_USAGE, EXIT_OBSTRUCTION, EXIT_VIOLATION = 0, 1, 2, 3


class UsageError(ToricDefError):
    """Bad job document or arguments; maps to exit code 1."""


class StageFailure(ToricDefError):
    """A stage reached a verdict that stops the pipeline (obstruction or violation)."""

    def __init__(self, report: dict, code: int):
        super().__init__(report.get("status", "failed"))
        self.report = report
        self.code = code


def load_schema() -> dict:
    return json.loads(resources.files("toricdef").joinpath("schemas/job-v1.json").read_text("utf-8"))


def canonical(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def dump_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


@dataclass
class Job:
    doc: dict
    spec: DvrSpec
    chain: Chain
    h: dict[int, Series] | None
    generators: dict[tuple[int, int], Series] | None
    fields: list
    tau: int | None
    degrees: list[int]
    points: list | None
    budget: int
    seed: int

    def input_key(self) -> str:
        """Content hash of everything the completion and normalization depend on."""
        part = {"version": __version__, "base": self.spec.to_dict(), "chain": list(self.chain.a),
                "deformation": self.doc.get("deformation", {})}
        return hashlib.sha256(canonical(part).encode()).hexdigest()[:24]


def parse_job(doc: dict, truncation: int | None = None, budget: int | None = None,
              seed: int | None = None) -> Job:
    try:
        jsonschema.validate(doc, load_schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise UsageError(f"schema: {where}: {exc.message}") from None
    base = dict(doc["base"])
    if truncation is not None:
        base["N"] = truncation
    try:
        spec = DvrSpec(base["kind"], base["N"], base.get("p"))
        chain = Chain(parse_chain(doc["chain"]))
        chain.require_reduced()
    except (ValueError, ToricDefError) as exc:
        raise UsageError(f"schema: {exc}") from None
    e = chain.e
    deformation = doc.get("deformation", {})
    h = gens = None
    try:
        if "generators" in deformation:
            gens = {}
            for key, text in deformation["generators"].items():
                i, j = (int(x) for x in key.split(","))
                if not 1 <= i < j - 1 < e:
                    raise UsageError(f"generator pair {key} outside 1..{e}")
                gens[(i, j)] = parse_series(text, e, spec)
        else:
            h = {}
            for key, text in deformation.get("h", {}).items():
                i = int(key)
                if not 2 <= i <= e - 1:
                    raise UsageError(f"h index {i} outside 2..{e - 1}")
                h[i] = parse_series(text, e, spec)
    except ParseError as exc:
        raise UsageError(f"deformation: {exc}") from None
    analysis = doc.get("analysis", {})
    fields = [_check_field(parse_field(f), spec) for f in analysis.get("fields", [])] or _default_fields(spec)
    degrees = analysis.get("extension_degree", [1])
    if isinstance(degrees, int):
        degrees = [degrees]
    return Job(doc, spec, chain, h, gens, fields, analysis.get("tau"), sorted(set(degrees)),
               analysis.get("points"), budget or analysis.get("budget", DEFAULT_BUDGET),
               doc.get("seed", 0) if seed is None else seed)


def _default_fields(spec: DvrSpec) -> list:
    if spec.kind == "equal-char-p":
        return [FiniteField(spec.p)]
    return [FiniteField(q) for q in (5, 7, 11) if q != spec.p][:2]


def _check_field(F, spec: DvrSpec):
    if not isinstance(F, FiniteField) or F.m != 1:
        raise UsageError(f"analysis fields must be prime fields, got {F}")
    if spec.kind == "equal-char-p" and F.p != spec.p:
        raise UsageError(f"equal-char-{spec.p} needs fields of characteristic {spec.p}")
    if spec.kind == "mixed-char" and F.p == spec.p:
        raise UsageError(f"mixed-char specialization needs characteristic != {spec.p}")
    return F


def _tau(job: Job, F):
    if job.spec.kind == "mixed-char":
        return F.from_int(job.spec.p)
    tau = F.from_int(1 if job.tau is None else job.tau)
    if tau == F.zero:
        raise UsageError(f"tau vanishes in {F.name}")
    return tau


# --- envelope and cache -------------------------------------------------------------

def envelope(job: Job, stage: str, result: dict, status: str) -> dict:
    n, q = hj_value(job.chain)
    return {"tool": "toricdef", "version": __version__, "stage": stage,
            "base": job.spec.to_dict(), "truncation": job.spec.N, "seed": job.seed,
            "chain": {"a": list(job.chain.a), "e": job.chain.e, "n": n, "q": q},
            "input": job.doc, "status": status, "result": result}


def _gens_dict(G: GeneratorSet) -> dict:
    return {f"{p[0]},{p[1]}": format_series(g) for p, g in sorted(G.g.items())}


def _gens_from(job: Job, data: dict) -> GeneratorSet:
    g = {tuple(int(x) for x in k.split(",")): parse_series(v, job.chain.e, job.spec) for k, v in data.items()}
    return GeneratorSet(job.chain, g, job.spec)


class Workspace:
    """Cached stage outputs under a directory, keyed by job content hash."""

    def __init__(self, root: str | Path | None, log=None):
        self.root = Path(root) if root else None
        self.log = log or (lambda msg: None)
        if self.root:
            self.root.mkdir(parents=True, exist_ok=True)

    def get(self, job: Job, stage: str):
        if not self.root:
            return None
        path = self.root / f"{job.input_key()}.{stage}.json"
        if path.exists():
            self.log(f"cache hit: {path.name}")
            return json.loads(path.read_text("utf-8"))
        return None

    def put(self, job: Job, stage: str, data: dict):
        if self.root:
            path = self.root / f"{job.input_key()}.{stage}.json"
            path.write_text(canonical(data), "utf-8")


# --- stages ----------------------------------------------------------------------------

def stage_gens(job: Job, ws: Workspace) -> dict:
    if job.generators is not None:
        G = GeneratorSet(job.chain, job.generators, job.spec)
    else:
        G = GeneratorSet.from_tails(job.chain, {(i - 1, i + 1): s for i, s in job.h.items()}, job.spec)
    pending = [f"{i},{j}" for (i, j) in G.far_pairs if (i, j) not in G.g]
    return envelope(job, "gens", {"generators": _gens_dict(G), "pending": pending}, "ok")


def stage_check_syzygies(job: Job, ws: Workspace) -> dict:
    rep = verify_syzygies(job.chain)
    result = {"identities_checked": rep.checked, "identities_ok": rep.ok,
              "failure": list(rep.failure) if rep.failure else None}
    if not rep.ok:
        raise StageFailure(envelope(job, "check-syzygies", result, "violation"), EXIT_VIOLATION)
    return envelope(job, "check-syzygies", result, "ok")


def _complete(job: Job, ws: Workspace):
    cached = ws.get(job, "complete")
    if cached is not None:
        if "obstruction" in cached:
            return Obstruction(cached["obstruction"]["order"], tuple(cached["obstruction"]["triple"]),
                               cached["obstruction"]["kind"],
                               tuple(cached["obstruction"]["weight"]) if cached["obstruction"]["weight"] else None,
                               cached["obstruction"]["detail"])
        return _gens_from(job, cached["generators"])
    if job.generators is not None:
        G = GeneratorSet(job.chain, job.generators, job.spec)
        if not G.is_complete:
            raise UsageError("explicit generator maps must list every pair (i, j) with j - i >= 2")
        out = G
        for syz, form in syzygy_residuals(G):
            if not form.value.is_zero():
                out = Obstruction(form.value.min_t_degree(), syz.triple, syz.kind, None,
                                  f"relation residual {format_series(form.value)}")
                break
    else:
        out = complete_to_flat(job.chain, job.h, job.spec)
    if isinstance(out, Obstruction):
        ws.put(job, "complete", {"obstruction": out.to_dict()})
    else:
        ws.put(job, "complete", {"generators": _gens_dict(out)})
    return out


def stage_complete(job: Job, ws: Workspace) -> dict:
    G = _complete(job, ws)
    if isinstance(G, Obstruction):
        raise StageFailure(envelope(job, "complete", {"obstruction": G.to_dict()}, "obstruction"),
                           EXIT_OBSTRUCTION)
    return envelope(job, "complete", {"generators": _gens_dict(G)}, "ok")


def _normalized(job: Job, ws: Workspace) -> tuple[NormalizedDeformation, dict]:
    cached = ws.get(job, "normalize")
    if cached is None:
        G = _complete(job, ws)
        if isinstance(G, Obstruction):
            raise StageFailure(envelope(job, "complete", {"obstruction": G.to_dict()}, "obstruction"),
                               EXIT_OBSTRUCTION)
        try:
            D = normalize(G)
        except NoProgress as exc:
            raise StageFailure(envelope(job, "normalize", {"error": str(exc)}, "violation"),
                               EXIT_VIOLATION) from None
        cached = {"generators": _gens_dict(D.generators), "passes": D.passes,
                  "residual_orders": D.residuals, "audit": [r.to_dict() for r in D.audit]}
        ws.put(job, "normalize", cached)
    G = _gens_from(job, cached["generators"])
    c, h, d = {}, {}, {}
    for i in range(2, G.e):
        c[i], h[i], d[i], _ = shape_parts(G, i)
    D = NormalizedDeformation(job.chain, c, h, d, G, cached["passes"], cached["audit"],
                              cached["residual_orders"])
    return D, cached


def stage_normalize(job: Job, ws: Workspace) -> dict:
    D, cached = _normalized(job, ws)
    far = check_far_form(D)
    result = D.to_dict()
    result["audit"] = cached["audit"]
    result["far_form"] = far.to_dict()
    if not far:
        raise StageFailure(envelope(job, "normalize", result, "violation"), EXIT_VIOLATION)
    return envelope(job, "normalize", result, "ok")


def _point(F, coords) -> tuple:
    out = []
    for v in coords:
        if isinstance(v, list):
            if len(v) != F.m or any(not 0 <= x < F.p for x in v):
                raise UsageError(f"coordinate {v} is not an element of {F.name}")
            out.append(_undigits(v, F.p))
        else:
            out.append(F.from_int(v))
    return tuple(out)


def _runs(job: Job, D: NormalizedDeformation):
    """(field label, F_{q^m}, tau, specialized ideal, points) for each requested scan."""
    for F in job.fields:
        tau = _tau(job, F)
        S = specialize_ideal(D.generators, F, tau)
        for m in job.degrees:
            Fm = extension_field(S, m)
            if job.points is not None:
                pts = [_point(Fm, p) for p in job.points]
                for p in pts:
                    if len(p) != job.chain.e:
                        raise UsageError(f"point has {len(p)} coordinates, expected {job.chain.e}")
            else:
                try:
                    pts = enumerate_points(S, m, job.budget)
                except BudgetExceeded as exc:
                    raise UsageError(f"{Fm.name}: {exc}") from None
            yield Fm, tau, S, pts


def _semi_kind(r, chain: Chain) -> str:
    if not all(r.semicontinuity_ok):
        return "violated"
    if r.reduced is not None and tuple(r.reduced) == chain.a:
        return "all-equal"
    return "strict"


def _analyze(job: Job, D: NormalizedDeformation):
    scans, all_reports = [], []
    for Fm, tau, S, pts in _runs(job, D):
        reports = []
        for p in pts:
            try:
                reports.append(analyze_point(D, PointSpec(Fm, tau, p)))
            except PointNotOnFiber as exc:
                raise UsageError(str(exc)) from None
        all_reports.extend(reports)
        shown = reports if job.points is not None else [r for r in reports if r.singular]
        scans.append({"field": Fm.name, "tau": Fm.element_label(tau), "points": len(pts),
                      "singular": sum(r.singular for r in reports),
                      "reports": [dict(r.to_dict(), semicontinuity=_semi_kind(r, job.chain)) for r in shown]})
    return scans, all_reports


def stage_analyze(job: Job, ws: Workspace) -> dict:
    D, _ = _normalized(job, ws)
    scans, reports = _analyze(job, D)
    summary = semicontinuity_report(D, reports)
    result = {"normal_form": {k: v for k, v in D.to_dict().items() if k in ("c", "h", "d")},
              "scans": scans, "semicontinuity": summary.to_dict()}
    if not summary.ok:
        raise StageFailure(envelope(job, "analyze", result, "violation"), EXIT_VIOLATION)
    return envelope(job, "analyze", result, "ok")


def agrees(report, corank: int) -> bool:
    if report.singular:
        return corank == report.e_prime and corank >= 3
    return corank == 2


def stage_oracle_scan(job: Job, ws: Workspace) -> dict:
    D, _ = _normalized(job, ws)
    scans, disagreements, triage, reports = [], [], [], []
    for Fm, tau, S, pts in _runs(job, D):
        singular = []
        for p in pts:
            cor = jacobian_corank(S, p, Fm)
            if cor > 2:
                singular.append({"point": [Fm.element_label(x) for x in p], "corank": cor})
            r = analyze_point(D, PointSpec(Fm, tau, p), check=False)
            reports.append(r)
            if not agrees(r, cor):
                entry = {"field": Fm.name, "point": r.point, "corank": cor, "analyzer": r.to_dict()}
                (triage if r.wild else disagreements).append(entry)
        scans.append({"field": Fm.name, "tau": Fm.element_label(tau), "points": len(pts),
                      "singular_points": singular})
    semi = semicontinuity_report(D, reports)
    verdict = "fail" if disagreements else ("triage" if triage else "pass")
    result = {"scans": scans, "agreement": verdict, "disagreements": disagreements, "wild_triage": triage,
              "semicontinuity": semi.to_dict()}
    if disagreements or not semi.ok:
        raise StageFailure(envelope(job, "oracle-scan", result, "violation"), EXIT_VIOLATION)
    return envelope(job, "oracle-scan", result, "ok")


RUNNERS = {
    "gens": stage_gens,
    "check-syzygies": stage_check_syzygies,
    "complete": stage_complete,
    "normalize": stage_normalize,
    "analyze": stage_analyze,
    "oracle-scan": stage_oracle_scan,
}


def run_stage(job: Job, stage: str, ws: Workspace | None = None) -> tuple[dict, int]:
    """Run one stage; returns (report, exit code).  Usage errors propagate."""
    if stage not in RUNNERS:
        raise UsageError(f"unknown stage {stage!r}; expected one of {', '.join(STAGES)}")
    try:
        return RUNNERS[stage](job, ws or Workspace(None)), EXIT_OK
    except StageFailure as exc:
        return exc.report, exc.code
