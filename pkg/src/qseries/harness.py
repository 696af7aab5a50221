"""Verification campaigns: run identities over sampled or explicit points and
emit deterministic JSON/text reports."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Tuple

from mpmath import mpf, sqrt as mp_sqrt

from .errors import QSeriesError, UnknownIdentityError
from .precision import PrecisionCtx, real_str
from .qcore import QPoint
from .registry import eval_identity, sample_domain

TOOL_VERSION = "0.1.0"

# Relative stddev of lhs/rhs across points below which an all-points failure
# is flagged as a suspected constant (q-independent) offset.
_OFFSET_STDDEV = mpf("1e-6")


@dataclass(frozen=True)
class RunConfig:
    """Configuration of a verification campaign (echoed into the report)."""

    identities: Tuple[str, ...] = ("all",)
    points_per_identity: int = 5
    seed: int = 1
    digits: int = 40
    tolerance: Optional[float] = None  # None: per-identity default
    explicit_points: Tuple[QPoint, ...] = ()
    report_format: str = "json"

    def __post_init__(self):
        if self.points_per_identity < 1:
            raise ValueError("points_per_identity must be >= 1")
        if self.report_format not in ("json", "text"):
            raise ValueError(f"unknown report format {self.report_format!r}")


def full_registry() -> list:
    """All 24 registered identities, in module order."""
    from . import eta, identities, qgamma

    return (identities.register_builtin()
            + eta.register_eta_identities()
            + qgamma.register_qgamma_identities()
            + qgamma.classical_limit_identities())


def _resolve_ids(config: RunConfig, registry) -> list:
    known = [e.id for e in registry]
    if tuple(config.identities) == ("all",):
        return sorted(known)
    for ident in config.identities:
        if ident not in known:
            raise UnknownIdentityError(f"unknown identity id {ident!r}")
    return sorted(set(config.identities))


def _point_record(point: QPoint, digits: int) -> dict:
    params = {"q": real_str(point.q, digits)}
    for name in sorted(point.params):
        params[name] = real_str(point.params[name], digits)
    return params


def _suspected_offset(ratios, digits: int):
    """Mean lhs/rhs ratio when it is constant across points, else None."""
    if len(ratios) < 2:
        return None
    mean = sum(ratios) / len(ratios)
    if mean == 0:
        return None
    var = sum((r - mean) ** 2 for r in ratios) / len(ratios)
    if mp_sqrt(var) / abs(mean) < _OFFSET_STDDEV:
        return real_str(mean, digits)
    return None


def run(config: RunConfig, registry=None) -> dict:
    """Execute the campaign and return the report as a plain dict.

    Deterministic: identical config yields an identical report. Per-point
    evaluation errors are recorded per point, never fatal.
    """
    if registry is None:
        registry = full_registry()
    ids = _resolve_ids(config, registry)
    by_id = {e.id: e for e in registry}
    ctx = PrecisionCtx(digits=config.digits)
    digits = config.digits

    results = []
    for ident in ids:
        entry = by_id[ident]
        if config.explicit_points:
            points = list(config.explicit_points)
        else:
            points = sample_domain(ident, config.points_per_identity,
                                   config.seed, registry)
        recs = []
        ratios = []
        n_pass = 0
        n_err = 0
        worst = None
        for point in points:
            rec = {"params": _point_record(point, digits)}
            try:
                res = eval_identity(ident, point, tol=config.tolerance,
                                    ctx=ctx, registry=registry)
            except QSeriesError as exc:
                n_err += 1
                rec.update({"error": str(exc), "pass": False})
                recs.append(rec)
                continue
            rec.update({
                "lhs": real_str(res.lhs_value, digits),
                "rhs": real_str(res.rhs_value, digits),
                "absErr": real_str(res.abs_err, digits),
                "relErr": real_str(res.rel_err, digits),
                "pass": bool(res.passed),
                "termsUsed": int(res.terms_used),
            })
            recs.append(rec)
            if res.passed:
                n_pass += 1
            if res.rhs_value != 0:
                ratios.append(res.lhs_value / res.rhs_value)
            if worst is None or res.rel_err > worst:
                worst = res.rel_err

        aggregate = {
            "pass": bool(n_pass == len(points) and n_err == 0),
            "passCount": n_pass,
            "numPoints": len(points),
            "worstRelErr": real_str(worst, digits) if worst is not None else None,
        }
        if n_pass == 0 and n_err == 0 and len(points) >= 2:
            offset = _suspected_offset(ratios, digits)
            if offset is not None:
                aggregate["suspectedConstantOffset"] = offset
        results.append({
            "id": ident,
            "paperRef": entry.paper_ref,
            "points": recs,
            "aggregate": aggregate,
        })

    return {
        "version": TOOL_VERSION,
        "config": {
            "identities": list(config.identities),
            "pointsPerIdentity": config.points_per_identity,
            "seed": config.seed,
            "digits": config.digits,
            "tolerance": (None if config.tolerance is None
                          else real_str(config.tolerance, digits)),
            "explicitPoints": [_point_record(p, digits)
                               for p in config.explicit_points],
            "reportFormat": config.report_format,
        },
        "results": results,
    }


def report_passed(report: dict) -> bool:
    return all(r["aggregate"]["pass"] for r in report["results"])


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def render_text(report: dict) -> str:
    lines = [f"qseries verification report (v{report['version']})"]
    cfg = report["config"]
    lines.append(f"seed={cfg['seed']} digits={cfg['digits']} "
                 f"points={cfg['pointsPerIdentity']} "
                 f"tol={cfg['tolerance'] if cfg['tolerance'] else 'default'}")
    for res in report["results"]:
        agg = res["aggregate"]
        status = "PASS" if agg["pass"] else "FAIL"
        lines.append(f"{status}  {res['id']:10s} {agg['passCount']}/"
                     f"{agg['numPoints']} points  worst relErr "
                     f"{agg['worstRelErr']}  [{res['paperRef']}]")
        if "suspectedConstantOffset" in agg:
            lines.append(f"      suspected constant offset lhs/rhs = "
                         f"{agg['suspectedConstantOffset']}")
        for i, pt in enumerate(res["points"]):
            if "error" in pt:
                lines.append(f"      point {i}: ERROR {pt['error']}")
            elif not pt["pass"]:
                lines.append(f"      point {i}: relErr {pt['relErr']} "
                             f"params {pt['params']}")
    overall = "PASS" if report_passed(report) else "FAIL"
    lines.append(f"overall: {overall}")
    return "\n".join(lines) + "\n"
