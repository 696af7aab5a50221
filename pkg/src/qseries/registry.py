"""Identity registry machinery: entries, evaluation, domain sampling."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from mpmath import mpf

from .errors import (
    DomainViolationError,
    EvaluationError,
    QSeriesError,
    SamplingError,
    UnknownIdentityError,
)
from .precision import DEFAULT_CTX, PrecisionCtx
from .qcore import QPoint, SeriesValue
from .rng import SplitMix64, stream_for

__all__ = ["IdentityEntry", "IdentityResult", "eval_identity", "sample_domain"]

_MAX_DRAWS = 10_000


@dataclass(frozen=True)
class IdentityEntry:
    """One registered identity: a domain predicate plus independent LHS and
    RHS evaluators. ``domain`` returns the list of violated constraints
    (empty means the point is admissible)."""

    id: str
    paper_ref: str
    param_names: tuple
    domain_desc: str
    default_tol: float
    domain: Callable[[QPoint], list]
    lhs: Callable[[QPoint, PrecisionCtx], SeriesValue]
    rhs: Callable[[QPoint, PrecisionCtx], SeriesValue]
    sampler: Callable[[SplitMix64], QPoint] = field(repr=False, default=None)


@dataclass(frozen=True)
class IdentityResult:
    point: QPoint
    lhs_value: mpf
    rhs_value: mpf
    abs_err: mpf
    rel_err: mpf
    passed: bool
    terms_used: int


def _lookup(identity_id: str, registry) -> IdentityEntry:
    if hasattr(registry, "get"):
        entry = registry.get(identity_id)
    else:
        entry = next((e for e in registry if e.id == identity_id), None)
    if entry is None:
        raise UnknownIdentityError(f"no identity registered as {identity_id!r}")
    return entry


def eval_identity(identity_id: str, point: QPoint, tol=None,
                  ctx: PrecisionCtx = DEFAULT_CTX,
                  registry=None) -> IdentityResult:
    """Evaluate both sides of a registered identity at one point.

    Deterministic for fixed inputs. Raises DomainViolationError naming the
    violated constraint, and EvaluationError with lhs/rhs attribution when a
    side fails to evaluate.
    """
    if registry is None:
        registry = default_registry()
    entry = _lookup(identity_id, registry)
    violations = entry.domain(point)
    if violations:
        raise DomainViolationError(
            f"{identity_id}: " + "; ".join(violations))
    with ctx.working():
        try:
            lhs = entry.lhs(point, ctx)
        except QSeriesError as exc:
            raise EvaluationError("lhs", exc) from exc
        try:
            rhs = entry.rhs(point, ctx)
        except QSeriesError as exc:
            raise EvaluationError("rhs", exc) from exc
        tol_v = mpf(tol) if tol is not None else mpf(entry.default_tol)
        abs_err = abs(lhs.value - rhs.value)
        floor = ctx.rel_floor()
        rel_err = abs_err / max(abs(lhs.value), abs(rhs.value), floor)
        return IdentityResult(
            point=point,
            lhs_value=lhs.value,
            rhs_value=rhs.value,
            abs_err=abs_err,
            rel_err=rel_err,
            passed=bool(rel_err <= tol_v),
            terms_used=lhs.terms_used + rhs.terms_used,
        )


def sample_domain(identity_id: str, count: int, seed: int,
                  registry=None) -> list:
    """Deterministic pseudo-random in-domain points for an identity.

    Candidates come from the entry's sampler (which builds in slack margins
    and sign coverage) and are rejected against the domain predicate.
    """
    if registry is None:
        registry = default_registry()
    entry = _lookup(identity_id, registry)
    if count < 1:
        raise SamplingError("count must be >= 1")
    rng = stream_for(identity_id, seed)
    points = []
    draws = 0
    while len(points) < count:
        draws += 1
        if draws > _MAX_DRAWS:
            raise SamplingError(
                f"no admissible point for {identity_id} in {_MAX_DRAWS} draws")
        point = entry.sampler(rng)
        if entry.domain(point):
            continue
        points.append(point)
    return points


def default_registry():
    # assembled lazily to avoid import cycles with the identity modules
    from .harness import full_registry
    return full_registry()
