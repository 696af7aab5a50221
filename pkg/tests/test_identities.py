"""Registry behavior and the bilateral/Heine/special-case identities."""

import pytest
from mpmath import mp, mpf

from qseries import (
    DomainViolationError,
    QPoint,
    UnknownIdentityError,
    eval_identity,
    phi,
    pochhammer_inf,
    psi_bilateral,
    sample_domain,
)
from qseries.identities import register_builtin
from qseries.identities import _lhs_eq31, _lhs_eq33


def rel_diff(x, y):
    return abs(x - y) / max(abs(x), abs(y), mpf("1e-40"))


def test_builtin_count_and_ids():
    entries = register_builtin()
    assert len(entries) == 13
    ids = [e.id for e in entries]
    assert ids == ["eq-1.1", "eq-2.1", "eq-2.2", "eq-2.5", "eq-2.6",
                   "eq-2.8", "eq-2.9", "thm-2.1", "thm-2.2", "thm-2.3",
                   "eq-3.1", "eq-3.2", "eq-3.3"]


def test_full_registry_count(registry):
    assert len(registry) == 24
    assert len({e.id for e in registry}) == 24
    for entry in registry:
        assert entry.paper_ref and entry.domain_desc


def test_eval_eq11_example_point(registry, ctx40):
    point = QPoint(0.3, {"a": 0.5, "b": 0.05, "z": 0.4})
    res = eval_identity("eq-1.1", point, tol=1e-25, ctx=ctx40,
                        registry=registry)
    assert res.passed
    assert res.rel_err < mpf("1e-25")


def test_eval_eq32_closed_form(registry, ctx40):
    res = eval_identity("eq-3.2", QPoint(0.5, {}), ctx=ctx40,
                        registry=registry)
    assert res.passed
    assert rel_diff(res.lhs_value, mpf("7.5")) < mpf("1e-30")
    assert rel_diff(res.rhs_value, mpf("7.5")) < mpf("1e-30")


def test_domain_violation_names_constraint(registry, ctx40):
    # |z| <= |b/a| breaks the annulus
    point = QPoint(0.3, {"a": 0.5, "b": 0.4, "z": 0.5})
    with pytest.raises(DomainViolationError) as exc:
        eval_identity("thm-2.1", point, ctx=ctx40, registry=registry)
    assert "|b/a| < |z|" in str(exc.value)


def test_unknown_identity(registry):
    with pytest.raises(UnknownIdentityError):
        eval_identity("no-such-id", QPoint(0.5, {}), registry=registry)


def test_sample_domain_determinism(registry):
    a = sample_domain("eq-1.1", 5, seed=1, registry=registry)
    b = sample_domain("eq-1.1", 5, seed=1, registry=registry)
    assert len(a) == 5
    for p1, p2 in zip(a, b):
        assert p1.q == p2.q and p1.params == p2.params
    c = sample_domain("eq-1.1", 5, seed=2, registry=registry)
    assert any(p1.q != p2.q for p1, p2 in zip(a, c))


def test_sample_domain_slack_eq11(registry):
    for p in sample_domain("eq-1.1", 25, seed=1, registry=registry):
        ratio = abs(p["b"] / p["a"])
        assert ratio + 0.05 <= abs(p["z"]) <= 0.95


def test_sample_domain_eq31_ranges(registry):
    for p in sample_domain("eq-3.1", 3, seed=7, registry=registry):
        assert 0.05 < p.q < 0.6
        assert p.q + 0.05 <= p["z"] <= 0.95


def test_sample_domain_rejects_bad_count(registry):
    from qseries import SamplingError
    with pytest.raises(SamplingError):
        sample_domain("eq-1.1", 0, seed=1, registry=registry)


def test_heine_chain_three_way(registry, ctx40):
    # LHS direct 2phi1, Heine form (2.1), and iterated form (2.2) all agree
    point = QPoint(0.35, {"a": 0.8, "b": -0.4, "c": 0.3, "z": 0.55})
    r1 = eval_identity("eq-2.1", point, ctx=ctx40, registry=registry)
    r2 = eval_identity("eq-2.2", point, ctx=ctx40, registry=registry)
    assert r1.passed and r2.passed
    assert r1.lhs_value == r2.lhs_value  # same direct sum
    assert rel_diff(r1.rhs_value, r2.rhs_value) < mpf("1e-30")


def test_eq31_specializes_thm21(registry, ctx40):
    # sum z^n/(1+q^{n-1}) = q/(1+q) * 1psi1(-1/q; -1; q, z)
    for q, z in ((mpf("0.2"), mpf("0.6")), (mpf("0.4"), mpf("0.8"))):
        with ctx40.working():
            direct = _lhs_eq31(QPoint(q, {"z": z}), ctx40).value
            parent = psi_bilateral([-1 / q], [mpf(-1)], q, z, ctx40).value
            assert rel_diff(direct, q / (1 + q) * parent) < mpf("1e-32")
        res = eval_identity("thm-2.1", QPoint(q, {"a": -1 / q, "b": -1, "z": z}),
                            ctx=ctx40, registry=registry)
        assert res.passed


def test_eq32_specializes_thm22(registry, ctx40):
    for q in (mpf("0.2"), mpf("0.45")):
        with ctx40.working():
            point = QPoint(q, {"a": -q, "b": -q ** 3, "z": q})
        res = eval_identity("thm-2.2", point, ctx=ctx40, registry=registry)
        special = eval_identity("eq-3.2", QPoint(q, {}), ctx=ctx40,
                                registry=registry)
        assert res.passed and special.passed
        assert rel_diff(res.lhs_value, special.lhs_value) < mpf("1e-32")


def test_eq33_specializes_thm23(registry, ctx40):
    # LHS of (3.3) equals 1psi1(-1/q^2; -q^4; q^2, q) term by term: the
    # Pochhammer quotient telescopes to the printed three-factor denominator
    for q in (mpf("0.25"), mpf("0.5")):
        with ctx40.working():
            direct = _lhs_eq33(QPoint(q, {}), ctx40).value
            parent = psi_bilateral([-1 / q ** 2], [-q ** 4], q ** 2, q,
                                   ctx40).value
            assert rel_diff(direct, parent) < mpf("1e-32")
        res = eval_identity("thm-2.3",
                            QPoint(q ** 2, {"a": -1 / q ** 2, "b": -q ** 4,
                                            "z": q}),
                            ctx=ctx40, registry=registry)
        assert res.passed


def test_bilateral_samplers_cover_signs(registry):
    for ident in ("thm-2.1", "thm-2.2", "thm-2.3"):
        pts = sample_domain(ident, 25, seed=3, registry=registry)
        assert any(p["a"] < 0 for p in pts), f"{ident}: no negative a sampled"
        assert any(p["b"] < 0 for p in pts), f"{ident}: no negative b sampled"
        assert any(p["a"] > 0 for p in pts)


def test_transforms_match_parent_theorems(registry, ctx40):
    # (2.5)+(2.6) recombine into Theorem 2.1's RHS; check all four transforms
    # agree with their sides at a shared in-domain point
    q, a, b, z = mpf("0.3"), mpf("0.6"), mpf("0.45"), mpf("0.8")
    for ident in ("eq-2.5", "eq-2.6", "eq-2.8", "eq-2.9"):
        res = eval_identity(ident, QPoint(q, {"a": a, "b": b, "z": z}),
                            ctx=ctx40, registry=registry)
        assert res.passed, f"{ident} failed: relErr {res.rel_err}"
