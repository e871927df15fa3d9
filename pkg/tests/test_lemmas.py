import cmath
import math

import numpy as np
import pytest

from schottky_pants import lemmas as lm
from schottky_pants import moebius as mb
from schottky_pants.errors import (
    ExponentCapExceeded,
    HypothesisViolated,
    NotAnInvolution,
    SharesFixedPoint,
    SwapsBothFixedPoints,
)
from schottky_pants.lemmas import (
    FIXES_BOTH,
    FIXES_ONE,
    INTERCHANGES,
    NEITHER,
    boost_exponent,
    conjugate_boost,
    fixed_point_limits,
    involution_guards,
    parabolic_boost,
    swaps_or_fixes,
)
from schottky_pants.moebius import (
    MoebiusMap,
    chordal_distance,
    classify,
    fixed_points,
    normalize,
)

rng = np.random.default_rng(23)


def diag(a, d):
    return normalize([[a, 0], [0, d]])


def random_moebius(rng):
    while True:
        raw = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        if abs(np.linalg.det(raw)) > 1e-2:
            return normalize(raw)


def verify_boost(alpha, beta, res, m_target):
    """Re-verify a boost contract by classifying actual compositions."""
    for sgn, dname in ((1, "+"), (-1, "-")):
        if dname not in res.directions:
            continue
        for extra in (0, 1, 5):
            n = sgn * (res.threshold + extra)
            comp = beta @ alpha.power(n)
            cls = classify(comp)
            assert cls.tag == mb.LOXODROMIC, (n, cls.tag)
            assert abs(comp.trace()) > m_target


# -- boost_exponent ----------------------------------------------------------


def test_boost_documented_example():
    alpha = diag(2, 0.5)
    beta = MoebiusMap([[1, 1], [1, 2]])  # a=1, d=2, det=1
    res = boost_exponent(alpha, beta, 10.0)
    assert res.threshold == 4
    assert res.directions == {"+", "-"}
    assert abs(res.achieved["+"] - 16.125) < 1e-9
    assert abs(res.achieved["-"] - 32.0625) < 1e-9
    verify_boost(alpha, beta, res, 10.0)


def test_boost_swaps_both():
    alpha = diag(2, 0.5)
    beta = MoebiusMap([[0, 1], [-1, 0]])
    with pytest.raises(SwapsBothFixedPoints):
        boost_exponent(alpha, beta, 1.0)


def test_boost_identity_beta():
    res = boost_exponent(diag(2, 0.5), mb.identity(), 0.0)
    assert res.threshold == 1
    assert res.directions == {"+", "-"}


def test_boost_one_direction():
    # beta sends the repulsive point 0 of alpha to the attractive infinity
    # (d = 0): valid direction is n >= N only
    alpha = diag(2, 0.5)
    beta = normalize([[1, 1], [1, 0]])
    res = boost_exponent(alpha, beta, 5.0)
    assert res.directions == {"+"}
    verify_boost(alpha, beta, res, 5.0)


def test_boost_random_instances():
    for _ in range(300):
        g = random_moebius(rng)
        lam = 1.2 + 2 * rng.random() + 1j * rng.standard_normal() * 0.4
        alpha = diag(lam, 1 / lam).conjugate_by(g)
        beta = random_moebius(rng)
        m_target = 3.0 + 20 * rng.random()
        try:
            res = boost_exponent(alpha, beta, m_target)
        except SwapsBothFixedPoints:
            continue
        verify_boost(alpha, beta, res, m_target)


# -- parabolic_boost ---------------------------------------------------------


def test_parabolic_documented_example():
    alpha = normalize([[1, 1], [0, 1]])
    beta = normalize([[1, 0], [1, 1]])
    res = parabolic_boost(alpha, beta, 10.0)
    assert res.threshold == 13
    verify_boost(alpha, beta, res, 10.0)


def test_parabolic_shares_fixed_point():
    alpha = normalize([[1, 1], [0, 1]])
    beta = diag(2, 0.5)  # fixes infinity as well
    with pytest.raises(SharesFixedPoint):
        parabolic_boost(alpha, beta, 1.0)


def test_parabolic_m_zero():
    alpha = normalize([[1, 1], [0, 1]])
    beta = normalize([[1, 0], [1, 1]])
    res = parabolic_boost(alpha, beta, 0.0)
    assert res.threshold == 5
    verify_boost(alpha, beta, res, 0.0)


def test_parabolic_random_instances():
    par = normalize([[1, 1], [0, 1]])
    for _ in range(300):
        g = random_moebius(rng)
        alpha = par.conjugate_by(g)
        beta = random_moebius(rng)
        try:
            res = parabolic_boost(alpha, beta, 4.0)
        except SharesFixedPoint:
            continue
        verify_boost(alpha, beta, res, 4.0)


# -- fixed_point_limits ------------------------------------------------------


def test_limits_documented_example():
    alpha = diag(4, 0.25)
    beta = normalize([[1, 1], [0, 1]])
    pred = fixed_point_limits(alpha, beta, +1, "beta_alpha_k")
    assert pred[0].is_infinity()  # beta(infinity) = infinity
    assert abs(pred[1].to_complex()) < 1e-12


def test_limits_identity_beta():
    alpha = diag(4, 0.25)
    pred = fixed_point_limits(alpha, mb.identity(), +1, "beta_alpha_k")
    rep, att = fixed_points(alpha)
    assert chordal_distance(pred[0], att) < 1e-12
    assert chordal_distance(pred[1], rep) < 1e-12


@pytest.mark.parametrize("mode", ["beta_alpha_k", "alpha_k_beta"])
@pytest.mark.parametrize("sign", [1, -1])
def test_limits_match_computation(mode, sign):
    for _ in range(120):
        g = random_moebius(rng)
        lam = 1.3 + 2 * rng.random()
        alpha = diag(lam, 1 / lam).conjugate_by(g)
        beta = random_moebius(rng)
        k = 30 * sign
        comp = beta @ alpha.power(k) if mode == "beta_alpha_k" else alpha.power(k) @ beta
        try:
            actual = fixed_points(comp)
        except Exception:
            continue
        if len(actual) != 2:
            continue
        pred = fixed_point_limits(alpha, beta, sign, mode)
        # match as unordered sets at the stated tolerance
        d1 = max(chordal_distance(pred[0], actual[0]), chordal_distance(pred[1], actual[1]))
        d2 = max(chordal_distance(pred[0], actual[1]), chordal_distance(pred[1], actual[0]))
        assert min(d1, d2) < 1e-5


# -- conjugate_boost ---------------------------------------------------------


def test_conjugate_boost_example():
    gamma = diag(2, 0.5)
    ab = MoebiusMap([[1, 1], [1, 2]])  # fixes neither 0 nor infinity
    res = conjugate_boost(gamma, ab, ab, 100.0)
    for extra in (0, 1, 7):
        for sgn, dname in ((1, "+"), (-1, "-")):
            if dname not in res.directions:
                continue
            n = sgn * (res.threshold + extra)
            g_n = gamma.power(n)
            comp = ((g_n.inverse() @ ab) @ g_n) @ ab
            assert classify(comp).tag == mb.LOXODROMIC
            assert abs(comp.trace()) > 100.0


def test_conjugate_boost_trace_formula():
    # tr(g^-n a g^n b) = cv lam^2n + bw lam^-2n + (au + dx)
    gamma = diag(1.7, 1 / 1.7)
    alpha = random_moebius(rng)
    beta = random_moebius(rng)
    a, b, c, d = alpha.m.ravel()
    u, v, w, x = beta.m.ravel()
    lam = 1.7
    for n in (1, 3, 6):
        g_n = gamma.power(n)
        comp = ((g_n.inverse() @ alpha) @ g_n) @ beta
        predicted = c * v * lam ** (2 * n) + b * w * lam ** (-2 * n) + (a * u + d * x)
        assert abs(comp.trace() - predicted) < 1e-6 * max(1, abs(predicted))


def test_conjugate_boost_hypothesis_violated():
    gamma = diag(2, 0.5)
    fixer = diag(3, 1 / 3)  # fixes both 0 and infinity
    with pytest.raises(HypothesisViolated):
        conjugate_boost(gamma, fixer, fixer, 10.0)


def test_conjugate_boost_no_shared_fixed_points():
    for _ in range(100):
        g = random_moebius(rng)
        lam = 1.4 + rng.random()
        gamma = diag(lam, 1 / lam).conjugate_by(g)
        alpha = random_moebius(rng)
        beta = random_moebius(rng)
        try:
            res = conjugate_boost(gamma, alpha, beta, 20.0)
        except (HypothesisViolated, ExponentCapExceeded):
            continue
        for sgn, dname in ((1, "+"), (-1, "-")):
            if dname not in res.directions:
                continue
            n = sgn * res.threshold
            g_n = gamma.power(n)
            comp = ((g_n.inverse() @ alpha) @ g_n) @ beta
            assert classify(comp).tag == mb.LOXODROMIC
            pts = fixed_points(comp)
            for other in (alpha, beta):
                try:
                    pts2 = fixed_points(other)
                except Exception:
                    continue
                assert all(
                    chordal_distance(p, q) > 1e-7 for p in pts for q in pts2
                )


# -- swaps_or_fixes ----------------------------------------------------------


def test_swaps_or_fixes_interchange():
    j = MoebiusMap([[0, 1], [-1, 0]])
    gamma = diag(2, 0.5)
    assert swaps_or_fixes(j, gamma) == INTERCHANGES


def test_swaps_or_fixes_one():
    beta = normalize([[1, 1], [0, 1]])
    gamma = diag(2, 0.5)
    rel = swaps_or_fixes(beta, gamma)
    assert rel.kind == FIXES_ONE
    assert rel.fixes_second  # infinity (attractive) is fixed


def test_swaps_or_fixes_neither():
    beta = normalize([[3, 1], [1, 1]])
    gamma = diag(2, 0.5)
    assert swaps_or_fixes(beta, gamma).kind == NEITHER


def test_interchange_criterion_matrix_form():
    # an order-two J interchanges the fixed points of gamma iff
    # J gamma J = gamma^-1 (projectively)
    for _ in range(200):
        g = random_moebius(rng)
        lam = 1.5 + rng.random() + 0.6j * rng.standard_normal()
        gamma = diag(lam, 1 / lam).conjugate_by(g)
        j = random_involution(rng)
        lhs = (j @ gamma) @ j
        matrix_says = lhs.psl_distance(gamma.inverse()) < 1e-8
        predicate_says = swaps_or_fixes(j, gamma) == INTERCHANGES
        assert matrix_says == predicate_says


def random_involution(rng):
    # trace-zero element: [[a, b], [c, -a]] with -a^2 - bc = 1
    while True:
        a = rng.standard_normal() + 1j * rng.standard_normal()
        b = rng.standard_normal() + 1j * rng.standard_normal()
        if abs(b) < 0.1:
            continue
        c = (-1 - a * a) / b
        return MoebiusMap([[a, b], [c, -a]])


def swapping_involution(gamma, rng):
    """Order-two element interchanging the fixed points of gamma."""
    t, _ = mb.conjugate_to_standard(gamma)
    b = 0.5 + rng.random() + 1j * rng.standard_normal() * 0.3
    j0 = MoebiusMap([[0, b], [-1 / b, 0]])
    return (t.inverse() @ j0) @ t


def test_trace_equality_swap_criterion():
    # if beta sends one fixed point of alpha to the other and
    # tr^2 alpha = tr^2 beta, then alpha swaps beta's fixed points
    alpha = diag(2, 0.5)
    beta = normalize([[0, 1], [-1, 2.5]])
    assert abs(alpha.trace_sq() - beta.trace_sq()) < 1e-12
    rel = swaps_or_fixes(beta, alpha)
    assert rel.first_to_second or rel.second_to_first or rel.kind == INTERCHANGES
    back = swaps_or_fixes(alpha, beta)
    assert back.first_to_second or back.second_to_first or back.kind == INTERCHANGES


# -- involution_guards -------------------------------------------------------


def test_guards_not_involution():
    with pytest.raises(NotAnInvolution):
        involution_guards(diag(2, 0.5), None, diag(3, 1 / 3), diag(4, 0.25))


def test_guard_product_untouched():
    # J interchanging the fixed points of both alpha and beta
    for _ in range(100):
        g = random_moebius(rng)
        alpha = diag(2 + rng.random(), 1 / (2 + rng.random())).conjugate_by(g)
        j = swapping_involution(alpha, rng)
        # build beta with fixed points also swapped by j but distinct from alpha's
        h = random_moebius(rng)
        beta_pts = None
        pts_a = fixed_points(alpha)
        p = alpha(h(pts_a[0]))
        q = j(p)
        if chordal_distance(p, q) < 1e-4:
            continue
        # loxodromic with fixed points p, q: conjugate a diagonal by the map
        # sending (0, inf) -> (p, q)
        t = normalize([[p.z, q.z], [p.w, q.w]])
        beta = diag(3.0, 1 / 3.0).conjugate_by(t)
        if swaps_or_fixes(j, beta) != INTERCHANGES:
            continue
        if swaps_or_fixes(j, alpha) != INTERCHANGES:
            continue
        guards = involution_guards(j, None, alpha, beta)
        assert guards.product_untouched is True


def test_guard_half_turn_products():
    for _ in range(100):
        g = random_moebius(rng)
        alpha = diag(1.5 + rng.random(), 1.0).conjugate_by(g)
        j = random_involution(rng)
        if swaps_or_fixes(j, alpha) == INTERCHANGES:
            continue
        guards = involution_guards(j, None, alpha, alpha)
        assert guards.half_turn_products_nontrivial is True


def test_guard_residual_fixes():
    # both J and J1 J interchange the fixed points of gamma => J1 fixes them
    for _ in range(100):
        g = random_moebius(rng)
        gamma = diag(2.2, 1 / 2.2).conjugate_by(g)
        j = swapping_involution(gamma, rng)
        j2 = swapping_involution(gamma, rng)
        # choose j1 with j1 j = j2, i.e. j1 = j2 j^-1 = j2 j
        j1 = j2 @ j.inverse()
        if j1.is_identity(1e-9):
            continue
        # decompose gamma = beta alpha trivially
        guards = involution_guards(j, j1, mb.identity(), gamma)
        if guards.residual_fixes is None:
            continue
        assert guards.residual_fixes is True
