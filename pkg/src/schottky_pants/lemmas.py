"""Exponent boosts and fixed-point predicates for compositions.

The searches make effective the following facts about a loxodromic alpha
(conjugated to diag(lam, 1/lam), |lam| > 1) and an auxiliary beta = [[a, b],
[c, d]] in the same coordinates:

    tr(beta alpha^n)            = a lam^n + d lam^-n
    tr(parabolic case)          = (a + d) + n c
    tr(gam^-n alpha gam^n beta) = cv lam^2n + bw lam^-2n + (au + dx)

|trace| > 2 forces a loxodromic element, and the modulus of each formula is
eventually bounded below by a strictly increasing function of |n|, so a
threshold N certified by that bound covers all larger exponents at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import moebius as mb
from .errors import (
    ExponentCapExceeded,
    HypothesisViolated,
    NotAnInvolution,
    SharesFixedPoint,
    SwapsBothFixedPoints,
)
from .moebius import (
    EPS,
    MoebiusMap,
    chordal_distance,
    classify,
    conjugate_to_standard,
    fixed_points,
)

DEFAULT_CAP = 10 ** 4


@dataclass
class BoostResult:
    """Certified exponent threshold.

    For every n with n >= threshold (direction "+") or n <= -threshold
    (direction "-"), the target composition is loxodromic with |trace| > M.
    """

    threshold: int
    directions: frozenset
    achieved: dict = field(default_factory=dict)  # direction -> |tr| at +-N

    def allows(self, n):
        if n >= self.threshold and "+" in self.directions:
            return True
        return n <= -self.threshold and "-" in self.directions


def boost_exponent(alpha, beta, m_target, eps=EPS, cap=DEFAULT_CAP):
    """Threshold N with beta alpha^n loxodromic and |tr| > M for |n| >= N.

    alpha must be loxodromic.  If beta interchanges both fixed points of
    alpha (a = d = 0 in conjugated coordinates) no exponent works and
    SwapsBothFixedPoints is raised.  If beta sends exactly one fixed point
    of alpha to the other, only one direction is valid: repulsive->attractive
    gives n >= N, attractive->repulsive gives n <= -N.
    """
    if classify(alpha, eps).tag != mb.LOXODROMIC:
        raise HypothesisViolated("base element must be loxodromic")
    t, canonical = conjugate_to_standard(alpha, eps)
    lam = canonical.a
    bb = (t @ beta) @ t.inverse()
    a, d = bb.a, bb.d
    scale = max(abs(a), abs(bb.b), abs(bb.c), abs(d))
    if abs(a) <= eps * scale and abs(d) <= eps * scale:
        raise SwapsBothFixedPoints("beta interchanges both fixed points of alpha")
    directions = set()
    if abs(a) > eps * scale:
        directions.add("+")
    if abs(d) > eps * scale:
        directions.add("-")

    absl = abs(lam)

    def value(n):
        return abs(a * lam ** n + d * lam ** (-n))

    def lower_bound(t):
        # valid in direction +: |a| L^t - |d| L^-t; in -: |d| L^t - |a| L^-t;
        # take the worst case over the admissible directions
        bounds = []
        if "+" in directions:
            bounds.append(abs(a) * absl ** t - abs(d) * absl ** (-t))
        if "-" in directions:
            bounds.append(abs(d) * absl ** t - abs(a) * absl ** (-t))
        return min(bounds)

    floor = max(m_target, 2.0)
    n_cert = 0
    while lower_bound(n_cert) <= floor:
        n_cert += 1
        if n_cert > cap:
            raise ExponentCapExceeded(f"cap {cap} reached (target {floor})")
    n = n_cert
    while n > 0:
        cand = n - 1
        ok = True
        for sgn, dname in ((1, "+"), (-1, "-")):
            if dname not in directions:
                continue
            if any(value(sgn * s) <= floor for s in range(cand, n_cert + 1)):
                ok = False
                break
        if ok and cand >= 0:
            n = cand
        else:
            break
    achieved = {
        dname: value(sgn * n)
        for sgn, dname in ((1, "+"), (-1, "-"))
        if dname in directions
    }
    return BoostResult(n, frozenset(directions), achieved)


def parabolic_boost(alpha, beta, m_target, eps=EPS, cap=DEFAULT_CAP):
    """Threshold for beta alpha^n with alpha parabolic: tr = (a + d) + n c.

    beta must not fix the fixed point of alpha (c != 0 in conjugated
    coordinates); both directions are always valid.
    """
    if classify(alpha, eps).tag != mb.PARABOLIC:
        raise HypothesisViolated("base element must be parabolic")
    t, _ = conjugate_to_standard(alpha, eps)
    bb = (t @ beta) @ t.inverse()
    a, c, d = bb.a, bb.c, bb.d
    scale = max(abs(a), abs(bb.b), abs(c), abs(d))
    if abs(c) <= eps * scale:
        raise SharesFixedPoint("beta fixes the fixed point of alpha")

    def value(n):
        return abs((a + d) + n * c)

    def lower_bound(t_):
        return t_ * abs(c) - abs(a + d)

    floor = max(m_target, 2.0)
    n_cert = 0
    while lower_bound(n_cert) <= floor:
        n_cert += 1
        if n_cert > cap:
            raise ExponentCapExceeded(f"cap {cap} reached (target {floor})")
    n = n_cert
    while n > 0:
        cand = n - 1
        if all(value(s) > floor and value(-s) > floor for s in range(cand, n_cert + 1)):
            n = cand
        else:
            break
    achieved = {"+": value(n), "-": value(-n)}
    return BoostResult(n, frozenset({"+", "-"}), achieved)


def fixed_point_limits(alpha, beta, sign, mode, eps=EPS):
    """Limit positions of the fixed points of beta alpha^k or alpha^k beta.

    With p* attractive and p_* repulsive for alpha:
        beta alpha^k,  k -> +inf: (beta(p*), p_*)
        beta alpha^k,  k -> -inf: (beta(p_*), p*)
        alpha^k beta,  k -> +inf: (p*, beta^-1(p_*))
        alpha^k beta,  k -> -inf: (p_*, beta^-1(p*))
    """
    if mode not in ("beta_alpha_k", "alpha_k_beta"):
        raise ValueError("mode must be 'beta_alpha_k' or 'alpha_k_beta'")
    rep, att = fixed_points(alpha, eps)
    if mode == "beta_alpha_k":
        if sign > 0:
            return beta(att), rep
        return beta(rep), att
    binv = beta.inverse()
    if sign > 0:
        return att, binv(rep)
    return rep, binv(att)


def conjugate_boost(gamma, alpha, beta, m_target, eps=EPS, cap=DEFAULT_CAP):
    """Threshold for gamma^-n alpha gamma^n beta.

    With gamma loxodromic (attractive p*, repulsive p_*), direction "+"
    requires alpha(p*) != p* and beta(p_*) != p_*; direction "-" requires
    alpha(p_*) != p_* and beta(p*) != p*.  The verifier additionally bumps N
    until the composition at the boundary exponents shares no fixed point
    with alpha or beta.
    """
    if classify(gamma, eps).tag != mb.LOXODROMIC:
        raise HypothesisViolated("conjugating element must be loxodromic")
    t, canonical = conjugate_to_standard(gamma, eps)
    lam = canonical.a
    aa = (t @ alpha) @ t.inverse()
    bb = (t @ beta) @ t.inverse()
    a, b, c, d = aa.a, aa.b, aa.c, aa.d
    u, v, w, x = bb.a, bb.b, bb.c, bb.d
    constant = a * u + d * x
    cv = c * v
    bw = b * w
    scale_a = max(abs(a), abs(b), abs(c), abs(d))
    scale_b = max(abs(u), abs(v), abs(w), abs(x))
    directions = set()
    if abs(c) > eps * scale_a and abs(v) > eps * scale_b:
        directions.add("+")
    if abs(b) > eps * scale_a and abs(w) > eps * scale_b:
        directions.add("-")
    if not directions:
        raise HypothesisViolated(
            "alpha/beta fix the relevant fixed points of gamma in both directions"
        )

    absl2 = abs(lam) ** 2

    def value(n):
        return abs(cv * lam ** (2 * n) + bw * lam ** (-2 * n) + constant)

    def lower_bound(t_):
        bounds = []
        if "+" in directions:
            bounds.append(abs(cv) * absl2 ** t_ - abs(bw) * absl2 ** (-t_) - abs(constant))
        if "-" in directions:
            bounds.append(abs(bw) * absl2 ** t_ - abs(cv) * absl2 ** (-t_) - abs(constant))
        return min(bounds)

    floor = max(m_target, 2.0)
    n_cert = 0
    while lower_bound(n_cert) <= floor:
        n_cert += 1
        if n_cert > cap:
            raise ExponentCapExceeded(f"cap {cap} reached (target {floor})")
    n = n_cert
    while n > 0:
        cand = n - 1
        ok = True
        for sgn, dname in ((1, "+"), (-1, "-")):
            if dname not in directions:
                continue
            if any(value(sgn * s) <= floor for s in range(cand, n_cert + 1)):
                ok = False
                break
        if ok:
            n = cand
        else:
            break

    # verifier: no shared fixed point with alpha or beta at the threshold
    def composition(n):
        g_n = gamma.power(n)
        return ((g_n.inverse() @ alpha) @ g_n) @ beta

    def shares(m1, m2):
        try:
            p1 = fixed_points(m1, eps)
            p2 = fixed_points(m2, eps)
        except Exception:
            return True
        return any(chordal_distance(p, q) < 100 * eps for p in p1 for q in p2)

    while True:
        bad = False
        for sgn, dname in ((1, "+"), (-1, "-")):
            if dname not in directions:
                continue
            comp = composition(sgn * max(n, 1))
            if classify(comp, eps).tag != mb.LOXODROMIC:
                bad = True
                break
            if shares(comp, alpha) or shares(comp, beta):
                bad = True
                break
        if not bad:
            break
        n += 1
        if n > cap:
            raise ExponentCapExceeded("shared-fixed-point bump exceeded cap")

    n = max(n, 1)
    achieved = {
        dname: value(sgn * n)
        for sgn, dname in ((1, "+"), (-1, "-"))
        if dname in directions
    }
    return BoostResult(n, frozenset(directions), achieved)


# ---------------------------------------------------------------------------
# fixed-point relation predicates


INTERCHANGES = "interchanges"
FIXES_BOTH = "fixes_both"
FIXES_ONE = "fixes_one"
NEITHER = "neither"


@dataclass(frozen=True)
class FixedPointRelation:
    kind: str
    fixes_first: bool = False
    fixes_second: bool = False
    first_to_second: bool = False
    second_to_first: bool = False

    def __eq__(self, other):
        if isinstance(other, str):
            return self.kind == other
        return (
            self.kind,
            self.fixes_first,
            self.fixes_second,
            self.first_to_second,
            self.second_to_first,
        ) == (
            other.kind,
            other.fixes_first,
            other.fixes_second,
            other.first_to_second,
            other.second_to_first,
        )


def swaps_or_fixes(beta, gamma, eps=EPS):
    """How beta acts on the fixed-point set of gamma (gamma != +-I).

    interchanges: beta transposes the two fixed points
    fixes_both:   both fixed (for a parabolic gamma: its single point fixed)
    fixes_one:    exactly one fixed, or one sent to the other
    neither:      no incidence at all
    """
    pts = fixed_points(gamma, eps)
    tol = 1000 * eps
    if len(pts) == 1:
        p = pts[0]
        fixed = chordal_distance(beta(p), p) < tol
        return FixedPointRelation(FIXES_BOTH if fixed else NEITHER, fixed, fixed)
    p, q = pts
    bp, bq = beta(p), beta(q)
    p_fix = chordal_distance(bp, p) < tol
    q_fix = chordal_distance(bq, q) < tol
    p_to_q = chordal_distance(bp, q) < tol
    q_to_p = chordal_distance(bq, p) < tol
    if p_to_q and q_to_p and not (p_fix or q_fix):
        return FixedPointRelation(INTERCHANGES, False, False, True, True)
    if p_fix and q_fix:
        return FixedPointRelation(FIXES_BOTH, True, True)
    if p_fix or q_fix or p_to_q or q_to_p:
        return FixedPointRelation(FIXES_ONE, p_fix, q_fix, p_to_q, q_to_p)
    return FixedPointRelation(NEITHER)


def sends_one_fixed_point_to_other(beta, gamma, eps=EPS):
    rel = swaps_or_fixes(beta, gamma, eps)
    return rel.kind == INTERCHANGES or rel.first_to_second or rel.second_to_first


def is_involution(j, eps=EPS):
    return (not j.is_identity(eps)) and abs(j.trace()) <= 1e5 * eps


@dataclass
class InvolutionGuards:
    """Predicate bundle about an order-two J (and optionally J1) against a
    crossing pair (alpha, beta).

    product_untouched: if J interchanges the fixed points of both alpha and
        beta (distinct fixed-point pairs), then J neither interchanges nor
        fixes the fixed points of beta alpha.
    composite_not_swapping: if J interchanges the fixed points of beta but
        not those of beta alpha^k (k != 0), then J beta does not interchange
        the fixed points of alpha.
    half_turn_products_nontrivial: if alpha^2 != id and J does not
        interchange alpha's fixed points, then (alpha J)^2 != id and
        (J alpha)^2 != id.
    residual_fixes: if both J and J1 J interchange the fixed points of
        gamma = beta alpha, then J1 fixes them.

    Each field is True/False when its hypothesis applies, None otherwise.
    """

    product_untouched: bool | None = None
    composite_not_swapping: bool | None = None
    half_turn_products_nontrivial: bool | None = None
    residual_fixes: bool | None = None


def involution_guards(j, j1, alpha, beta, k=1, eps=EPS):
    """Evaluate the half-rotation conclusions as checkable predicates."""
    if not is_involution(j, eps):
        raise NotAnInvolution(f"tr J = {j.trace()}")
    out = InvolutionGuards()
    ba = beta @ alpha
    alpha_trivial = alpha.is_identity(eps)
    beta_trivial = beta.is_identity(eps)

    rel_a = None if alpha_trivial else swaps_or_fixes(j, alpha, eps)
    rel_b = None if beta_trivial else swaps_or_fixes(j, beta, eps)
    if rel_a == INTERCHANGES and rel_b == INTERCHANGES:
        rel_ba = swaps_or_fixes(j, ba, eps)
        out.product_untouched = rel_ba.kind not in (INTERCHANGES, FIXES_BOTH)

    if k != 0 and not alpha_trivial and rel_b == INTERCHANGES:
        bak = beta @ alpha.power(k)
        if not bak.is_identity(eps) and swaps_or_fixes(j, bak, eps) != INTERCHANGES:
            jb = j @ beta
            out.composite_not_swapping = swaps_or_fixes(jb, alpha, eps) != INTERCHANGES

    if (
        not alpha_trivial
        and not (alpha @ alpha).is_identity(eps)
        and rel_a != INTERCHANGES
    ):
        aj = alpha @ j
        ja = j @ alpha
        out.half_turn_products_nontrivial = not (
            (aj @ aj).is_identity(eps) or (ja @ ja).is_identity(eps)
        )

    if j1 is not None and is_involution(j1, eps):
        j1j = j1 @ j
        if (
            swaps_or_fixes(j, ba, eps) == INTERCHANGES
            and swaps_or_fixes(j1j, ba, eps) == INTERCHANGES
        ):
            out.residual_fixes = swaps_or_fixes(j1, ba, eps) == FIXES_BOTH
    return out
