"""Axis geometry in hyperbolic 3-space for families of elliptic elements.

A geodesic is recorded by its pair of ideal endpoints on the sphere.  Two
geodesics span a common plane iff their four endpoints are concyclic, which
is decided by the reality of a cross-ratio.  A family of elliptic elements
whose pairwise products are also elliptic has axes that either all lie in a
plane (endpoints on one circle), are all orthogonal to a plane (endpoint
pairs inverse with respect to one circle), or pass through one point of
hyperbolic space (a common invariant positive-definite Hermitian form).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import moebius as mb
from .errors import HypothesisViolated, NoAxis, NotEllipticFamily
from .moebius import (
    EPS,
    Circle,
    MoebiusMap,
    SpherePoint,
    chordal_distance,
    classify,
    fixed_points,
)
from .words import invariant_form

COMMON_PLANE = "common_plane"
COMMON_ORTHOGONAL_PLANE = "common_orthogonal_plane"
COMMON_H_POINT = "common_h_point"
NO_COMMON_STRUCTURE = "none"


@dataclass(frozen=True)
class Geodesic:
    """Unordered pair of distinct ideal endpoints."""

    p: SpherePoint
    q: SpherePoint

    def __post_init__(self):
        if chordal_distance(self.p, self.q) <= EPS:
            raise ValueError("geodesic endpoints must be distinct")

    def endpoints(self):
        return (self.p, self.q)


def axis(m, eps=EPS):
    """Geodesic joining the fixed points of an elliptic or loxodromic map."""
    tag = classify(m, eps).tag
    if tag not in (mb.ELLIPTIC, mb.LOXODROMIC):
        raise NoAxis(f"{tag} element has no axis")
    p, q = fixed_points(m, eps)
    return Geodesic(p, q)


def _cross_ratio(p1, p2, p3, p4):
    """[p1, p2; p3, p4] in homogeneous coordinates."""

    def det(u, v):
        return u.z * v.w - v.z * u.w

    num = det(p1, p3) * det(p2, p4)
    den = det(p1, p4) * det(p2, p3)
    return num, den


def points_concyclic(points, eps=EPS):
    """True iff the (up to four) points lie on one generalized circle."""
    distinct = []
    for p in points:
        if all(chordal_distance(p, q) > eps for q in distinct):
            distinct.append(p)
    if len(distinct) <= 3:
        return True
    num, den = _cross_ratio(*distinct[:4])
    if abs(den) < eps * abs(num):
        return True  # cross-ratio at infinity: real in the projective sense
    cr = num / den
    return abs(cr.imag) <= eps * (1.0 + abs(cr))


def axes_coplanar(g1, g2, eps=EPS):
    """True iff the two geodesics lie in a common plane (endpoints
    concyclic); geodesics sharing an endpoint are trivially coplanar."""
    return points_concyclic([g1.p, g1.q, g2.p, g2.q], eps)


def elliptic_product_class(alpha, beta, eps=EPS):
    """Classification of beta alpha for elliptic alpha and beta.

    When the axes are not coplanar the product must be loxodromic; this is
    asserted as a cross-check.
    """
    for m in (alpha, beta):
        if classify(m, eps).tag != mb.ELLIPTIC:
            raise NotEllipticFamily("inputs must be elliptic")
    product = beta @ alpha
    cls = classify(product, eps)
    if not axes_coplanar(axis(alpha, eps), axis(beta, eps), max(eps, 1e-7)):
        if cls.tag != mb.LOXODROMIC:
            raise HypothesisViolated(
                f"product of elliptics with non-coplanar axes classified {cls.tag}"
            )
    return cls


# ---------------------------------------------------------------------------
# family trichotomy


def _hermitian_rows_on_circle(p):
    """Row of the linear system H . (A, Re b, Im b, C): p lies on circle."""
    z, w = p.z, p.w
    zw = z * np.conj(w)
    return [abs(z) ** 2, 2 * zw.real, 2 * zw.imag, abs(w) ** 2]


def _hermitian_rows_inverse_pair(p, q):
    """Rows expressing that p and q are inverse points of the circle:
    the polarized form p* H q vanishes (complex equation, two real rows)."""
    a_coef = np.conj(p.z) * q.z
    b_coef = np.conj(p.z) * q.w          # coefficient of B
    bbar_coef = np.conj(p.w) * q.z       # coefficient of conj(B)
    c_coef = np.conj(p.w) * q.w
    # A a + B b + conj(B) bb + C c with B = br + i bi
    rows = []
    for part in (np.real, np.imag):
        rows.append(
            [
                part(a_coef),
                part(b_coef + bbar_coef),
                part(1j * (b_coef - bbar_coef)),
                part(c_coef),
            ]
        )
    return rows


def _solve_circle(rows, eps):
    """Least-squares circle from homogeneous linear conditions, or None."""
    mat = np.array(rows, dtype=float)
    _, svals, vh = np.linalg.svd(mat)
    if svals[-1] > eps * max(1.0, svals[0]):
        return None
    a, br, bi, c = vh[-1]
    h = np.array([[a, br + 1j * bi], [br - 1j * bi, c]], dtype=complex)
    det = a * c - (br * br + bi * bi)
    if det >= -eps:
        return None
    return Circle(h)


def elliptic_family_trichotomy(elements, eps=1e-8):
    """Common structure of the axes of a family of elliptic elements.

    Returns (kind, data):
      common_plane            -- all axis endpoints on one circle (the data)
      common_orthogonal_plane -- all endpoint pairs inverse w.r.t. one circle
      common_h_point          -- one invariant positive-definite form (the
                                 common fixed point in hyperbolic space)
      none                    -- hypothesis failure
    """
    nontrivial = [m for m in elements if not m.is_identity(eps)]
    if not nontrivial:
        raise NotEllipticFamily("no nontrivial elements")
    axes = []
    for m in nontrivial:
        if classify(m, eps).tag != mb.ELLIPTIC:
            raise NotEllipticFamily("family contains a non-elliptic element")
        axes.append(axis(m, eps))

    # all endpoints on one circle?
    rows = []
    for g in axes:
        rows.append(_hermitian_rows_on_circle(g.p))
        rows.append(_hermitian_rows_on_circle(g.q))
    if len(rows) >= 4:
        circle = _solve_circle(rows, eps)
        if circle is not None and all(
            circle.contains(p, 1e-6) for g in axes for p in g.endpoints()
        ):
            return COMMON_PLANE, circle

    # all endpoint pairs inverse with respect to one circle?
    rows = []
    for g in axes:
        rows.extend(_hermitian_rows_inverse_pair(g.p, g.q))
    circle = _solve_circle(rows, eps)
    if circle is not None:
        scale = float(np.max(np.abs(circle.h)))
        ok = True
        for g in axes:
            v1 = np.array([g.p.z, g.p.w])
            v2 = np.array([g.q.z, g.q.w])
            pol = np.conj(v1) @ circle.h @ v2
            if abs(pol) > 1e-6 * scale:
                ok = False
                break
        if ok:
            return COMMON_ORTHOGONAL_PLANE, circle

    # common fixed point in hyperbolic 3-space
    form = invariant_form(nontrivial, eps)
    if form is not None:
        if _verify_common_point(nontrivial, form, eps):
            return COMMON_H_POINT, form

    return NO_COMMON_STRUCTURE, None


def _verify_common_point(elements, form, eps):
    """Check in the ball model: after moving the invariant form to the
    standard one, every axis passes through the ball center, i.e. each
    element's fixed points are antipodal."""
    vals, vecs = np.linalg.eigh(form)
    if np.any(vals <= 0):
        return False
    root = vecs @ np.diag(np.sqrt(vals)) @ np.conj(vecs.T)
    t = MoebiusMap(np.linalg.inv(root) * np.sqrt(np.sqrt(np.linalg.det(root @ root))))
    for m in elements:
        mm = (t.inverse() @ m) @ t
        try:
            p, q = fixed_points(mm, eps)
        except Exception:
            return False
        # antipodal on the sphere: q = (-conj(w) : conj(z))
        anti = SpherePoint(-np.conj(p.w), np.conj(p.z))
        if chordal_distance(q, anti) > 1e-5:
            return False
    return True


def commutator_loxodromy(alpha, beta, plane_circle=None, eps=EPS):
    """Commutator beta^-1 alpha^-1 beta alpha of two rotations of a common
    plane (axes orthogonal to the plane, distinct, with elliptic product);
    the result is asserted loxodromic."""
    for m in (alpha, beta):
        if classify(m, eps).tag != mb.ELLIPTIC:
            raise HypothesisViolated("inputs must be elliptic")
    ax_a, ax_b = axis(alpha, eps), axis(beta, eps)
    if chordal_distance(ax_a.p, ax_b.p) < 1e3 * eps and chordal_distance(
        ax_a.q, ax_b.q
    ) < 1e3 * eps:
        raise HypothesisViolated("axes coincide")
    if chordal_distance(ax_a.p, ax_b.q) < 1e3 * eps and chordal_distance(
        ax_a.q, ax_b.p
    ) < 1e3 * eps:
        raise HypothesisViolated("axes coincide")
    product = beta @ alpha
    if classify(product, eps).tag != mb.ELLIPTIC:
        raise HypothesisViolated("product must be elliptic for this criterion")
    if plane_circle is not None:
        scale = float(np.max(np.abs(plane_circle.h)))
        for g in (ax_a, ax_b):
            v1 = np.array([g.p.z, g.p.w])
            v2 = np.array([g.q.z, g.q.w])
            if abs(np.conj(v1) @ plane_circle.h @ v2) > 1e-6 * scale:
                raise HypothesisViolated("axis not orthogonal to the given plane")
    comm = ((beta.inverse() @ alpha.inverse()) @ beta) @ alpha
    cls = classify(comm, eps)
    if cls.tag != mb.LOXODROMIC:
        raise HypothesisViolated(
            f"commutator classified {cls.tag}; hypotheses not satisfied"
        )
    return comm
