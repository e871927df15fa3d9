"""Moebius transformations on the Riemann sphere.

Conventions used throughout the package:

* A transformation z -> (az+b)/(cz+d) is stored as a 2x2 complex matrix
  normalized to determinant 1.  Semantically it is the projective class
  {+M, -M}; equality and identity tests are sign-agnostic.
* Points of the sphere are homogeneous pairs (z : w), with infinity = (1 : 0).
* Generalized circles are Hermitian forms
      A|z|^2 + B zbar + Bbar z + C = 0,   A, C real,  AC - |B|^2 < 0,
  stored as the Hermitian matrix H = [[A, B], [Bbar, C]] acting on
  homogeneous vectors v = (z, w) by Q(v) = v* H v.  The side Q < 0 is the
  designated interior, so the sign of H carries the orientation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AmbiguousClass, IsIdentity, SingularMatrix

EPS = 1e-9

IDENTITY = "identity"
PARABOLIC = "parabolic"
ELLIPTIC = "elliptic"
LOXODROMIC = "loxodromic"


# ---------------------------------------------------------------------------
# points


class SpherePoint:
    """Point of the Riemann sphere as a homogeneous pair (z : w)."""

    __slots__ = ("z", "w")

    def __init__(self, z, w=1.0):
        z = complex(z)
        w = complex(w)
        n = math.hypot(abs(z), abs(w))
        if n == 0.0:
            raise ValueError("(0 : 0) is not a point of the sphere")
        self.z = z / n
        self.w = w / n

    @classmethod
    def infinity(cls):
        return cls(1.0, 0.0)

    @classmethod
    def from_complex(cls, value):
        """Affine point, or infinity for value None / inf."""
        if value is None:
            return cls.infinity()
        value = complex(value)
        if math.isinf(value.real) or math.isinf(value.imag):
            return cls.infinity()
        return cls(value, 1.0)

    def is_infinity(self, eps=EPS):
        return abs(self.w) <= eps * abs(self.z)

    def to_complex(self):
        """Affine coordinate z/w, or None at infinity."""
        if self.is_infinity():
            return None
        return self.z / self.w

    def sphere_vector(self):
        """Unit vector in R^3 under stereographic projection."""
        zw = self.z * np.conj(self.w)
        n2 = abs(self.z) ** 2 + abs(self.w) ** 2
        return np.array(
            [2 * zw.real / n2, 2 * zw.imag / n2, (abs(self.z) ** 2 - abs(self.w) ** 2) / n2]
        )

    def __repr__(self):
        c = self.to_complex()
        return "SpherePoint(inf)" if c is None else f"SpherePoint({c:.6g})"


def chordal_distance(p, q):
    """Chordal metric on the sphere; 0 for equal points, 2 for antipodes."""
    cross = p.z * q.w - q.z * p.w
    np_ = math.hypot(abs(p.z), abs(p.w))
    nq = math.hypot(abs(q.z), abs(q.w))
    return 2.0 * abs(cross) / (np_ * nq)


# ---------------------------------------------------------------------------
# transformations


class MoebiusMap:
    """Determinant-1 representative of a projective class of 2x2 matrices."""

    __slots__ = ("m",)

    def __init__(self, matrix):
        self.m = np.asarray(matrix, dtype=complex).reshape(2, 2)

    @property
    def a(self):
        return self.m[0, 0]

    @property
    def b(self):
        return self.m[0, 1]

    @property
    def c(self):
        return self.m[1, 0]

    @property
    def d(self):
        return self.m[1, 1]

    def trace(self):
        return self.m[0, 0] + self.m[1, 1]

    def trace_sq(self):
        t = self.trace()
        return t * t

    def inverse(self):
        a, b, c, d = self.m.ravel()
        return MoebiusMap([[d, -b], [-c, a]])

    def __matmul__(self, other):
        return MoebiusMap(self.m @ other.m)

    def power(self, n):
        if n == 0:
            return identity()
        base = self if n > 0 else self.inverse()
        return MoebiusMap(np.linalg.matrix_power(base.m, abs(n)))

    def conjugate_by(self, g):
        """g self g^{-1}."""
        return MoebiusMap(g.m @ self.m @ g.inverse().m)

    def __call__(self, point):
        if isinstance(point, SpherePoint):
            v = self.m @ np.array([point.z, point.w])
            return SpherePoint(v[0], v[1])
        return self(SpherePoint.from_complex(point)).to_complex()

    def is_identity(self, eps=EPS):
        dev = min(
            np.max(np.abs(self.m - np.eye(2))),
            np.max(np.abs(self.m + np.eye(2))),
        )
        return dev <= eps

    def psl_distance(self, other):
        """Projective distance: min over signs of the max-norm difference."""
        return min(
            float(np.max(np.abs(self.m - other.m))),
            float(np.max(np.abs(self.m + other.m))),
        )

    def __repr__(self):
        a, b, c, d = self.m.ravel()
        return f"MoebiusMap([[{a:.4g}, {b:.4g}], [{c:.4g}, {d:.4g}]])"


def identity():
    return MoebiusMap(np.eye(2))


def normalize(raw, eps=EPS):
    """Scale a 2x2 complex matrix to determinant 1.

    The square root of the determinant is the principal branch (nonnegative
    real part; nonnegative imaginary part on the negative real axis), which
    makes the representative deterministic.
    """
    m = np.asarray(raw, dtype=complex).reshape(2, 2)
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    scale = np.max(np.abs(m))
    if scale == 0.0 or abs(det) <= eps * scale * scale:
        raise SingularMatrix(f"determinant {det} too small")
    return MoebiusMap(m / np.sqrt(det))


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class ElementClass:
    """Classification tag with the distance of tr^2 from the deciding set.

    For the open classes (elliptic, loxodromic) the margin measures how far
    tr^2 sits from the classification boundary; for the eps-decided classes
    (parabolic, identity) it is the residual defect and is small by
    construction.
    """

    tag: str
    margin: float
    trace_sq: complex

    def __eq__(self, other):
        if isinstance(other, str):
            return self.tag == other
        return (self.tag, self.margin, self.trace_sq) == (
            other.tag,
            other.margin,
            other.trace_sq,
        )


def _segment_distance(t2):
    """Distance in C from t2 to the real segment [0, 4]."""
    x = min(max(t2.real, 0.0), 4.0)
    return abs(t2 - x)


def classify(m, eps=EPS):
    """Classify a normalized transformation by its squared trace.

    identity:   m = +-I within eps
    parabolic:  |tr^2 - 4| <= eps, m not +-I
    elliptic:   tr^2 real within eps and in [0, 4 - eps]
    loxodromic: tr^2 at distance >= eps from [0, 4]

    Raises AmbiguousClass when tr^2 lies within eps of the segment without
    satisfying any of the above.
    """
    t2 = m.trace_sq()
    if m.is_identity(eps):
        dev = min(np.max(np.abs(m.m - np.eye(2))), np.max(np.abs(m.m + np.eye(2))))
        return ElementClass(IDENTITY, float(dev), t2)
    if abs(t2 - 4.0) <= eps:
        return ElementClass(PARABOLIC, abs(t2 - 4.0), t2)
    if abs(t2.imag) <= eps and -eps <= t2.real <= 4.0 - eps:
        if t2.real < 0.0:
            raise AmbiguousClass(t2, _segment_distance(t2), eps)
        return ElementClass(ELLIPTIC, min(t2.real, 4.0 - t2.real), t2)
    dist = _segment_distance(t2)
    if dist < eps:
        raise AmbiguousClass(t2, dist, eps)
    return ElementClass(LOXODROMIC, dist, t2)


def is_loxodromic(m, eps=EPS):
    try:
        return classify(m, eps).tag == LOXODROMIC
    except AmbiguousClass:
        return False


# ---------------------------------------------------------------------------
# fixed points


def _kernel_vector(n):
    """Unit vector spanning the (numerical) kernel of a 2x2 matrix."""
    _, _, vh = np.linalg.svd(n)
    return np.conj(vh[-1])


def fixed_points(m, eps=EPS):
    """Fixed points of a non-identity transformation.

    Returns a 1-tuple for a parabolic, otherwise a pair ordered
    (repulsive, attractive) when |multiplier| != 1; for an elliptic the
    order is the deterministic one used by conjugate_to_standard.
    """
    cls = classify(m, eps)
    if cls.tag == IDENTITY:
        raise IsIdentity("identity fixes everything")
    if cls.tag == PARABOLIC:
        s = 1.0 if m.trace().real >= 0 else -1.0
        v = _kernel_vector(m.m - s * np.eye(2))
        return (SpherePoint(v[0], v[1]),)
    vals, vecs = np.linalg.eig(m.m)
    p0 = SpherePoint(vecs[0, 0], vecs[1, 0])
    p1 = SpherePoint(vecs[0, 1], vecs[1, 1])
    if abs(abs(vals[0]) - abs(vals[1])) > eps:
        # attractive fixed point carries the eigenvalue of larger modulus
        if abs(vals[0]) > abs(vals[1]):
            return (p1, p0)
        return (p0, p1)
    # elliptic: order so that the "attractive slot" eigenvalue has Im >= 0
    if vals[1].imag >= vals[0].imag:
        return (p0, p1)
    return (p1, p0)


def apply(m, p):
    """Image of a sphere point."""
    return m(p)


def conjugate_to_standard(m, eps=EPS):
    """Conjugating map T and canonical form of m: T m T^{-1} = canonical.

    Loxodromic/elliptic: canonical = diag(lam, 1/lam) with |lam| >= 1 (the
    repulsive fixed point goes to 0, the attractive one to infinity; for an
    elliptic the representative with Im(lam) >= 0 is chosen).  Parabolic:
    canonical = [[1, 1], [0, 1]].
    """
    cls = classify(m, eps)
    if cls.tag == IDENTITY:
        raise IsIdentity("no canonical form for the identity")
    if cls.tag == PARABOLIC:
        (p,) = fixed_points(m, eps)
        if p.is_infinity(eps):
            s = identity()
        else:
            s = normalize([[0.0, 1.0], [p.w, -p.z]])
        u = (s @ m @ s.inverse()).m
        u = u / u[0, 0]
        tau = u[0, 1]
        droot = np.sqrt(1.0 / tau)
        t = normalize(np.array([[droot, 0], [0, 1 / droot]]) @ s.m)
        return t, MoebiusMap([[1.0, 1.0], [0.0, 1.0]])
    rep, att = fixed_points(m, eps)
    t = normalize([[rep.w, -rep.z], [att.w, -att.z]])
    vals, vecs = np.linalg.eig(m.m)
    # eigenvalue belonging to the attractive fixed point
    att_vec = np.array([att.z, att.w])
    overlaps = [abs(np.vdot(vecs[:, k], att_vec)) for k in (0, 1)]
    lam = vals[0] if overlaps[0] >= overlaps[1] else vals[1]
    canonical = MoebiusMap([[lam, 0.0], [0.0, 1.0 / lam]])
    return t, canonical


# ---------------------------------------------------------------------------
# circles


class Circle:
    """Generalized circle as an oriented Hermitian form.

    Alongside the form, a (center, radius, bounded-interior) cache is kept
    when it can be computed stably: degenerate circles (tiny radius far from
    the origin) lose quadratically many digits when read back off the form,
    but are exact in center-radius coordinates.  The pushforward maintains
    the cache through the symmetric-point formula.
    """

    __slots__ = ("h", "cr")

    def __init__(self, h, eps=EPS, cr=None):
        h = np.asarray(h, dtype=complex).reshape(2, 2)
        # force exact Hermitian symmetry
        h = 0.5 * (h + np.conj(h.T))
        a, c = h[0, 0].real, h[1, 1].real
        det = a * c - abs(h[0, 1]) ** 2
        scale = np.max(np.abs(h))
        if scale == 0.0 or det > -eps * scale * scale:
            raise ValueError("form does not define a real circle (det >= 0)")
        self.h = h
        self.cr = cr  # (center, radius, interior_is_bounded) or None

    @classmethod
    def from_center_radius(cls, center, radius, interior="inside"):
        """Circle |z - center| = radius; interior = 'inside' or 'outside'."""
        c0 = complex(center)
        r = float(radius)
        h = np.array(
            [[1.0, -c0], [-np.conj(c0), abs(c0) ** 2 - r * r]], dtype=complex
        )
        bounded = interior == "inside"
        if not bounded:
            h = -h
        return cls(h, cr=(c0, r, bounded))

    @classmethod
    def through_points(cls, p, q, r):
        """Unoriented circle through three distinct sphere points (interior
        chosen arbitrarily as one of the two sides)."""
        rows = []
        for pt in (p, q, r):
            z, w = pt.z, pt.w
            zw = z * np.conj(w)
            rows.append([abs(z) ** 2, 2 * zw.real, 2 * zw.imag, abs(w) ** 2])
        _, _, vh = np.linalg.svd(np.array(rows))
        a, br, bi, c = vh[-1]
        return cls([[a, br + 1j * bi], [br - 1j * bi, c]])

    def evaluate(self, p):
        """Q(p) = v* H v; negative inside the designated interior."""
        v = np.array([p.z, p.w])
        return float(np.real(np.conj(v) @ self.h @ v))

    def contains(self, p, eps=EPS):
        return abs(self.evaluate(p)) <= eps * float(np.max(np.abs(self.h)))

    def in_interior(self, p):
        if self.cr is not None and not p.is_infinity():
            center, radius, bounded = self.cr
            inside = abs(p.to_complex() - center) < radius
            return inside if bounded else not inside
        if self.cr is not None:
            return not self.cr[2]  # infinity lies in every unbounded interior
        return self.evaluate(p) < 0

    def flipped(self):
        """Same circle, opposite interior."""
        c = Circle.__new__(Circle)
        c.h = -self.h
        c.cr = None
        if self.cr is not None:
            center, radius, bounded = self.cr
            c.cr = (center, radius, not bounded)
        return c

    def is_line(self, eps=EPS):
        return abs(self.h[0, 0]) <= eps * float(np.max(np.abs(self.h)))

    def center_radius(self):
        """Affine center and radius; None for a line."""
        if self.cr is not None:
            return self.cr[0], self.cr[1]
        a = self.h[0, 0].real
        if self.is_line():
            return None
        b = self.h[0, 1]
        c = self.h[1, 1].real
        center = -b / a
        r2 = (abs(b) ** 2 - a * c) / (a * a)
        return complex(center), math.sqrt(max(r2, 0.0))

    def cap_data(self):
        """(u, rho, interior_is_cap): bounded-cap representation.

        u is the unit sphere vector at the center of the cap bounded by the
        circle on the side NOT containing infinity (for a line: one chosen
        side), rho its angular radius, computed by small-angle-safe
        formulas; the flag says whether the designated interior is that cap.
        """
        if self.cr is None and self.is_line():
            u, rho = self._cap_from_form()
            return u, rho, True
        if self.cr is not None:
            center, radius, bounded = self.cr
        else:
            center, radius = self.center_radius()
            bounded = self.evaluate(SpherePoint.infinity()) > 0
        # images of diametral point pairs are antipodal on the spherical
        # circle; two chords give the cap plane when the midpoint degenerates
        direction = center / abs(center) if abs(center) > 0 else 1.0
        v1 = SpherePoint.from_complex(center + radius * direction).sphere_vector()
        v2 = SpherePoint.from_complex(center - radius * direction).sphere_vector()
        chord = float(np.linalg.norm(v1 - v2))
        mid = v1 + v2
        nm = float(np.linalg.norm(mid))
        if nm < 1e-9:
            # hemisphere cap: normal from two independent chords
            v3 = SpherePoint.from_complex(center + radius * direction * 1j).sphere_vector()
            v4 = SpherePoint.from_complex(center - radius * direction * 1j).sphere_vector()
            u = np.cross(v1 - v2, v3 - v4)
            u = u / (np.linalg.norm(u) + 1e-300)
            rho = math.pi / 2
        else:
            u = mid / nm
            rho = math.asin(min(1.0, chord / 2.0))
        # report the cap on the side not containing infinity
        if u[2] > math.cos(rho):
            u = -u
            rho = math.pi - rho
        return u, rho, bounded

    def _cap_from_form(self):
        a = self.h[0, 0].real
        c = self.h[1, 1].real
        b = self.h[0, 1]
        w = np.array([b.real, b.imag, (a - c) / 2.0])
        nw = float(np.linalg.norm(w))
        cos_rho = (a + c) / (2.0 * nw)
        cos_rho = min(1.0, max(-1.0, cos_rho))
        return -w / nw, math.acos(cos_rho)

    def cap(self):
        """Interior cap (u, rho) under stereographic projection."""
        if self.cr is None:
            return self._cap_from_form()
        u, rho, interior_is_cap = self.cap_data()
        if interior_is_cap:
            return u, rho
        return -u, math.pi - rho

    def same_circle(self, other, eps=1e-9):
        """Set equality (orientation ignored), tolerances relative to the
        circle size."""
        u1, r1, _ = self.cap_data()
        u2, r2, _ = other.cap_data()
        scale = max(min(r1, math.pi - r1), eps)
        return (
            float(np.linalg.norm(u1 - u2)) <= eps * (1 + scale)
            and abs(r1 - r2) <= eps * (1 + scale)
        ) or (
            float(np.linalg.norm(u1 + u2)) <= eps * (1 + scale)
            and abs((math.pi - r1) - r2) <= eps * (1 + scale)
        )

    def __repr__(self):
        cr = self.center_radius()
        if cr is None:
            return f"Circle(line, B={self.h[0,1]:.4g}, C={self.h[1,1].real:.4g})"
        return f"Circle(center={cr[0]:.4g}, radius={cr[1]:.4g})"


def apply_circle(m, circle):
    """Pushforward of an oriented circle: H -> M^{-*} H M^{-1}.

    Exact up to floating rounding; the interior side is transported to the
    image of the interior.  When the input carries a stable center-radius
    cache the image cache is computed by the symmetric-point formula, which
    stays accurate for circles far smaller than their position.
    """
    minv = m.inverse().m
    c = Circle.__new__(Circle)
    h = np.conj(minv.T) @ circle.h @ minv
    c.h = 0.5 * (h + np.conj(h.T))
    c.cr = None
    if circle.cr is not None:
        c.cr = _push_center_radius(m, circle.cr)
    return c


def _push_center_radius(m, cr):
    """(center, radius, bounded) of the Moebius image of a circle, or None
    when the image is a line (pole on the circle)."""
    z0, r, bounded = cr
    a, b, cc, d = m.m.ravel()
    if abs(cc) < 1e-300:
        center = (a * z0 + b) / d
        radius = abs(a / d) * r
        return (center, radius, bounded)
    pole = -d / cc
    dist = abs(pole - z0)
    if abs(dist - r) <= 1e-14 * max(1.0, r):
        return None  # image is (numerically) a line
    denom = np.conj(pole - z0)
    z_sym = z0 + (r * r) / denom
    center = m(SpherePoint.from_complex(z_sym))
    if center.is_infinity():
        return None
    center = center.to_complex()
    # radius from the image of a circle point perpendicular to the pole ray
    direction = (pole - z0) / dist
    q = z0 + r * direction * 1j
    image_q = m(SpherePoint.from_complex(q))
    if image_q.is_infinity():
        return None
    radius = abs(image_q.to_complex() - center)
    pole_inside = dist < r
    new_bounded = bounded ^ pole_inside
    return (center, radius, new_bounded)


def _cap_gap(data1, data2):
    """Angular gap between two oriented interiors given bounded-cap data.

    Positive iff the closed interiors are disjoint; computed case-wise so
    tiny caps never pass through a pi - rho cancellation.
    """
    u1, r1, int1 = data1
    u2, r2, int2 = data2
    chord = float(np.linalg.norm(np.asarray(u1) - np.asarray(u2)))
    ang = 2.0 * math.asin(min(1.0, chord / 2.0))
    if int1 and int2:
        return ang - r1 - r2
    if int1 and not int2:
        return r2 - ang - r1
    if int2 and not int1:
        return r1 - ang - r2
    return ang + r1 + r2 - 2.0 * math.pi


def cap_separation(c1, c2):
    """Angular gap between the interiors of two circles; positive iff the
    closed interiors are disjoint."""
    return _cap_gap(c1.cap_data(), c2.cap_data())


def relative_cap_separation(c1, c2):
    """Scale-free separation: the angular gap normalized by the circle
    sizes plus the positive part of the gap."""
    d1 = c1.cap_data()
    d2 = c2.cap_data()
    gap = _cap_gap(d1, d2)
    scale = d1[1] + d2[1]
    return gap / (scale + max(gap, 0.0) + 1e-300)


def circles_through(m, points):
    """Images of several sphere points under m (helper for tests)."""
    return [m(p) for p in points]
