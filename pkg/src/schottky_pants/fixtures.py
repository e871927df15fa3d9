"""Representation fixtures with known ground truth.

All constructions return SurfaceRep objects whose generator images satisfy
the surface relator exactly (up to floating rounding):

* plumbing:            a_i planted as circle-pairing Schottky generators,
                       b_i commuting (same-axis) loxodromics.
* regular polygon:     holonomy of the regular 4g-gon with prescribed vertex
                       angle; angle 2pi/(4g) gives a smooth hyperbolic
                       structure (liftable), angle pi/2 at genus 2 gives the
                       branched structure whose commutator product is -I.
* parabolic:           all generator images parabolic; the first handle pair
                       fixes different points.
* elliptic planar:     all generator images rotations of the hyperbolic
                       plane over the unit disk (all-elliptic input).
* random exact:        seeded representation with prescribed lifting parity,
                       built from trace coordinates so the relator closes
                       exactly.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from . import moebius as mb
from .moebius import Circle, MoebiusMap, normalize
from .words import SurfaceRep, handle_letters


# ---------------------------------------------------------------------------
# basic builders


def loxodromic_fixing(p, q, multiplier):
    """Loxodromic with repulsive point p, attractive q, derivative 1/mult^2
    at q (mult = lam with |lam| > 1 gives translation toward q)."""
    t = normalize([[1.0, -p], [1.0, -q]])
    lam = complex(multiplier)
    core = MoebiusMap([[lam, 0], [0, 1 / lam]])
    return t.inverse() @ core @ t


def disk_rotation(center, angle):
    """Rotation of the unit-disk hyperbolic plane about an interior point."""
    z0 = complex(center)
    if abs(z0) >= 1:
        raise ValueError("center must be inside the unit disk")
    s = 1.0 / math.sqrt(1 - abs(z0) ** 2)
    t = MoebiusMap(np.array([[1.0, z0], [np.conj(z0), 1.0]]) * s)
    half = angle / 2.0
    core = MoebiusMap([[cmath.exp(1j * half), 0], [0, cmath.exp(-1j * half)]])
    return (t @ core) @ t.inverse()


def circle_pairing_map(c1, r1, c2, r2):
    """Moebius map sending the exterior of |z-c1|=r1 onto the interior of
    |z-c2|=r2 (inversion in the first circle followed by translation)."""
    return normalize([[c2, r1 * r2 - c1 * c2], [1.0, -c1]])


# ---------------------------------------------------------------------------
# plumbing fixture


def plumbing_rep(genus, seed=0, eps=1e-9):
    """a_i pair disjoint circles; b_i share the axis of a_i (so each
    commutator block is the identity and the relator closes exactly).

    Kept deliberately tame: small translation lengths keep the pipeline's
    multiplicative trace growth inside comfortable double precision.
    """
    rng = np.random.default_rng(seed)
    images = {}
    ring = 3.2 + 0.4 * rng.random()
    for i in range(1, genus + 1):
        base = 2 * math.pi * (i - 1) / genus
        jitter = 0.1 * rng.random()
        c1 = ring * cmath.exp(1j * (base + jitter))
        c2 = ring * cmath.exp(1j * (base + jitter + math.pi / genus))
        r1 = 0.9 + 0.2 * rng.random()
        r2 = 0.9 + 0.2 * rng.random()
        a = circle_pairing_map(c1, r1, c2, r2)
        rep_pt, att_pt = (p.to_complex() for p in mb.fixed_points(a))
        mult = 1.4 + 0.3 * rng.random() + 0.2j * rng.random()
        b = loxodromic_fixing(rep_pt, att_pt, mult)
        images[f"a{i}"] = a
        images[f"b{i}"] = b
    return SurfaceRep(genus, images, eps=eps)


def planted_schottky_pair(seed=0):
    """Two loxodromics pairing four planted mutually disjoint circles.

    Returns (alpha, beta, circles) where circles = (c1, c1', c2, c2') with
    their interiors oriented away from the common fundamental region.
    """
    rng = np.random.default_rng(seed)
    # four circle centers well separated on a large circle, random radii
    angles = np.sort(rng.random(4)) * 2 * math.pi
    while np.min(np.diff(np.concatenate([angles, [angles[0] + 2 * math.pi]]))) < 0.6:
        angles = np.sort(rng.random(4)) * 2 * math.pi
    radius_ring = 8.0 + 4.0 * rng.random()
    centers = [radius_ring * cmath.exp(1j * t) for t in angles]
    radii = [0.5 + rng.random() for _ in range(4)]
    perm = rng.permutation(4)
    c = [centers[k] for k in perm]
    r = [radii[k] for k in perm]
    alpha = circle_pairing_map(c[0], r[0], c[1], r[1])
    beta = circle_pairing_map(c[2], r[2], c[3], r[3])
    circles = tuple(
        Circle.from_center_radius(c[k], r[k], interior="inside") for k in range(4)
    )
    return alpha, beta, circles


# ---------------------------------------------------------------------------
# regular-polygon (Fuchsian / branched) fixture


def _disk_midpoint(u, v):
    """Hyperbolic midpoint of two points of the unit disk."""
    u, v = complex(u), complex(v)
    t = normalize([[1.0, -u], [-np.conj(u), 1.0]])
    vv = t(v)
    rho = abs(vv)
    half = math.tanh(0.5 * math.atanh(rho))
    mid = (vv / rho) * half if rho > 0 else 0.0
    return t.inverse()(mid)


def _map_three_points(src, dst):
    """Moebius map with src[k] -> dst[k] via cross-ratio normal forms."""

    def to_std(p1, p2, p3):
        # p1 -> 0, p2 -> 1, p3 -> inf
        return normalize(
            [
                [p2 - p3, -p1 * (p2 - p3)],
                [p2 - p1, -p3 * (p2 - p1)],
            ]
        )

    a = to_std(*src)
    b = to_std(*dst)
    return b.inverse() @ a


def regular_polygon_rep(genus, vertex_angle=None, eps=1e-9):
    """Holonomy of a regular 4g-gon with side pairings spelling the standard
    relator.  vertex_angle defaults to 2pi/(4g) (smooth structure); at genus
    2 the value pi/2 produces the branched structure with product -I."""
    n = 4 * genus
    if vertex_angle is None:
        vertex_angle = 2 * math.pi / n
    # circumradius from the right triangle (center, vertex, edge midpoint)
    cosh_r = 1.0 / (math.tan(math.pi / n) * math.tan(vertex_angle / 2.0))
    if cosh_r <= 1.0:
        raise ValueError("vertex angle too large for a hyperbolic polygon")
    r_eucl = math.tanh(0.5 * math.acosh(cosh_r))
    verts = [r_eucl * cmath.exp(2j * math.pi * k / n) for k in range(n)]

    # side k runs from verts[k] to verts[k+1]; sides carry the interleaved
    # labels (b_i^-1, a_i^-1, b_i, a_i) for i = 1..g in order around the
    # boundary; each generator map glues the side labeled with its inverse
    # onto the side labeled with the generator, reversing the traversal.
    # The vertex-cycle relation this produces is the standard relator after
    # inverting every a_i, so the a-images are the inverse gluing maps.
    labels = []
    for i in range(1, genus + 1):
        labels += [(f"b{i}", -1), (f"a{i}", -1), (f"b{i}", 1), (f"a{i}", 1)]

    side_of = {lab: k for k, lab in enumerate(labels)}
    images = {}
    for i in range(1, genus + 1):
        for name in (f"a{i}", f"b{i}"):
            k_pos = side_of[(name, 1)]
            k_neg = side_of[(name, -1)]
            src = (
                verts[k_neg],
                verts[(k_neg + 1) % n],
                _disk_midpoint(verts[k_neg], verts[(k_neg + 1) % n]),
            )
            dst = (
                verts[(k_pos + 1) % n],
                verts[k_pos],
                _disk_midpoint(verts[k_pos], verts[(k_pos + 1) % n]),
            )
            glue = _map_three_points(src, dst)
            images[name] = glue.inverse() if name.startswith("a") else glue
    return SurfaceRep(genus, images, eps=eps)


# ---------------------------------------------------------------------------
# parabolic-generator fixture


def parabolic_rep(genus, eps=1e-9):
    """All generator images parabolic; theta(b1) does not fix the fixed
    point of theta(a1).  Handle blocks cancel in mirrored pairs."""
    p = normalize([[1.0, 1.0], [0.0, 1.0]])   # fixes infinity
    q = normalize([[1.0, 0.0], [1.0, 1.0]])   # fixes 0
    images = {"a1": p, "b1": q, "a2": q, "b2": p}
    for i in range(3, genus + 1):
        # parabolic fixing the point i - 1, same-element pair (block = I)
        t = normalize([[0.0, 1.0], [1.0, -(i - 1.0)]])
        par = (t.inverse() @ p) @ t
        images[f"a{i}"] = par
        images[f"b{i}"] = par
    return SurfaceRep(genus, images, eps=eps)


# ---------------------------------------------------------------------------
# all-elliptic planar fixture


def elliptic_planar_rep(genus, eps=1e-9):
    """All images rotations of the plane over the unit disk; the first two
    handles carry the mirrored pair (P, Q), (Q, P) so the relator closes."""
    p = disk_rotation(0.30, math.pi / 2)
    q = disk_rotation(-0.20 + 0.15j, 2 * math.pi / 5)
    images = {"a1": p, "b1": q, "a2": q, "b2": p}
    for i in range(3, genus + 1):
        s = disk_rotation(0.1j * (i - 2), math.pi / 3)
        images[f"a{i}"] = s
        images[f"b{i}"] = s
    return SurfaceRep(genus, images, eps=eps)


# ---------------------------------------------------------------------------
# random exact representations with prescribed parity


def _standard_pair(x, y, z):
    """Pair (A, B) with tr A = x, tr B = y, tr AB = z."""
    zeta_roots = np.roots([1.0, -z, 1.0])
    zeta = zeta_roots[0] if abs(zeta_roots[0]) >= abs(zeta_roots[1]) else zeta_roots[1]
    a = MoebiusMap([[x, -1.0], [1.0, 0.0]])
    b = MoebiusMap([[0.0, zeta], [-1.0 / zeta, y]])
    return a, b


def _eig_frame(m, eps=1e-9):
    """Eigenvector matrix of a non-parabolic map, deterministically ordered
    (larger-modulus eigenvalue first; ties broken by imaginary part)."""
    vals, vecs = np.linalg.eig(m.m)
    if abs(abs(vals[0]) - abs(vals[1])) > eps:
        order = [0, 1] if abs(vals[0]) > abs(vals[1]) else [1, 0]
    else:
        order = [0, 1] if vals[0].imag >= vals[1].imag else [1, 0]
    v = vecs[:, order]
    return normalize(v), vals[order[0]]


def _conjugator_between(m_from, m_to, eps=1e-9):
    """g with g m_from g^{-1} = m_to for conjugate non-parabolic maps."""
    vf, lam_f = _eig_frame(m_from, eps)
    vt, lam_t = _eig_frame(m_to, eps)
    if abs(lam_f - lam_t) > abs(lam_f - 1.0 / lam_t):
        # frames matched eigenvalues in opposite order; swap columns
        swap = MoebiusMap([[0.0, 1.0], [1.0, 0.0]])
        vt = normalize(vt.m @ swap.m)
    return vt @ vf.inverse()


def _commutator_block(a, b):
    """b^-1 a^-1 b a (the per-handle factor of the relator image)."""
    return ((b.inverse() @ a.inverse()) @ b) @ a


def _pair_with_block(target, rng, eps=1e-9):
    """(A, B) whose commutator block equals the given SL2 matrix exactly."""
    tau = target.trace()
    for _ in range(64):
        x = 1.8 + 1.5 * rng.random() + 1j * rng.standard_normal()
        y = 1.8 + 1.5 * rng.random() + 1j * rng.standard_normal()
        # kappa(x, y, z) = x^2 + y^2 + z^2 - xyz - 2 = tau
        coeffs = [1.0, -x * y, x * x + y * y - 2.0 - tau]
        z = np.roots(coeffs)[0]
        if min(abs(tau - 2.0), abs(tau + 2.0)) < 1e-3:
            raise ValueError("target block too close to parabolic")
        a0, b0 = _standard_pair(x, y, z)
        block = _commutator_block(a0, b0)
        if abs(block.trace() - tau) > 1e-8:
            continue
        g = _conjugator_between(block, target, eps)
        a = a0.conjugate_by(g)
        b = b0.conjugate_by(g)
        if np.max(np.abs(_commutator_block(a, b).m - target.m)) < 1e-6:
            return a, b
    raise ValueError("failed to realize commutator block")


def random_exact_rep(genus, seed=0, parity=0, eps=1e-9):
    """Seeded representation with relator product exactly +-I and
    prod [B_i, A_i] = +I (parity 0) or -I (parity 1)."""
    rng = np.random.default_rng(seed)
    images = {}
    acc = np.eye(2, dtype=complex)
    for i in range(1, genus):
        lam = 1.4 + rng.random() + 0.5j * rng.standard_normal()
        pr = complex(rng.standard_normal(), rng.standard_normal())
        pa = complex(rng.standard_normal(), rng.standard_normal())
        while abs(pr - pa) < 0.5:
            pa = complex(rng.standard_normal(), rng.standard_normal())
        a = loxodromic_fixing(pr, pa, lam)
        raw = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        while abs(np.linalg.det(raw)) < 0.3:
            raw = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        b = normalize(raw)
        images[f"a{i}"] = a
        images[f"b{i}"] = b
        acc = acc @ _commutator_block(a, b).m
    # last handle closes the relator with the requested sign
    target = MoebiusMap(np.linalg.inv(acc))
    if parity:
        target = MoebiusMap(-target.m)
    a, b = _pair_with_block(target, rng, eps)
    images[f"a{genus}"] = a
    images[f"b{genus}"] = b
    return SurfaceRep(genus, images, eps=eps)
