"""Production and verification of classical Schottky certificates.

A certificate for a pair of loxodromics (alpha, beta) consists of four
mutually disjoint circles arranged in pairs (c1, c1'), (c2, c2') such that
alpha maps the exterior of c1 onto the interior of c1' and beta does the
same for (c2, c2').  Candidate circles come from the invariant annuli of
each generator: in coordinates where the generator is w -> lam^2 w, the
circles |w| = r and |w| = |lam|^2 r bound a fundamental annulus, and the
family is searched over a geometric grid of radii.

Separations are measured scale-free (angular gap over circle size), so
configurations whose circles are many orders of magnitude smaller than
their positions are handled at full precision.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import moebius as mb
from .errors import CertificationFailed, HypothesisViolated
from .moebius import (
    EPS,
    Circle,
    MoebiusMap,
    SpherePoint,
    apply_circle,
    chordal_distance,
    classify,
    conjugate_to_standard,
    fixed_points,
    relative_cap_separation,
)

GRID_SIZE = 64
GRID_SPAN = 8  # radii from 2^-GRID_SPAN to 2^GRID_SPAN
MIN_MARGIN = 0.05  # smallest acceptable relative separation of the disks


@dataclass
class SchottkyCertificate:
    """Two generators with their paired circles.

    Circles are oriented so that the four interiors are mutually disjoint;
    alpha sends the exterior of c1 onto the interior of c1_img, beta does
    the same for (c2, c2_img).
    """

    alpha: MoebiusMap
    beta: MoebiusMap
    c1: Circle
    c1_img: Circle
    c2: Circle
    c2_img: Circle
    margin: float = 0.0

    def circles(self):
        return (self.c1, self.c1_img, self.c2, self.c2_img)


def _annulus_circles(m, radius, eps=EPS):
    """Paired circles of the invariant annulus of a loxodromic m at the
    given radius of the conjugated coordinate.

    Returns (c, c_img): c with interior on the repulsive side, c_img =
    image circle with interior on the attractive side, so that m maps the
    exterior of c onto the interior of c_img.
    """
    t, canonical = conjugate_to_standard(m, eps)
    tinv = t.inverse()
    inner = Circle.from_center_radius(0.0, radius, interior="inside")
    c = apply_circle(tinv, inner)
    c_img = apply_circle(m, c).flipped()
    return c, c_img


def _cap_arrays(circles):
    data = [c.cap_data() for c in circles]
    us = np.array([d[0] for d in data])
    rs = np.array([d[1] for d in data])
    flags = np.array([d[2] for d in data], dtype=bool)
    return us, rs, flags


def _relative_separations(data1, data2):
    """Pairwise relative gaps between two families of cap triples."""
    u1, r1, i1 = data1
    u2, r2, i2 = data2
    chord = np.linalg.norm(u1[:, None, :] - u2[None, :, :], axis=2)
    ang = 2.0 * np.arcsin(np.clip(chord / 2.0, 0.0, 1.0))
    both = i1[:, None] & i2[None, :]
    first = i1[:, None] & ~i2[None, :]
    second = ~i1[:, None] & i2[None, :]
    gap = np.where(
        both,
        ang - r1[:, None] - r2[None, :],
        np.where(
            first,
            r2[None, :] - ang - r1[:, None],
            np.where(
                second,
                r1[:, None] - ang - r2[None, :],
                ang + r1[:, None] + r2[None, :] - 2.0 * np.pi,
            ),
        ),
    )
    scale = r1[:, None] + r2[None, :]
    return gap / (scale + np.maximum(gap, 0.0) + 1e-300)


def certify(
    alpha,
    beta,
    eps=EPS,
    grid_size=GRID_SIZE,
    grid_span=GRID_SPAN,
    min_margin=MIN_MARGIN,
):
    """Search the annulus grids of both generators for a disjoint system.

    Raises CertificationFailed with the best relative margin found when no
    grid pair clears the floor; this is not a disproof (callers enlarge
    traces and retry).
    """
    for m, name in ((alpha, "alpha"), (beta, "beta")):
        if classify(m, eps).tag != mb.LOXODROMIC:
            raise HypothesisViolated(f"{name} must be loxodromic")
    pts_a = fixed_points(alpha, eps)
    pts_b = fixed_points(beta, eps)
    if any(chordal_distance(p, q) < 1e3 * eps for p in pts_a for q in pts_b):
        raise HypothesisViolated("generators share a fixed point")

    radii = np.exp2(np.linspace(-grid_span, grid_span, grid_size))
    circ_a = [_annulus_circles(alpha, r, eps) for r in radii]
    circ_b = [_annulus_circles(beta, r, eps) for r in radii]

    own_a = np.array([relative_cap_separation(c, ci) for c, ci in circ_a])
    own_b = np.array([relative_cap_separation(c, ci) for c, ci in circ_b])

    caps_a = _cap_arrays([c for c, _ in circ_a])
    caps_ai = _cap_arrays([ci for _, ci in circ_a])
    caps_b = _cap_arrays([c for c, _ in circ_b])
    caps_bi = _cap_arrays([ci for _, ci in circ_b])

    cross = np.minimum.reduce(
        [
            _relative_separations(caps_a, caps_b),
            _relative_separations(caps_a, caps_bi),
            _relative_separations(caps_ai, caps_b),
            _relative_separations(caps_ai, caps_bi),
        ]
    )
    total = np.minimum(cross, np.minimum(own_a[:, None], own_b[None, :]))
    i, j = np.unravel_index(int(np.argmax(total)), total.shape)
    best = float(total[i, j])
    if best <= min_margin:
        raise CertificationFailed(best)
    c1, c1_img = circ_a[i]
    c2, c2_img = circ_b[j]
    return SchottkyCertificate(alpha, beta, c1, c1_img, c2, c2_img, margin=best)


@dataclass
class VerifyReport:
    ok: bool
    margin: float
    failures: list

    def __bool__(self):
        return self.ok


def verify(cert, eps=1e-7):
    """Re-check a certificate: exact circle-image identities, pairwise
    disjointness of the four interiors, and orientation (a sample exterior
    point of c maps into the interior of the image circle).  The reported
    margin is the minimal relative separation."""
    failures = []
    for gen, c, c_img, tag in (
        (cert.alpha, cert.c1, cert.c1_img, "alpha"),
        (cert.beta, cert.c2, cert.c2_img, "beta"),
    ):
        image = apply_circle(gen, c)
        if not image.same_circle(c_img, max(eps, 1e-7)):
            failures.append(f"{tag}: image circle mismatch")
        # orientation: the cap-center antipode of the interior is exterior
        u, _ = c.cap()
        sample = _sphere_vector_point(-u)
        if c.in_interior(sample):
            failures.append(f"{tag}: sample point not exterior")
        if not c_img.in_interior(gen(sample)):
            failures.append(f"{tag}: exterior does not map into image interior")

    circles = cert.circles()
    margin = math.inf
    for x, y in itertools.combinations(range(4), 2):
        margin = min(margin, relative_cap_separation(circles[x], circles[y]))
    if margin <= 0:
        failures.append(f"interiors not disjoint (relative margin {margin:.3g})")
    return VerifyReport(not failures, margin, failures)


def _sphere_vector_point(u):
    """SpherePoint from a unit vector of the 2-sphere."""
    x, y, z = u
    if z > 1 - 1e-12:
        return SpherePoint.infinity()
    return SpherePoint(complex(x, y), 1.0 - z)


def free_group_spotcheck(cert, length=4, eps=EPS):
    """All freely reduced words of length <= L in the generators evaluate
    away from +-I (ping-pong consequence of a valid certificate)."""
    gens = {
        "A": cert.alpha,
        "a": cert.alpha.inverse(),
        "B": cert.beta,
        "b": cert.beta.inverse(),
    }
    inverse_of = {"A": "a", "a": "A", "B": "b", "b": "B"}
    frontier = {k: v for k, v in gens.items()}
    min_dev = math.inf
    for _ in range(length):
        for word, m in frontier.items():
            dev = min(
                float(np.max(np.abs(m.m - np.eye(2)))),
                float(np.max(np.abs(m.m + np.eye(2)))),
            )
            min_dev = min(min_dev, dev)
            if dev <= 100 * eps:
                return False
        new = {}
        for word, m in frontier.items():
            for letter, g in gens.items():
                if inverse_of[letter] != word[-1]:
                    new[word + letter] = m @ g
        frontier = new
    return min_dev > 100 * eps
