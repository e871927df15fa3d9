import cmath
import math

import numpy as np
import pytest

from schottky_pants import elliptic as el
from schottky_pants import moebius as mb
from schottky_pants.errors import HypothesisViolated, NoAxis, NotEllipticFamily
from schottky_pants.elliptic import (
    COMMON_H_POINT,
    COMMON_ORTHOGONAL_PLANE,
    COMMON_PLANE,
    Geodesic,
    axes_coplanar,
    axis,
    commutator_loxodromy,
    elliptic_family_trichotomy,
    elliptic_product_class,
)
from schottky_pants.fixtures import disk_rotation
from schottky_pants.moebius import (
    MoebiusMap,
    SpherePoint,
    chordal_distance,
    classify,
    fixed_points,
    normalize,
)

rng = np.random.default_rng(31)

pt = SpherePoint.from_complex


def diag(a, d):
    return normalize([[a, 0], [0, d]])


def rotation(theta):
    return diag(cmath.exp(1j * theta / 2), cmath.exp(-1j * theta / 2))


def random_moebius(rng):
    while True:
        raw = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        if abs(np.linalg.det(raw)) > 1e-2:
            return normalize(raw)


def geodesic(z1, z2):
    return Geodesic(pt(z1), pt(z2))


# -- axis ----------------------------------------------------------------------


def test_axis_loxodromic():
    g = axis(diag(2, 0.5))
    ends = {p.to_complex() for p in g.endpoints()}
    assert 0 in ends and None in ends  # None encodes infinity


def test_axis_elliptic():
    g = axis(rotation(math.pi / 3))
    assert {p.to_complex() for p in g.endpoints()} == {0, None}


def test_axis_conjugated():
    h = random_moebius(rng)
    m = rotation(math.pi / 4).conjugate_by(h)
    g = axis(m)
    expect = [h(pt(0)), h(SpherePoint.infinity())]
    for p in g.endpoints():
        assert min(chordal_distance(p, q) for q in expect) < 1e-7


def test_axis_parabolic_rejected():
    with pytest.raises(NoAxis):
        axis(normalize([[1, 1], [0, 1]]))


# -- coplanarity ---------------------------------------------------------------


def test_coplanar_real_axis():
    assert axes_coplanar(geodesic(0, None), geodesic(1, -1))


def test_not_coplanar():
    assert not axes_coplanar(geodesic(0, None), geodesic(1, 1j))


def test_coplanar_shared_endpoint():
    assert axes_coplanar(geodesic(0, None), geodesic(0, 1))


def test_coplanar_symmetric_and_equivariant():
    for _ in range(100):
        g1 = geodesic(
            complex(rng.standard_normal(), rng.standard_normal()),
            complex(rng.standard_normal(), rng.standard_normal()),
        )
        g2 = geodesic(
            complex(rng.standard_normal(), rng.standard_normal()),
            complex(rng.standard_normal(), rng.standard_normal()),
        )
        h = random_moebius(rng)
        c0 = axes_coplanar(g1, g2)
        assert axes_coplanar(g2, g1) == c0
        hg1 = Geodesic(h(g1.p), h(g1.q))
        hg2 = Geodesic(h(g2.p), h(g2.q))
        assert axes_coplanar(hg1, hg2, 1e-6) == c0


# -- products of elliptics ------------------------------------------------------


def test_product_noncoplanar_axes_loxodromic():
    h = random_moebius(rng)
    alpha = rotation(math.pi / 2)  # axis (0, inf)
    t = normalize([[1, 1], [1, 1j]])  # sends (0, inf) to (1, something off-circle)
    beta = rotation(math.pi / 2).conjugate_by(t)
    if not axes_coplanar(axis(alpha), axis(beta)):
        cls = elliptic_product_class(alpha, beta)
        assert cls.tag == mb.LOXODROMIC


def test_product_same_axis():
    a = rotation(math.pi / 3)
    b = rotation(math.pi / 5)
    cls = elliptic_product_class(a, b)
    assert cls.tag == mb.ELLIPTIC


def test_product_noncoplanar_sweep():
    # elliptic pairs with non-coplanar axes always give loxodromic products
    count = 0
    for _ in range(1000):
        g1 = random_moebius(rng)
        g2 = random_moebius(rng)
        alpha = rotation(0.3 + 2.4 * rng.random()).conjugate_by(g1)
        beta = rotation(0.3 + 2.4 * rng.random()).conjugate_by(g2)
        if axes_coplanar(axis(alpha), axis(beta), 1e-6):
            continue
        count += 1
        cls = elliptic_product_class(alpha, beta)
        assert cls.tag == mb.LOXODROMIC
    assert count > 800


def test_coplanar_product_axis_leaves_plane():
    # rotations of the plane over the real axis with crossing axes: if the
    # product is elliptic its axis meets the plane only at the crossing point
    for _ in range(300):
        # axes in the real-axis plane: endpoints on R u inf, crossing
        x1, x2 = sorted(rng.standard_normal(2) * 2)
        y1, y2 = sorted(rng.standard_normal(2) * 2)
        if not (x1 < y1 < x2 < y2):
            continue  # need linked endpoint pairs for crossing axes
        t1 = normalize([[1, x1], [1, x2]]).inverse()
        t2 = normalize([[1, y1], [1, y2]]).inverse()
        alpha = rotation(0.4 + 2 * rng.random()).conjugate_by(t1)
        beta = rotation(0.4 + 2 * rng.random()).conjugate_by(t2)
        product = beta @ alpha
        if classify(product).tag != mb.ELLIPTIC:
            continue
        g = axis(product)
        ends = [p for p in g.endpoints()]
        # endpoints are complex conjugates off the real axis, not in it
        for p in ends:
            c = p.to_complex()
            assert c is None or abs(c.imag) > 1e-9


# -- trichotomy ------------------------------------------------------------------


def test_trichotomy_orthogonal_plane():
    fam = [
        disk_rotation(0.3, math.pi / 2),
        disk_rotation(-0.2 + 0.1j, math.pi / 3),
        disk_rotation(0.1j, 2 * math.pi / 5),
    ]
    kind, circle = elliptic_family_trichotomy(fam)
    assert kind == COMMON_ORTHOGONAL_PLANE
    # the circle is the unit circle
    center, radius = circle.center_radius()
    assert abs(center) < 1e-6
    assert abs(radius - 1) < 1e-6


def test_trichotomy_common_plane():
    # rotations with axes in the plane over the real line
    def rot_about_real_pair(x1, x2, theta):
        t = normalize([[1, -x1], [1, -x2]])
        return rotation(theta).conjugate_by(t.inverse())

    fam = [
        rot_about_real_pair(0.0, 2.0, 1.1),
        rot_about_real_pair(-1.0, 3.0, 0.7),
        rot_about_real_pair(0.5, 0.9, 2.0),
    ]
    kind, circle = elliptic_family_trichotomy(fam)
    assert kind == COMMON_PLANE


def test_trichotomy_common_point():
    # rotations about axes through the ball center: unitary elements
    u1 = normalize([[cmath.exp(0.4j), 0], [0, cmath.exp(-0.4j)]])
    th = 0.9
    u2 = normalize([[math.cos(th), math.sin(th)], [-math.sin(th), math.cos(th)]])
    u3 = u1 @ u2
    kind, form = elliptic_family_trichotomy([u1, u2, u3])
    assert kind == COMMON_H_POINT
    assert form is not None


def test_trichotomy_rejects_loxodromic():
    with pytest.raises(NotEllipticFamily):
        elliptic_family_trichotomy([diag(2, 0.5)])


# -- commutator criterion ---------------------------------------------------------


def test_commutator_loxodromic_example():
    # two quarter-rotations of the plane over the unit disk at distance ~1
    p1 = disk_rotation(0.0, math.pi / 2)
    z = math.tanh(0.5)  # hyperbolic distance 1 from the origin
    p2 = disk_rotation(z, math.pi / 2)
    comm = commutator_loxodromy(p1, p2)
    assert classify(comm).tag == mb.LOXODROMIC
    assert comm.trace_sq().real > 4


def test_commutator_same_axis_rejected():
    with pytest.raises(HypothesisViolated):
        commutator_loxodromy(rotation(1.0), rotation(0.5))


def test_commutator_sweep():
    # planar elliptic pairs with distinct axes and elliptic product:
    # commutator always loxodromic
    checked = 0
    for _ in range(1000):
        z1 = 0.8 * (rng.random() + 1j * rng.random() - 0.5 - 0.5j)
        z2 = 0.8 * (rng.random() + 1j * rng.random() - 0.5 - 0.5j)
        if abs(z1 - z2) < 0.05:
            continue
        a = disk_rotation(z1, 0.3 + 2.5 * rng.random())
        b = disk_rotation(z2, 0.3 + 2.5 * rng.random())
        if classify(b @ a).tag != mb.ELLIPTIC:
            continue
        comm = commutator_loxodromy(a, b)
        assert classify(comm).tag == mb.LOXODROMIC
        checked += 1
    assert checked > 300
