import random
from fractions import Fraction
from itertools import combinations, product

import pytest

from kleinsail.hull import (
    convex_hull_2d, convex_hull_3d, orient2, orient3, polygon_area,
    polytope_volume,
)


def test_orientation_predicates():
    assert orient2((0, 0), (1, 0), (0, 1)) == 1
    assert orient2((0, 0), (1, 0), (2, 0)) == 0
    assert orient2((0, 0), (0, 1), (1, 0)) == -1
    assert orient3((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)) == 1
    assert orient3((0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)) == 0


def test_hull_2d_square_with_interior_and_edge_points():
    pts = [(0, 0), (2, 0), (2, 2), (0, 2), (1, 1), (1, 0), (0, 1)]
    hull = convex_hull_2d(pts)
    assert sorted(pts[i] for i in hull) == [(0, 0), (0, 2), (2, 0), (2, 2)]
    # ccw ordering
    m = len(hull)
    for i in range(m):
        a, b, c = (pts[hull[i]], pts[hull[(i + 1) % m]], pts[hull[(i + 2) % m]])
        assert orient2(a, b, c) == 1


def test_hull_2d_collinear():
    pts = [(0, 0), (1, 1), (2, 2), (3, 3)]
    hull = convex_hull_2d(pts)
    assert sorted(pts[i] for i in hull) == [(0, 0), (3, 3)]


def test_hull_3d_cube():
    pts = list(product((0, 1), repeat=3)) + [(0, 0, 0)]  # duplicate too
    facets, verts = convex_hull_3d(pts)
    assert len(facets) == 6  # coplanar triangles merged into squares
    assert len(verts) == 8
    for f in facets:
        assert len(f.cycle) == 4
        # every point on the inner side
        for p in pts:
            assert sum(w * x for w, x in zip(f.normal_out, p)) <= f.offset


def test_hull_3d_excludes_face_interior_points():
    pts = list(product((0, 2), repeat=3)) + [(1, 1, 0), (1, 1, 1), (2, 1, 1)]
    facets, verts = convex_hull_3d(pts)
    vert_pts = {pts[i] for i in verts}
    assert (1, 1, 0) not in vert_pts       # face interior
    assert (1, 1, 1) not in vert_pts       # body interior
    assert (2, 1, 1) not in vert_pts       # face interior
    assert len(vert_pts) == 8


def test_hull_3d_simplex_and_volume():
    pts = [(0, 0, 0), (6, 0, 0), (0, 6, 0), (0, 0, 6), (1, 1, 1)]
    facets, verts = convex_hull_3d(pts)
    assert len(facets) == 4
    assert polytope_volume(pts) == 36


def test_volume_rational_points():
    pts = [(Fraction(0), Fraction(0)), (Fraction(1, 2), Fraction(0)),
           (Fraction(1, 2), Fraction(1, 3)), (Fraction(0), Fraction(1, 3))]
    assert polytope_volume(pts) == Fraction(1, 6)


def test_volume_cube_with_noise_points():
    rng = random.Random(0)
    pts = list(product((0, 3), repeat=3))
    for _ in range(30):
        pts.append((rng.randint(0, 3), rng.randint(0, 3), rng.randint(0, 3)))
    assert polytope_volume(pts) == 27


def test_hull_3d_random_certification():
    rng = random.Random(1)
    pts = [(rng.randint(-8, 8), rng.randint(-8, 8), rng.randint(-8, 8))
           for _ in range(60)]
    facets, verts = convex_hull_3d(pts)
    # support: no point strictly outside any facet
    for f in facets:
        for p in pts:
            assert sum(w * x for w, x in zip(f.normal_out, p)) <= f.offset
    # every edge is shared by exactly two facets
    edge_use = {}
    for fi, f in enumerate(facets):
        m = len(f.cycle)
        for i in range(m):
            e = tuple(sorted((f.cycle[i], f.cycle[(i + 1) % m])))
            edge_use.setdefault(e, []).append(fi)
    for e, fs in edge_use.items():
        assert len(fs) == 2
    # Euler's formula for the merged facet complex
    assert len(verts) - len(edge_use) + len(facets) == 2


def test_degenerate_3d_rejected():
    with pytest.raises(ValueError):
        convex_hull_3d([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)])
