"""Polar polyhedra of Klein polyhedra and the face bijection.

The polar body of K (all x with <x, y> >= 1 on K) has one vertex per
bounded facet of K: the facet with support functional w and integer
distance D maps to u = w/D in dual-lattice coordinates, so every pairing
computation here is exact rational arithmetic on coefficient vectors --
no ambient irrationalities ever enter.  Faces of the polar body are built
combinatorially from the certified face poset: a face G of K maps to the
polar face with vertex set {u_F : F a certified facet containing G}, of
dimension n - 1 - dim G, reversing inclusions.

Window truncation is tracked by completeness flags inherited from the
source patch; every check skips incomplete faces and reports the skips.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction

from .determinants import det_edge_star
from .linalg import affine_rank, det, solve, subset_det_sum, vec_dot
from .sail import build_sail_patch

__all__ = [
    "PolarFace", "PolarPatch", "polar_vertex_of_facet", "build_polar_patch",
    "det_polar_facet", "check_lemma5", "check_halfspace_reconstruction",
    "check_Kast_in_Kcirc", "simplicial_polar_identity",
    "check_convex_hull_of_vertices", "CheckReport",
]


@dataclass
class CheckReport:
    checked: int
    passed: int
    skipped_incomplete: int
    witnesses: list

    @property
    def ok(self):
        return self.checked == self.passed

    def to_json(self):
        return {
            "checked": self.checked,
            "passed": self.passed,
            "skipped_incomplete": self.skipped_incomplete,
            "witnesses": [str(w) for w in self.witnesses[:32]],
        }


def polar_vertex_of_facet(facet):
    """The polar vertex of a certified facet, in dual-basis coordinates.

    D times the vertex is the integer vector w, i.e. a point of the dual
    lattice; the vertex itself lies in (1/D) times the dual lattice.
    """
    if not facet.certified:
        raise ValueError("polar vertices exist only for certified facets")
    d = Fraction(facet.dist)
    return tuple(Fraction(x) / d for x in facet.support)


@dataclass(frozen=True)
class PolarFace:
    source_dim: int
    source_vertices: tuple     # coeff tuples of the source face's vertices
    vertices: tuple            # polar vertices (tuples of Fractions), sorted
    complete: bool

    @property
    def dim(self):
        pts = [tuple(v) for v in self.vertices]
        return affine_rank(pts)


@dataclass
class PolarPatch:
    source: object             # SailPatch
    vertex_by_facet: dict      # facet index -> polar vertex
    faces: list                # PolarFace, all certified source faces

    def complete_faces(self):
        return [f for f in self.faces if f.complete]

    def faces_of_source_dim(self, k):
        return [f for f in self.faces if f.source_dim == k]

    def to_json(self):
        return {
            "schema": "kleinsail.polar/1",
            "window": str(self.source.t),
            "polar_vertices": [
                {"facet": fi, "coords": [str(x) for x in u]}
                for fi, u in sorted(self.vertex_by_facet.items())
            ],
            "faces": [
                {
                    "source_dim": f.source_dim,
                    "source_vertices": [list(c) for c in f.source_vertices],
                    "vertices": [[str(x) for x in u] for u in f.vertices],
                    "complete": f.complete,
                    "dim": f.dim if f.vertices else -1,
                }
                for f in self.faces
            ],
        }

    def to_json_str(self):
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def build_polar_patch(patch):
    """Polar faces of every certified face of the patch, via the bijection."""
    certified = [(fi, f) for fi, f in enumerate(patch.facets) if f.certified]
    if not certified:
        raise ValueError("empty patch has no polar")
    n = patch.n
    vertex_by_facet = {fi: polar_vertex_of_facet(f) for fi, f in certified}
    # sanity: the defining pairing <u_F, y> = 1 on the facet's vertices
    for fi, f in certified:
        u = vertex_by_facet[fi]
        for c in f.vertices:
            if vec_dot(u, [Fraction(x) for x in c]) != 1:
                raise AssertionError("polar vertex fails its defining pairing")

    faces = []
    # facets -> polar vertices (0-faces), complete by certification
    for fi, f in certified:
        faces.append(PolarFace(source_dim=n - 1, source_vertices=f.vertices,
                               vertices=(vertex_by_facet[fi],), complete=True))
    # edges (n = 3 only) -> (n-2)-faces
    if n == 3:
        for (a, b) in patch.edges:
            incident = [fi for fi, f in certified
                        if a in f.vertices and b in f.vertices]
            if not incident:
                continue
            us = tuple(sorted(vertex_by_facet[fi] for fi in incident))
            faces.append(PolarFace(source_dim=1, source_vertices=(a, b),
                                   vertices=us, complete=len(incident) == 2))
    # vertices -> polar facets, complete iff the star is complete
    for v in patch.certified_vertices():
        incident = [fi for fi, f in certified if v in f.vertices]
        us = tuple(sorted(vertex_by_facet[fi] for fi in incident))
        star = patch.stars.get(v)
        faces.append(PolarFace(source_dim=0, source_vertices=(v,),
                               vertices=us,
                               complete=bool(star) and star.complete))
    return PolarPatch(source=patch, vertex_by_facet=vertex_by_facet, faces=faces)


def check_dimension_duality(polar):
    """Statement: dim(polar face) = n - 1 - dim(source face), complete faces."""
    n = polar.source.n
    checked = passed = skipped = 0
    witnesses = []
    for f in polar.faces:
        if not f.complete:
            skipped += 1
            continue
        checked += 1
        if f.dim == n - 1 - f.source_dim:
            passed += 1
        else:
            witnesses.append((f.source_vertices, f.dim))
    return CheckReport(checked, passed, skipped, witnesses)


def check_inclusion_reversal(polar):
    """G subset H iff polar(H) subset polar(G), over complete face pairs."""
    faces = polar.complete_faces()
    checked = passed = 0
    witnesses = []
    for g in faces:
        gs = set(g.source_vertices)
        gp = set(g.vertices)
        for h in faces:
            if g is h:
                continue
            hs = set(h.source_vertices)
            hp = set(h.vertices)
            checked += 1
            fwd = gs <= hs
            rev = hp <= gp
            if fwd == rev or (gs == hs):
                passed += 1
            else:
                witnesses.append((g.source_vertices, h.source_vertices))
    skipped = len(polar.faces) - len(faces)
    return CheckReport(checked, passed, skipped, witnesses)


def check_bijection_counts(polar):
    """|certified complete faces of dim k| = |complete polar faces of dim n-1-k|."""
    n = polar.source.n
    out = {}
    for k in range(n):
        sources = [f for f in polar.complete_faces() if f.source_dim == k]
        out[k] = (len(sources),
                  sum(1 for f in sources if f.dim == n - 1 - k))
    return out


def check_lemma4_membership(polar):
    """D * u_F is a dual lattice point, exactly, for every certified facet."""
    checked = passed = 0
    witnesses = []
    src = polar.source
    for fi, u in polar.vertex_by_facet.items():
        f = src.facets[fi]
        checked += 1
        scaled = [Fraction(x) * f.dist for x in u]
        if all(x.denominator == 1 for x in scaled):
            passed += 1
        else:
            witnesses.append((fi, u))
    return CheckReport(checked, passed, 0, witnesses)


def det_polar_facet(face):
    """Generalized facet determinant of a polar face (exact rational)."""
    if not face.complete:
        raise ValueError("incomplete polar face")
    n = len(face.vertices[0])
    return subset_det_sum(face.vertices, n)


def check_lemma5(patch, polar=None):
    """det(polar facet of v) <= (det St_v)^(n-1) at complete vertices."""
    if polar is None:
        polar = build_polar_patch(patch)
    n = patch.n
    checked = passed = skipped = 0
    witnesses = []
    for f in polar.faces_of_source_dim(0):
        if not f.complete:
            skipped += 1
            continue
        v = f.source_vertices[0]
        star = patch.stars[v]
        lhs = det_polar_facet(f)
        rhs = Fraction(det_edge_star(star)) ** (n - 1)
        checked += 1
        if lhs <= rhs:
            passed += 1
        else:
            witnesses.append((v, lhs, rhs))
    return CheckReport(checked, passed, skipped, witnesses)


def check_halfspace_reconstruction(patch, samples=100, seed=0):
    """The polar body equals the intersection of the vertex half-spaces.

    Exact on the patch's data: every polar vertex satisfies every certified
    vertex constraint <u, v> >= 1, and for sampled rational points the two
    constraint systems (certified vertices vs certified facet sample points)
    agree.
    """
    polar = build_polar_patch(patch)
    n = patch.n
    vert_coeffs = [tuple(Fraction(x) for x in c) for c in patch.certified_vertices()]
    checked = passed = 0
    witnesses = []
    for fi, u in polar.vertex_by_facet.items():
        for v in vert_coeffs:
            checked += 1
            if vec_dot(u, v) >= 1:
                passed += 1
            else:
                witnesses.append((fi, v))
    # the origin violates every vertex constraint
    zero_ok = all(vec_dot((Fraction(0),) * n, v) < 1 for v in vert_coeffs)
    # sampled points: vertex system vs facet-sample system
    rng = random.Random(seed)
    facet_samples = []
    for f in patch.certified_facets():
        vs = [tuple(Fraction(x) for x in c) for c in f.vertices]
        facet_samples.extend(vs)
        m = len(vs)
        centroid = tuple(sum(col) / m for col in zip(*vs))
        facet_samples.append(centroid)
    agree = 0
    for _ in range(samples):
        x = tuple(Fraction(rng.randint(-8, 40), rng.randint(1, 12)) for _ in range(n))
        via_vertices = all(vec_dot(x, v) >= 1 for v in vert_coeffs)
        via_samples = all(vec_dot(x, y) >= 1 for y in facet_samples)
        # vertex constraints imply facet-sample constraints (samples lie in
        # the hull of the vertices); a vertex violation is itself a sample
        # violation since every certified vertex lies on a certified facet
        if via_vertices == via_samples:
            agree += 1
        else:
            witnesses.append(("sample", x, via_vertices, via_samples))
    return CheckReport(checked + samples + 1,
                       passed + agree + (1 if zero_ok else 0),
                       0, witnesses)


def check_Kast_in_Kcirc(lat, t, t_dual=None, budget=10**6):
    """The dual lattice's Klein polyhedron sits inside the polar body.

    Pairings of lattice and dual-lattice points are integers, so for
    interior certified vertices y* of K* and v of K the product <y*, v>
    is a positive integer, hence >= 1; any violation is reported.  In
    dimension 2 the polar vertex set and the certified K* vertex set are
    compared on the common window (they coincide: K* = Kcirc).
    """
    t_dual = t if t_dual is None else t_dual
    dual = lat.dual()
    patch = build_sail_patch(lat, t, budget=budget)
    dual_patch = build_sail_patch(dual, t_dual, budget=budget)
    prim = patch.interior_certified_vertices()
    dstar = dual_patch.interior_certified_vertices()
    if not prim or not dstar:
        raise ValueError("degenerate window: no interior certified vertices")
    checked = passed = 0
    witnesses = []
    for cstar in dstar:
        for c in prim:
            checked += 1
            pairing = sum(int(a) * int(b) for a, b in zip(cstar, c))
            if pairing >= 1:
                passed += 1
            else:
                witnesses.append((cstar, c, pairing))
    result = {
        "pairing": CheckReport(checked, passed, 0, witnesses),
        "primal_vertices": len(prim),
        "dual_vertices": len(dstar),
    }
    if lat.n == 2:
        result["vertex_sets_equal"] = _compare_2d_polar_sets(
            lat, dual, patch, dual_patch)
    return result


def _compare_2d_polar_sets(lat, dual, patch, dual_patch):
    """K* = Kcirc in the plane: certified K* vertices vs polar vertices,
    restricted to the overlap of the two contiguous runs.

    The equality assumes orthant-boundary-free lattices, which the rational
    stand-ins never are (the lattice of alpha always meets one axis, its
    dual the other).  Facets incident to a boundary vertex and boundary
    vertices of the dual sail are therefore excluded: they carry exactly the
    axis artifacts, and the interior structure must agree.
    """
    def interior_vertex(lt, c):
        return all(lt.coord_sign(c, i) > 0 for i in range(lt.n))

    polar_set = set()
    for f in patch.certified_facets():
        if f.dist != 1:
            raise AssertionError("2D sail facet with integer distance > 1")
        if all(interior_vertex(lat, c) for c in f.vertices):
            polar_set.add(f.support)
    dual_set = set(dual_patch.interior_certified_vertices())
    if not (polar_set & dual_set):
        return {"equal": False, "overlap": 0}

    def key(c):
        return dual.coord_float(c, 0)

    lo = max(min(key(c) for c in polar_set), min(key(c) for c in dual_set))
    hi = min(max(key(c) for c in polar_set), max(key(c) for c in dual_set))
    mid_p = {c for c in polar_set if lo <= key(c) <= hi}
    mid_d = {c for c in dual_set if lo <= key(c) <= hi}
    return {
        "equal": mid_p == mid_d,
        "overlap": len(mid_p & mid_d),
        "only_polar": sorted(mid_p - mid_d),
        "only_dual": sorted(mid_d - mid_p),
    }


def simplicial_polar_identity(rs, lambdas):
    """Exact check of the simplicial polar determinant identity.

    Given a basis r_1..r_n and v = sum lambda_i r_i with all lambda_i > 0,
    the simplices F_i = conv({v, v+r_1, ..., v+r_n} minus {v+r_i}) have
    supporting functionals w_i with <w_i, x> = 1 on F_i, and
    |det(w_1..w_n)| = |det(r_1..r_n)|^(n-1) / (det F_1 ... det F_n).
    Returns (lhs, rhs); they are asserted equal.
    """
    rs = [tuple(Fraction(x) for x in r) for r in rs]
    n = len(rs)
    lambdas = [Fraction(x) for x in lambdas]
    if len(lambdas) != n:
        raise ValueError("need one coefficient per basis vector")
    if any(l <= 0 for l in lambdas):
        raise ValueError("v must have strictly positive coordinates in the basis")
    if det(rs) == 0:
        raise ValueError("degenerate basis")
    v = tuple(sum(l * r[k] for l, r in zip(lambdas, rs)) for k in range(n))
    ws = []
    det_fs = []
    for i in range(n):
        verts = [v] + [tuple(v[k] + rs[j][k] for k in range(n))
                       for j in range(n) if j != i]
        # <w, x> = 1 on all vertices
        w = solve(verts, tuple(Fraction(1) for _ in range(n)))
        ws.append(w)
        det_fs.append(abs(det(verts)))
    lhs = abs(det(ws))
    rhs = abs(det(rs)) ** (n - 1) / _product(det_fs)
    if lhs != rhs:
        raise AssertionError(f"polar identity violated: {lhs} != {rhs}")
    return lhs, rhs


def _product(vals):
    acc = Fraction(1)
    for v in vals:
        acc *= v
    return acc


def check_convex_hull_of_vertices(patch):
    """Window-scale statement that the polyhedron is the hull of its vertices:
    certified facet vertices and centroids satisfy every certified facet
    inequality w . x >= D, exactly."""
    checked = passed = 0
    witnesses = []
    certified = patch.certified_facets()
    samples = []
    for f in certified:
        vs = [tuple(Fraction(x) for x in c) for c in f.vertices]
        m = len(vs)
        centroid = tuple(sum(col) / m for col in zip(*vs))
        samples.extend(vs)
        samples.append(centroid)
    for x in samples:
        for g in certified:
            checked += 1
            if vec_dot([Fraction(w) for w in g.support], x) >= g.dist:
                passed += 1
            else:
                witnesses.append((x, g.support, g.dist))
    return CheckReport(checked, passed, 0, witnesses)
