"""Norm-minimum estimates and the all-orthant determinant audit.

The norm minimum of a lattice is the infimum of |x1*...*xn| over nonzero
lattice points; no finite computation reaches it, so everything here is a
window statistic labelled as such: the minimum over the box Q(T) of
normalized sup-norm < T, exact and non-increasing in T.  For lattices of
totally real fields the estimate is certified externally by the integrality
of norms (any window containing a unit yields the exact value).

The audit ties the modules together: the positive-orthant sail's facet and
edge-star determinants, the facet determinants of all combinatorially
distinct orthant sails, the norm-minimum estimate, and the box property
that every certified facet's bisector-normalized cube below it is free of
lattice points.  The cube side compares through the exact predicate
t^(2n) * n^n  vs  (det F)^2 since the threshold itself is irrational.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct

from .determinants import det_report
from .lattice import OrthantSign, irrationality_check
from .linalg import det as _det
from .sail import (
    DEFAULT_POINT_BUDGET, PointBudgetError, _basis_enclosure, _ENUM_SHIFT,
    _enumerate_core, build_sail_patch,
)

__all__ = [
    "norm_minimum_estimate", "vertex_phi_inf", "T0Bound", "t0_bound",
    "check_t0_boxes", "theorem1_audit", "AuditReport", "audit_consistency",
]


def _sym_box_filter(lat, t):
    t = Fraction(t)
    t_lo, t_hi = lat.raw_window_interval(t)
    scale = 1 << _ENUM_SHIFT
    t_lo_s = int((t_lo * scale).__floor__())
    t_hi_s = int((t_hi * scale).__ceil__())
    n = lat.n

    def filt(c, partial):
        if all(x == 0 for x in c):
            return False
        for i in range(n):
            lo, hi = partial[i]
            if -t_lo_s < lo and hi < t_lo_s:
                continue
            if hi < -t_hi_s or lo > t_hi_s:
                return False
            if not lat.coord_abs_lt(c, i, t):
                return False
        return True

    return filt


def enumerate_sym_box(lat, t, budget=DEFAULT_POINT_BUDGET):
    """Nonzero lattice points of Q(t) = {max |x_i| < t}, exact."""
    t = Fraction(t)
    if t <= 0:
        raise ValueError("window must be positive")
    hi = lat.raw_window_enclosure(t)
    boxes = [(-hi, hi)] * lat.n
    return _enumerate_core(lat, boxes, _sym_box_filter(lat, t), budget)


def norm_minimum_estimate(lat, t, budget=DEFAULT_POINT_BUDGET):
    """Exact minimum of |phi| over the nonzero lattice points of Q(t).

    An upper bound for the norm minimum, non-increasing in t.  Returns
    (value, witness coefficients).
    """
    pts = enumerate_sym_box(lat, t, budget)
    if not pts:
        raise ValueError("window contains no nonzero lattice points")
    if lat.kind == "embedding":
        # |phi| = |Norm(xi)| / d: minimize the integer |Norm| fast
        fld = lat.field
        mats = []
        for g in lat.gens:
            m = g.mul_matrix()
            mats.append([[int(x) if x.denominator == 1 else x for x in row]
                         for row in m])
        best = None
        best_c = None
        for c in pts:
            m = [[sum(c[k] * mats[k][i][j] for k in range(3)) for j in range(3)]
                 for i in range(3)]
            nrm = abs(m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                      - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                      + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
            if best is None or nrm < best:
                best, best_c = nrm, c
        if lat.scale_d is None:
            raise NotImplementedError("norm values need a square module discriminant")
        return Fraction(best) / lat.scale_d, best_c
    best = None
    best_c = None
    for c in pts:
        v = abs(lat.phi(c))
        if best is None or _scalar_lt(lat, v, best):
            best, best_c = v, c
    return best, best_c


def _scalar_lt(lat, a, b):
    if lat.kind == "field":
        return (a - b).sign_at(lat.root_index) < 0
    return a < b


def vertex_phi_inf(patch):
    """Exact minimum of phi over the patch's certified vertices."""
    verts = patch.certified_vertices()
    if not verts:
        raise ValueError("patch has no certified vertices")
    lat = patch.lattice
    best = None
    for c in verts:
        v = lat.phi(c)
        if best is None or _scalar_lt(lat, v, best):
            best = v
    return best


# ---------------------------------------------------------------------------
# the box Q(T0)

@dataclass(frozen=True)
class T0Bound:
    """Exact comparison object for T0 = n^(-1/2) (det F)^(1/n).

    T0 itself is irrational; compare(t) decides t vs T0 through
    t^(2n) * n^n  vs  (det F)^2, exactly.
    """

    det_f: int
    n: int

    def compare(self, t):
        t = Fraction(t)
        if t < 0:
            return -1
        lhs = t ** (2 * self.n) * self.n ** self.n
        rhs = Fraction(self.det_f) ** 2
        return (lhs > rhs) - (lhs < rhs)

    def __float__(self):
        return self.n ** -0.5 * self.det_f ** (1.0 / self.n)


def t0_bound(facet, n=None):
    from .determinants import det_facet
    if n is None:
        n = len(facet.vertices[0])
    return T0Bound(det_f=det_facet(facet), n=n)


def _rotated_box_violations(lat, facet, budget=DEFAULT_POINT_BUDGET):
    """Nonzero closed-orthant lattice points inside the bisector-normalized
    cube Q(T0) of the facet (the facet is first carried to the configuration
    where it is orthogonal to the orthant's bisector; the diagonal map is
    folded into the exact predicate, never materialized).

    Point x is inside iff for every i:
      x_i^(2n) * P^2 * n^n  <  (det F)^2 * d^4 * u_i^(2n),
    with u the raw dual functional of the facet, P the normalized normal
    coordinate product and d the tracked determinant scale.
    """
    from .determinants import det_facet

    n = lat.n
    w, d_int = facet.support, facet.dist
    det_f = det_facet(facet)
    p_norm = lat.support_normal_product(w)  # prod of normalized normal coords
    d4 = lat.scale_d_sq ** 2
    lhs_const = p_norm ** 2 * Fraction(n) ** n
    rhs_const = Fraction(det_f) ** 2 * d4

    if lat.kind in ("rational", "field"):
        from .linalg import transpose
        inv = lat.inverse_rows()
        u_raw = [sum(inv[j][i] * w[j] for j in range(n)) for i in range(n)]
    else:
        u_hat = lat._dual_combination(w)
        u_raw = None  # handled per-embedding below

    def inside(c):
        for i in range(n):
            if lat.kind in ("rational", "field"):
                x = _coord_scalar(lat, c, i)
                lhs = x ** (2 * n) * lhs_const
                rhs = rhs_const * u_raw[i] ** (2 * n)
                if lat.kind == "rational":
                    if not lhs < rhs:
                        return False
                else:
                    if (lhs - rhs).sign_at(lat.root_index) >= 0:
                        return False
            else:
                xi = lat.module_element(c)
                elem = (xi ** (2 * n) * lat.field.element((lhs_const,))
                        - lat.field.element((rhs_const,)) * u_hat ** (2 * n))
                if elem.sign_at(i) >= 0:
                    return False
        return True

    # float bounds for candidate enumeration (exactness lives in `inside`)
    fb = lat.basis_float()
    if lat.kind in ("rational", "field"):
        u_f = [abs(float(x) if isinstance(x, Fraction) else
                   float(x.to_mpf_at(lat.root_index, 60))) for x in u_raw]
    else:
        u_f = [abs(float(u_hat.to_mpf_at(i, 60))) for i in range(n)]
    p_f = abs(float(p_norm))
    d_f = float(lat.scale_d_sq) ** 0.5
    t0_f = float(T0Bound(det_f, n))
    bounds = []
    for i in range(n):
        r = t0_f * (d_f ** (2.0 / n)) * u_f[i] / (p_f ** (1.0 / n))
        bounds.append(Fraction(r * 1.01 + 1e-9).limit_denominator(10**6))

    def filt(c, partial):
        if all(x == 0 for x in c):
            return False
        if any(lat.coord_sign(c, i) < 0 for i in range(n)):
            return False
        return inside(c)

    boxes = [(Fraction(0), b) for b in bounds]
    return _enumerate_core(lat, boxes, filt, budget)


def _coord_scalar(lat, c, i):
    if lat.kind == "rational":
        return lat.coord_fraction(c, i)
    acc = lat.field.zero()
    for j in range(lat.n):
        acc = acc + lat.basis[i][j] * c[j]
    return acc


def check_t0_boxes(patch, budget=DEFAULT_POINT_BUDGET):
    """The box property for every certified facet: no nonzero lattice point
    of the closed positive orthant inside the normalized cube Q(T0)."""
    violations = []
    for fi, f in enumerate(patch.facets):
        if not f.certified:
            continue
        bad = _rotated_box_violations(patch.lattice, f, budget)
        if bad:
            violations.append((fi, bad[:8]))
    return {"facets_checked": len(patch.certified_facets()),
            "violations": violations, "ok": not violations}


# ---------------------------------------------------------------------------
# the audit

@dataclass
class AuditReport:
    window: Fraction
    orthants: list            # per-orthant dicts
    max_det_facet_all: int    # across all combinatorially distinct orthants
    pos_max_det_facet: int    # positive orthant only
    pos_max_det_star: int
    norm_min_estimate: object
    norm_min_witness: tuple
    pos_complete_stars: int
    pos_certified_facets: int

    def to_json(self):
        return {
            "schema": "kleinsail.audit/1",
            "window": str(self.window),
            "orthants": [
                {
                    "signs": list(o["signs"]),
                    "max_det_facet": o["max_det_facet"],
                    "certified_facets": o["certified_facets"],
                    "complete_stars": o["complete_stars"],
                    "max_det_star": o["max_det_star"],
                    "irrationality_ok": o["irrationality_ok"],
                }
                for o in self.orthants
            ],
            "max_det_facet_all_orthants": self.max_det_facet_all,
            "positive_orthant": {
                "max_det_facet": self.pos_max_det_facet,
                "max_det_star": self.pos_max_det_star,
                "complete_stars": self.pos_complete_stars,
                "certified_facets": self.pos_certified_facets,
            },
            "norm_minimum_estimate": str(self.norm_min_estimate),
            "norm_minimum_witness": list(self.norm_min_witness),
        }

    def to_json_str(self):
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def orthant_representatives(n):
    """One sign vector per centrally symmetric pair (first component +1)."""
    return [OrthantSign((1,) + rest) for rest in iproduct((1, -1), repeat=n - 1)]


def theorem1_audit(lat, t, budget=DEFAULT_POINT_BUDGET):
    """Window data for the boundedness equivalences.

    Builds the sail patch of every combinatorially distinct orthant (the
    2^n orthants collapse to 2^(n-1) by central symmetry), collects the
    facet-determinant maxima across them, the facet and edge-star maxima of
    the positive orthant, and the norm-minimum estimate.
    """
    t = Fraction(t)
    orthants = []
    max_all = 0
    pos_fac = pos_star = 0
    pos_stars_n = pos_cert_n = 0
    for signs in orthant_representatives(lat.n):
        refl = lat.reflect(signs)
        rep = irrationality_check(refl, t)
        patch = build_sail_patch(refl, t, budget=budget)
        dr = det_report(patch)
        entry = {
            "signs": tuple(signs),
            "max_det_facet": dr.max_det_facet,
            "max_det_star": dr.max_det_star,
            "certified_facets": len(patch.certified_facets()),
            "complete_stars": len(patch.complete_star_vertices()),
            "irrationality_ok": rep.ok,
        }
        orthants.append(entry)
        max_all = max(max_all, dr.max_det_facet)
        if all(s == 1 for s in signs):
            pos_fac, pos_star = dr.max_det_facet, dr.max_det_star
            pos_stars_n = len(patch.complete_star_vertices())
            pos_cert_n = len(patch.certified_facets())
    est, witness = norm_minimum_estimate(lat, t, budget)
    return AuditReport(
        window=t, orthants=orthants, max_det_facet_all=max_all,
        pos_max_det_facet=pos_fac, pos_max_det_star=pos_star,
        norm_min_estimate=est, norm_min_witness=witness,
        pos_complete_stars=pos_stars_n, pos_certified_facets=pos_cert_n,
    )


def audit_consistency(small, big):
    """Monotonicity of the audit data between two windows (small.t < big.t):
    the norm estimate never increases and the determinant maxima never
    decrease as the window grows."""
    if not small.window < big.window:
        raise ValueError("expected increasing windows")
    return {
        "norm_estimate_non_increasing": not _lt_generic(small.norm_min_estimate,
                                                        big.norm_min_estimate),
        "max_det_all_non_decreasing": big.max_det_facet_all >= small.max_det_facet_all,
        "pos_max_det_non_decreasing": big.pos_max_det_facet >= small.pos_max_det_facet,
        "pos_max_star_non_decreasing": big.pos_max_det_star >= small.pos_max_det_star,
        "maxima_equal": (big.max_det_facet_all == small.max_det_facet_all
                         and big.pos_max_det_facet == small.pos_max_det_facet
                         and big.pos_max_det_star == small.pos_max_det_star),
    }


def _lt_generic(a, b):
    try:
        return a < b
    except TypeError:
        return (a - b).sign_at(a.field.degree - 1) < 0
