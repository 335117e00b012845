from fractions import Fraction

import pytest

from kleinsail.lattice import (
    CUBIC49_MINPOLY, SQRT2M1_MINPOLY, lattice_from_alpha,
    lattice_from_cubic_field, normalize_lattice,
)
from kleinsail.contfrac import cf_value
from kleinsail.numberfield import NumberField
from kleinsail.normmin import (
    T0Bound, audit_consistency, check_t0_boxes, enumerate_sym_box,
    norm_minimum_estimate, t0_bound, theorem1_audit, vertex_phi_inf,
)
from kleinsail.sail import build_sail_patch


@pytest.fixture(scope="module")
def cubic_lat():
    return lattice_from_cubic_field(CUBIC49_MINPOLY)


def test_estimate_identity_is_zero():
    lat = normalize_lattice([(1, 0), (0, 1)])
    val, witness = norm_minimum_estimate(lat, 5)
    assert val == 0  # axis points: the lattice fails the irrationality check
    from kleinsail.lattice import irrationality_check
    assert not irrationality_check(lat, 5).ok


def test_estimate_cubic_is_one_seventh(cubic_lat):
    val, witness = norm_minimum_estimate(cubic_lat, 10)
    assert val == Fraction(1, 7)
    # the witness is a unit of the ring (norm +-1)
    xi = cubic_lat.module_element(witness)
    assert abs(xi.norm()) == 1


def test_estimate_matches_bruteforce_quadratic():
    fld = NumberField(SQRT2M1_MINPOLY)
    lat = lattice_from_alpha(fld.gen(), root_index=1)
    val, witness = norm_minimum_estimate(lat, 30)
    # brute force over a coefficient box
    best = None
    ri = lat.root_index
    for a in range(-80, 81):
        for b in range(-80, 81):
            if a == 0 and b == 0:
                continue
            if not lat.in_sym_box((a, b), 30):
                continue
            v = lat.phi((a, b))
            v = v if v.sign_at(ri) >= 0 else -v
            if best is None or (v - best).sign_at(ri) < 0:
                best = v
    assert (val if val.sign_at(ri) >= 0 else -val) == best


def test_estimate_monotone_in_window(cubic_lat):
    v1, _ = norm_minimum_estimate(cubic_lat, 5)
    v2, _ = norm_minimum_estimate(cubic_lat, 12)
    assert v2 <= v1


def test_sym_box_enumeration_counts():
    lat = normalize_lattice([(1, 0), (0, 1)])
    pts = enumerate_sym_box(lat, Fraction(5, 2))
    assert len(pts) == 24  # 5x5 integer box minus origin


def test_vertex_phi_inf_cubic(cubic_lat):
    patch = build_sail_patch(cubic_lat, 20)
    assert vertex_phi_inf(patch) == Fraction(1, 7)
    est, _ = norm_minimum_estimate(cubic_lat, 20)
    assert vertex_phi_inf(patch) >= est


def test_vertex_phi_inf_single_vertex(cubic_lat):
    patch = build_sail_patch(cubic_lat, 20)
    import copy
    small = copy.copy(patch)
    keep = patch.certified_facets()[0]
    small.facets = [keep]
    assert vertex_phi_inf(small) == min(cubic_lat.phi(c) for c in keep.vertices)


def test_t0_compare_examples():
    assert T0Bound(det_f=1, n=2).compare(1) == 1      # 1 > T0 = 2^-1/2
    assert T0Bound(det_f=8, n=2).compare(2) == 0      # 2 = T0 exactly
    assert T0Bound(det_f=8, n=2).compare(Fraction(199, 100)) == -1


def test_t0_compare_consistent_with_float():
    import random
    rng = random.Random(5)
    for _ in range(40):
        n = rng.choice((2, 3))
        det_f = rng.randint(1, 50)
        b = T0Bound(det_f=det_f, n=n)
        t = Fraction(rng.randint(1, 400), rng.randint(1, 40))
        cmp_exact = b.compare(t)
        diff = float(t) - float(b)
        if abs(diff) > 1e-12:
            assert cmp_exact == (1 if diff > 0 else -1)


def test_t0_box_property_cubic(cubic_lat):
    patch = build_sail_patch(cubic_lat, 15)
    rep = check_t0_boxes(patch)
    assert rep["ok"]
    assert rep["facets_checked"] > 0


def test_t0_box_property_liouville():
    alpha = cf_value([0, 1, 2, 4, 8, 16, 32, 64, 128])
    lat = lattice_from_alpha(alpha)
    patch = build_sail_patch(lat, 1000)
    rep = check_t0_boxes(patch)
    assert rep["ok"]


def test_audit_cubic_stable(cubic_lat):
    small = theorem1_audit(cubic_lat, 10)
    big = theorem1_audit(cubic_lat, 20)
    cons = audit_consistency(small, big)
    assert cons["norm_estimate_non_increasing"]
    assert cons["max_det_all_non_decreasing"]
    assert small.norm_min_estimate == big.norm_min_estimate == Fraction(1, 7)
    assert len(small.orthants) == 4


def test_audit_sqrt2m1_maxima():
    fld = NumberField(SQRT2M1_MINPOLY)
    lat = lattice_from_alpha(fld.gen(), root_index=1)
    audit = theorem1_audit(lat, 150)
    assert audit.pos_max_det_facet == 2
    assert audit.pos_max_det_star == 2
    assert len(audit.orthants) == 2


def test_audit_liouville_growth():
    alpha = cf_value([0, 1, 2, 4, 8, 16, 32, 64, 128])
    lat = lattice_from_alpha(alpha)
    a1 = theorem1_audit(lat, 10)
    a2 = theorem1_audit(lat, 1000)
    assert a2.pos_max_det_facet > a1.pos_max_det_facet


def test_audit_json(cubic_lat):
    audit = theorem1_audit(cubic_lat, 10)
    doc = audit.to_json()
    assert doc["schema"] == "kleinsail.audit/1"
    assert doc["norm_minimum_estimate"] == "1/7"
    assert len(doc["orthants"]) == 4
