"""Tests for the A-side series: flat coordinates, recurrence operators,
disk factors, boundary insertions, and the zero-limit transition matrix.

Every numeric expectation below was derived by hand from the defining
formulas (hypergeometric products over effective classes, exact gamma
ratios, Bernoulli expansions) before being frozen here.
"""
import json
from fractions import Fraction

import pytest

from remodel.amodel import (
    LogSeries,
    annulus_start,
    bernoulli_number,
    bernoulli_poly,
    closed_mirror_maps,
    disk_factor,
    disk_potential,
    disk_sector,
    open_mirror_correction,
    pf_apply,
    pf_check,
    point_series,
    r_limit,
    sector_series,
    twisted_w_series,
)
from remodel.rings import QI, QQ, QQI
from remodel.toric import FramingError, bundled_geometry_path, load_bundled, load_geometry

F = Fraction


def geom_with_framing(name, framing):
    spec = json.loads(bundled_geometry_path(name).read_text())
    spec["framing"] = framing
    return load_geometry(spec)


# ---------------------------------------------------------------------------
# Bernoulli helpers
# ---------------------------------------------------------------------------

def test_bernoulli_numbers():
    assert bernoulli_number(0) == 1
    assert bernoulli_number(1) == F(-1, 2)
    assert bernoulli_number(2) == F(1, 6)
    assert bernoulli_number(3) == 0
    assert bernoulli_number(12) == F(-691, 2730)


def test_bernoulli_polynomials():
    assert bernoulli_poly(2, F(0)) == F(1, 6)
    assert bernoulli_poly(2, F(1, 2)) == F(-1, 12)
    # B_n(1-x) = (-1)^n B_n(x)
    for n in range(1, 7):
        for x in (F(1, 3), F(1, 4), F(2, 5)):
            assert bernoulli_poly(n, 1 - x) == (-1) ** n * bernoulli_poly(n, x)


# ---------------------------------------------------------------------------
# flat coordinate series
# ---------------------------------------------------------------------------

def test_flat_coordinate_series_half_orbifold():
    geom = load_bundled("c2z2xc")
    A = point_series(geom, 8)
    s = A[3]
    assert s.coeff((F(1),)) == F(1)
    assert s.coeff((F(3),)) == F(1, 24)
    assert s.coeff((F(5),)) == F(3, 640)
    assert s.coeff((F(7),)) == F(5, 7168)
    assert s.coeff((F(2),)) == 0 and s.coeff((F(4),)) == 0
    # ray series receive no classes here
    for i in range(3):
        assert A[i].is_zero()


def test_flat_coordinate_series_third_orbifold():
    geom = load_bundled("c3z3")
    A = point_series(geom, 8)
    s = A[3]
    assert s.coeff((F(1),)) == F(1)
    assert s.coeff((F(4),)) == F(-1, 648)
    assert s.coeff((F(7),)) == F(4, 229635)
    assert s.coeff((F(2),)) == 0 and s.coeff((F(3),)) == 0


def test_twisted_partner_series_third_orbifold():
    geom = load_bundled("c3z3")
    ws = twisted_w_series(geom, 8)
    assert len(ws) == 1
    w = ws[0]
    assert w.coeff((F(2),)) == F(1, 2)
    assert w.coeff((F(5),)) == F(-1, 405)
    assert w.coeff((F(8),)) == F(25, 734832)
    assert w.coeff((F(3),)) == 0


def test_smooth_resolution_flat_coordinate_is_logarithm():
    geom = load_bundled("conifold")
    maps = closed_mirror_maps(geom, 8)
    assert len(maps) == 1
    ls = maps[0]
    assert set(ls.parts) == {(1,)}
    one = ls.parts[(1,)]
    assert one.coeff((F(0),)) == F(1) and len(one.terms) == 1


def test_pure_orbifold_flat_coordinate_has_no_logarithm():
    geom = load_bundled("c2z2xc")
    maps = closed_mirror_maps(geom, 8)
    assert len(maps) == 1
    s = maps[0].series_part()
    assert s.coeff((F(1),)) == F(1)
    assert s.coeff((F(3),)) == F(1, 24)


def test_open_correction_vanishes_on_bundled_geometries():
    for name in ("c3", "conifold", "c2z2xc", "c3z3"):
        geom = load_bundled(name)
        assert open_mirror_correction(geom, 6).is_zero()


def test_sector_series_untwisted_starts_at_one():
    geom = load_bundled("c2z2xc")
    sectors = sector_series(geom, 4, z_order=0)
    unit = next(el for el in geom.cone0.box if el.age == 0)
    s = sectors[unit.index]
    assert s.coeff((F(0), F(0))) == F(1)


# ---------------------------------------------------------------------------
# recurrence operators
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("name", ["conifold", "c2z2xc", "c3z3"])
def test_recurrence_operators_annihilate_flat_coordinates(name):
    geom = load_bundled(name)
    results = pf_check(geom, 8)
    assert results, "no operators checked"
    assert all(results.values()), {k: v for k, v in results.items() if not v}


def test_recurrence_operator_does_not_annihilate_garbage():
    geom = load_bundled("c2z2xc")
    beta = geom.pf_betas()[0]
    names = ["q0"]
    from remodel.series import TSeries
    junk = TSeries.var(QQ, names, [8], "q0", 1, F(2))
    ls = LogSeries.from_series(1, junk)
    assert not pf_apply(geom, beta, ls).is_zero()


# ---------------------------------------------------------------------------
# disk factors
# ---------------------------------------------------------------------------

def test_disk_factors_half_orbifold():
    geom = load_bundled("c2z2xc")
    assert disk_factor(geom, QQI, 1, 0) == QI(F(1, 2))
    assert disk_factor(geom, QQI, 1, 1) == QI(0, F(1, 2))
    assert disk_factor(geom, QQI, 2, 0) == QI(-1)
    assert disk_factor(geom, QQI, 2, 1) == QI(0, F(15, 16))


def test_disk_sector_selection_half_orbifold():
    geom = load_bundled("c2z2xc")
    assert disk_sector(geom, 1, 0).age == 1
    assert disk_sector(geom, 1, 1).age == 0
    assert disk_sector(geom, 2, 0).age == 0
    assert disk_sector(geom, 2, 1).age == 1


def test_disk_factors_smooth_space_framing_one():
    geom = load_bundled("c3")
    import math
    for d0 in range(1, 5):
        expect = F(math.comb(2 * d0, d0), 2)
        assert disk_factor(geom, QQI, d0, 0) == QI(expect)


def test_disk_factor_smooth_space_framing_two():
    geom = geom_with_framing("c3", 2)
    assert disk_factor(geom, QQI, 1, 0) == QI(-1)


def test_disk_potential_smooth_space():
    geom = load_bundled("c3")
    import math
    pot = disk_potential(geom, QQI, x_order=6, q_order=0)
    assert set(pot) == {0}
    s = pot[0]
    for d in range(1, 7):
        assert s.coeff((F(d),)) == QI(F(math.comb(2 * d, d), 2 * d * d))


def test_disk_potential_half_orbifold_leading_terms():
    geom = load_bundled("c2z2xc")
    pot = disk_potential(geom, QQI, x_order=2, q_order=2)
    # untwisted-sector pairs (d0,k)=(1,1),(2,0) enter at q^0 on the rung
    # a=-2 (weight disk_factor * d0^{-2} / |G0|); age-1 pairs (1,0),(2,1)
    # ride on the twisted series q/z + O(q^3), hence rung a=-1 and weight
    # d0^{-1}; the q^2 X^2 term pairs the z^{-2} part of the untwisted
    # sector series, -(3/8) q^2, with the rung-0 insertion.
    assert pot[1].coeff((F(0), F(1))) == QI(0, F(1, 4))       # (1,1): (i/2)/2
    assert pot[0].coeff((F(0), F(2))) == QI(F(-1, 8))         # (2,0): (-1)/8
    assert pot[0].coeff((F(1), F(1))) == QI(F(1, 4))          # (1,0): (1/2)/1/2
    assert pot[1].coeff((F(1), F(2))) == QI(0, F(15, 64))     # (2,1): (15i/16)/2/2
    assert pot[0].coeff((F(2), F(2))) == QI(F(3, 16))
    assert pot[1].coeff((F(2), F(1))) == QI(0, F(-3, 32))


def test_annulus_start_half_orbifold():
    geom = load_bundled("c2z2xc")
    paired = annulus_start(geom, QQI, x_order=2)
    e11 = (F(1), F(1))
    assert paired[(0, 0)].coeff(e11) == QI(F(1, 8))
    assert paired[(1, 1)].coeff(e11) == QI(F(3, 32))
    assert paired[(0, 1)].coeff(e11) == QI(0)
    assert paired[(1, 0)].coeff(e11) == QI(0)


def test_disk_factor_rejects_bad_framings_via_geometry():
    with pytest.raises(FramingError):
        geom_with_framing("c3", 0)


# ---------------------------------------------------------------------------
# zero-limit transition matrix
# ---------------------------------------------------------------------------

def test_limit_matrix_smooth_space():
    geom = load_bundled("c3")
    R = r_limit(geom, z_order=2)
    assert len(R) == 1 and len(R[0]) == 1
    entry = R[0][0]
    assert entry.coeff((F(0),)) == QI(1)
    # -(1/12) (1/w1 + 1/w2 + 1/w3) with weights (1, 1, -2)
    assert entry.coeff((F(1),)) == QI(F(-1, 8))


def test_limit_matrix_half_orbifold():
    geom = load_bundled("c2z2xc")
    R = r_limit(geom, z_order=1)
    # z^0 block is the identity
    for i in range(2):
        for j in range(2):
            expect = QI(1 if i == j else 0)
            assert R[i][j].coeff((F(0),)) == expect
    # hand-computed first-order entries
    assert R[0][0].coeff((F(1),)) == QI(F(-1, 9))
    assert R[1][1].coeff((F(1),)) == QI(F(-1, 9))
    assert R[0][1].coeff((F(1),)) == QI(F(-1, 12))
    assert R[1][0].coeff((F(1),)) == QI(F(-1, 12))
