"""Lattice / fan layer checked against the four bundled geometries, whose
normal forms, charge data and box structure were worked out by hand."""
from fractions import Fraction

import pytest

from remodel.toric import (
    FramingError,
    Geometry,
    GeometryError,
    hnf_rows,
    load_bundled,
    smith_kernel,
)

F = Fraction


@pytest.fixture(scope="module")
def c3():
    return load_bundled("c3")


@pytest.fixture(scope="module")
def conifold():
    return load_bundled("conifold")


@pytest.fixture(scope="module")
def c2z2xc():
    return load_bundled("c2z2xc")


@pytest.fixture(scope="module")
def c3z3():
    return load_bundled("c3z3")


# -- plain linear algebra ----------------------------------------------------

def test_smith_kernel_rank_one():
    # columns (1,0,1),(0,1,1),(0,0,1),(1,1,1): relation b1+b2-b3-b4 = 0
    A = [[1, 0, 0, 1], [0, 1, 0, 1], [1, 1, 1, 1]]
    assert smith_kernel(A) == [[1, 1, -1, -1]]


def test_smith_kernel_saturation():
    # kernel direction (2,-2) must come out primitive as (1,-1)
    assert smith_kernel([[2, 2]]) == [[1, -1]]


def test_hnf_canonical():
    assert hnf_rows([[0, 2, 4], [0, 3, 5]]) == [[0, 1, 1], [0, 0, 2]]


# -- global counts -----------------------------------------------------------

def test_counts(c3, conifold, c2z2xc, c3z3):
    for g, (p, pp, genus, nb, nbr, orders) in [
        (c3, (0, 0, 0, 3, 1, [1])),
        (conifold, (1, 1, 0, 4, 2, [1, 1])),
        (c2z2xc, (1, 0, 0, 4, 2, [2])),
        (c3z3, (1, 0, 1, 3, 3, [3])),
    ]:
        assert g.p == p
        assert g.p_prime == pp
        assert g.genus == genus
        assert g.n_boundary == nb
        assert g.n_branch == nbr
        assert [c.order for c in g.cones] == orders


# -- flag normal forms and framed weights -------------------------------------

def test_flag_normal_forms(c3, conifold, c2z2xc, c3z3):
    assert (c3.flag0.r, c3.flag0.s, c3.flag0.m) == (1, 0, 1)
    assert (conifold.flag0.r, conifold.flag0.s, conifold.flag0.m) == (1, 0, 1)
    assert (c2z2xc.flag0.r, c2z2xc.flag0.s, c2z2xc.flag0.m) == (1, 0, 2)
    assert (c3z3.flag0.r, c3z3.flag0.s, c3z3.flag0.m) == (3, 1, 1)


def test_framed_weights(c3, conifold, c2z2xc, c3z3):
    # framing 1 everywhere in the bundled files
    assert c3.flag0.weights == (F(1), F(1), F(-2))
    assert conifold.flag0.weights == (F(1), F(1), F(-2))
    assert c2z2xc.flag0.weights == (F(1), F(1, 2), F(-3, 2))
    assert c3z3.flag0.weights == (F(1, 3), F(1, 3), F(-2, 3))


def test_conifold_second_cone_weights(conifold):
    # second chart worked out by hand: e1 = (1,-1), e2 = (1,0)
    fl = conifold.cones[1].flag
    assert (fl.r, fl.s, fl.m) == (1, 0, 1)
    assert fl.e1 == (1, -1) and fl.e2 == (1, 0)
    assert fl.weights == (F(-1), F(2), F(-1))


def test_weight_sum_zero_everywhere(c3, conifold, c2z2xc, c3z3):
    for g in (c3, conifold, c2z2xc, c3z3):
        for cone in g.cones:
            assert sum(cone.flag.weights, F(0)) == 0


def test_mirror_monomials(c3, conifold, c2z2xc, c3z3):
    assert list(c3.flag0.mn) == [(1, 0), (0, 1), (0, 0)]
    assert list(conifold.flag0.mn) == [(1, 0), (0, 1), (0, 0), (1, 1)]
    assert list(c2z2xc.flag0.mn) == [(1, 0), (0, 2), (0, 0), (0, 1)]
    assert list(c3z3.flag0.mn) == [(3, -1), (0, 1), (0, 0), (1, 0)]


# -- degenerate framings -------------------------------------------------------

def test_degenerate_framings():
    for name, bad in [("c3", 0), ("c3", -1), ("conifold", 0),
                      ("c2z2xc", 0), ("c2z2xc", -2), ("c3z3", 2), ("c3z3", -1)]:
        raw = dict(load_bundled(name).raw)
        raw["framing"] = bad
        with pytest.raises(FramingError):
            Geometry(raw)


# -- charge data ----------------------------------------------------------------

def test_charge_matrices(conifold, c2z2xc, c3z3):
    assert conifold.L_basis == [[1, 1, -1, -1]]
    assert c2z2xc.L_basis == [[0, 1, 1, -2]]
    assert c3z3.L_basis == [[1, 1, 1, -3]]


def test_coefficient_exponents(conifold, c2z2xc, c3z3):
    # a_i(q) = q^{s_i} for the single non-vertex point of the preferred cone
    assert conifold.s_matrices[conifold.sigma0][0] == {3: 1}
    assert c2z2xc.s_matrices[c2z2xc.sigma0][0] == {3: 1}
    assert c3z3.s_matrices[c3z3.sigma0][0] == {3: 1}
    # conifold second cone: same degree on its own complement
    assert conifold.s_matrices[1][0] == {2: 1}


def test_divisor_coefficients(conifold, c2z2xc, c3z3):
    assert conifold.m_coeffs == [(F(-1),), (F(-1),), (F(1),), (F(1),)]
    assert c2z2xc.m_coeffs == [(F(0),), (F(-1, 2),), (F(-1, 2),), (F(1),)]
    assert c3z3.m_coeffs == [(F(-1, 3),), (F(-1, 3),), (F(-1, 3),), (F(1),)]


def test_pf_betas(conifold, c2z2xc, c3z3):
    assert conifold.pf_betas() == [(F(-1), F(-1), F(1), F(1))]
    assert c2z2xc.pf_betas() == [(F(0), F(-1), F(-1), F(2))]
    assert c3z3.pf_betas() == [(F(-1), F(-1), F(-1), F(3))]


# -- box elements and group data -------------------------------------------------

def test_boxes(c3, conifold, c2z2xc, c3z3):
    assert [el.age for el in c3.cone0.box] == [0]
    assert [el.age for el in conifold.cones[0].box] == [0]
    assert [el.age for el in conifold.cones[1].box] == [0]
    assert [el.age for el in c2z2xc.cone0.box] == [0, 1]
    assert [el.v for el in c2z2xc.cone0.box] == [(0, 0, 0), (0, 1, 1)]
    assert [el.age for el in c3z3.cone0.box] == [0, 1, 2]
    assert [el.v for el in c3z3.cone0.box] == [(0, 0, 0), (0, 0, 1), (0, 0, 2)]


def test_box_group_ops(c2z2xc, c3z3):
    g = c3z3
    cone = g.cone0
    e, h1, h2 = cone.box
    assert g.box_compose(cone, h1, h1) == h2
    assert g.box_compose(cone, h1, h2) == e
    assert g.box_inverse(cone, h1) == h2
    g2 = c2z2xc
    e, h = g2.cone0.box
    assert g2.box_inverse(g2.cone0, h) == h
    assert g2.box_compose(g2.cone0, h, h) == e


def test_characters_orthogonal(c2z2xc, c3z3):
    import cmath
    for g in (c2z2xc, c3z3):
        cone = g.cone0
        table = g.characters(cone)
        n = cone.order
        assert len(table) == n
        for r1 in range(n):
            for r2 in range(n):
                acc = sum(cmath.exp(2j * cmath.pi * (table[r1][k] - table[r2][k]))
                          for k in range(n))
                assert abs(acc - (n if r1 == r2 else 0)) < 1e-12


def test_characters_values(c2z2xc):
    table = c2z2xc.characters(c2z2xc.cone0)
    assert sorted(table) == [[F(0), F(0)], [F(0), F(1, 2)]]


# -- effective classes -------------------------------------------------------------

def test_keff_conifold(conifold):
    ks = conifold.keff(4)
    assert [k.degrees for k in ks] == [(1,), (2,), (3,), (4,)]
    assert all(k.v == (0, 0, 0) for k in ks)
    assert ks[0].pairings == (F(-1), F(-1), F(1), F(1))


def test_keff_c2z2xc(c2z2xc):
    ks = c2z2xc.keff(4)
    assert [k.degrees for k in ks] == [(1,), (2,), (3,), (4,)]
    assert ks[0].pairings == (F(0), F(-1, 2), F(-1, 2), F(1))
    # twisted sectors for odd degree, untwisted for even
    assert [k.v for k in ks] == [(0, 1, 1), (0, 0, 0), (0, 1, 1), (0, 0, 0)]


def test_keff_c3z3(c3z3):
    ks = c3z3.keff(6)
    assert [k.degrees for k in ks] == [(d,) for d in range(1, 7)]
    assert [k.v for k in ks] == [(0, 0, 1), (0, 0, 2), (0, 0, 0),
                                 (0, 0, 1), (0, 0, 2), (0, 0, 0)]


def test_keff_empty_for_c3(c3):
    assert c3.keff(6) == []


# -- input validation ----------------------------------------------------------

def test_rejects_inner_brane():
    raw = dict(load_bundled("conifold").raw)
    raw["flag"] = {"sigma": 0, "tau": [0, 1]}   # the inner diagonal
    with pytest.raises(GeometryError):
        Geometry(raw)


def test_rejects_clockwise_triangle():
    raw = dict(load_bundled("c3").raw)
    raw["triangles"] = [[0, 2, 1]]
    with pytest.raises(GeometryError):
        Geometry(raw)


def test_rejects_bad_cover():
    raw = dict(load_bundled("conifold").raw)
    raw["triangles"] = [[0, 1, 2]]
    with pytest.raises(GeometryError):
        Geometry(raw)


def test_describe_roundtrip(c2z2xc):
    import json
    desc = c2z2xc.describe()
    # feeding the description back in reproduces the same geometry
    g2 = Geometry(json.loads(json.dumps(desc)))
    assert g2.describe() == desc
    assert g2.L_basis == c2z2xc.L_basis
    assert g2.flag0 == c2z2xc.flag0
