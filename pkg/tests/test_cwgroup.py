import random
from fractions import Fraction

import numpy as np
import pytest

from cwtool.cwgroup import (
    MatrixGroup, NotCompatible, PhiNotInPhi, close, compress, conductor, cw_generators, gen_macwilliams, gen_quad,
    gen_unit, molien, orbits_under, scalar_center, symmetrize,
)
from cwtool.cyclo import CycMatrix, CycNum, root_of_unity, sqrt_int
from cwtool.finring import NotAUnit, units
from cwtool.presets import get_formring
from cwtool.qform import QuadMap
from helpers import group


def mat(L, rows):
    return CycMatrix.from_entries(L, rows)


def diag(L, xs):
    n = len(xs)
    return mat(L, [[xs[i] if i == j else 0 for j in range(n)] for i in range(n)])


def find_quad(fr, values):
    """Index of the Phi member with the given values (as fractions)."""
    V = fr.V
    q = QuadMap.from_function(V, lambda v: values[v], check=False)
    return fr.phi_index(q)


def test_conductor_presets():
    assert {n: conductor(get_formring(n)) for n in ["binary-II", "F4-even", "Z4-rho-a", "Z4-rho-b", "F4u"]} == \
        dict.fromkeys(["binary-II", "F4-even", "Z4-rho-a", "Z4-rho-b", "F4u"], 8)


def test_unit_generator_row_convention():
    fr = get_formring("Z4-rho-a")
    assert gen_unit(fr, 1).is_identity()
    displayed = mat(8, [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]])
    assert gen_unit(fr, 3) == displayed
    with pytest.raises(NotAUnit):
        gen_unit(fr, 2)


def test_f4_displayed_generators():
    fr = get_formring("F4-even")  # element order 0, 1, w, w^2
    w, w2 = fr.R.parse("w"), fr.R.parse("w^2")
    displayed = mat(8, [[1, 0, 0, 0], [0, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 0]])
    # under (gX)_v = x_{rv} the displayed matrix is rho(w^2) = rho(w)^T
    assert gen_unit(fr, w2) == displayed
    assert gen_unit(fr, w).transpose() == displayed
    i = root_of_unity(8, 2)
    idx = find_quad(fr, [0, Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)])
    assert idx is not None
    assert gen_quad(fr, idx) == diag(8, [1, -1, i, i])
    h = mat(8, [[Fraction(s, 2) for s in r] for r in [[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, -1, 1], [1, -1, 1, -1]]])
    assert gen_macwilliams(fr, 1, 1, 1) == h
    assert (h @ h).is_identity()


def test_z4_displayed_generators():
    fr = get_formring("Z4-rho-a")
    z, i = root_of_unity(8, 1), root_of_unity(8, 2)
    phi0 = fr.phi_index(fr.meta["phi_generators"][0])
    assert gen_quad(fr, phi0) == diag(8, [1, z, -1, z])
    h = mat(8, [[Fraction(1, 2) * x for x in row] for row in
                [[1, 1, 1, 1], [1, i, -1, -i], [1, -1, 1, -1], [1, -i, -1, i]]])
    assert gen_macwilliams(fr, 1, 1, 1) == h
    frb = get_formring("Z4-rho-b")
    vphi = frb.phi_index(frb.meta["phi_generators"][1])
    assert gen_quad(frb, vphi) == diag(8, [1, i, -1, -i])


def test_binary_h_and_trivial_cases():
    fr = get_formring("binary-II")
    s2 = sqrt_int(2)[0]
    h = mat(8, [[1, 1], [1, -1]]).scale(s2.inverse())
    assert gen_macwilliams(fr, 1, 1, 1) == h
    assert gen_macwilliams(fr, 0, 0, 0).is_identity()
    assert gen_quad(fr, fr.phi_index(QuadMap.zero(fr.V))).is_identity()
    with pytest.raises(PhiNotInPhi):
        gen_quad(fr, QuadMap(fr.V, 3, [0, 1]))


@pytest.mark.parametrize("name", ["binary-II", "F4-even", "Z4-rho-a", "Z4-rho-b", "F4u"])
def test_generator_shapes(name):
    fr = get_formring(name)
    gens = cw_generators(fr, all_units=True, all_phi=True)
    for g in gens.units:
        assert ((g.num[..., 0] == 1).sum(axis=1) == 1).all() and g.den == 1
    for g in gens.quads:
        off = g.num.copy()
        off[np.arange(g.n), np.arange(g.n)] = 0
        assert not off.any()
    for g in gens.macwilliams:
        assert (g @ g.conj_transpose()).is_identity()


ORDERS = {"binary-II": (192, 8), "Z4-rho-a": (1536, 8), "Z4-rho-b": (6144, 8), "F4-even": (3840, 4), "F4u": (96, 1)}


@pytest.mark.parametrize("name", sorted(ORDERS))
def test_orders_and_centers(name):
    G = group(name)
    assert (G.order, scalar_center(G)) == ORDERS[name]


def test_binary_genus_two():
    G = group("binary-II", 2)
    assert G.order == 92160 == 8 * 2 ** 4 * 720
    assert scalar_center(G) == 8


@pytest.mark.parametrize("name", ["binary-II", "Z4-rho-a", "F4u"])
def test_shuffle_invariance(name):
    G = group(name)
    gens = list(G.generators)
    random.Random(5).shuffle(gens)
    H = close(gens[::-1], L=G.L)
    assert set(H.keys) == set(G.keys)


@pytest.mark.parametrize("name", ["binary-II", "F4-even", "Z4-rho-a", "Z4-rho-b", "F4u"])
def test_redundant_generators_do_not_grow(name):
    fr = get_formring(name)
    G = group(name)
    H = close(cw_generators(fr, all_units=True, all_phi=True).all, L=G.L)
    assert H.order == G.order
    assert all(g in G for g in H.generators)


def test_order_factorization():
    from cwtool.hypco import symplectic_count
    for name in ["Z4-rho-a", "Z4-rho-b"]:
        fr = get_formring(name)
        G = group(name)
        assert G.order == scalar_center(G) * len(fr.ker_lambda) ** 2 * symplectic_count(fr.R)


def test_molien_trivial_group():
    G = close([CycMatrix.identity(1, 1)])
    assert molien(G, 3).coeffs == [1, 1, 1, 1]


def test_molien_degrees_divisible_by_eight():
    s = molien(group("Z4-rho-a"), 40)
    assert s.coeffs[0] == 1
    assert all(c == 0 for d, c in enumerate(s.coeffs) if d % 8)


def test_molien_cyclic_oracle():
    # <diag(i, -i)>: invariants of degree d count monomials x^a y^b with a - b = 0 mod 4
    i = root_of_unity(4, 1)
    G = close([diag(4, [i, -i])])
    want = [sum(1 for a in range(d + 1) if (2 * a - d) % 4 == 0) for d in range(13)]
    assert molien(G, 12).coeffs == want


def test_symmetrize_singletons_identity():
    G = group("F4u")
    orbits = [[v] for v in range(G.n)]
    for g in G.generators:
        assert compress(g, orbits) == g
    S = symmetrize(G, orbits)
    assert S.order == G.order and set(S.keys) == set(G.keys)


@pytest.mark.parametrize("convention", ["row", "column"])
def test_symmetrize_by_units(convention):
    fr = get_formring("F4u")
    G = group("F4u")
    orbits = orbits_under(fr, units(fr.R), "left")
    assert sorted(len(o) for o in orbits) == [1, 3, 12]
    S = symmetrize(G, orbits, convention)
    assert (S.n, S.order) == (3, 8)
    # dihedral of order 8: one identity, five involutions, two elements of order 4
    prof = {}
    for g in S.elements():
        k, p = 1, g
        while not p.is_identity():
            p, k = p @ g, k + 1
        prof[k] = prof.get(k, 0) + 1
    assert prof == {1: 1, 2: 5, 4: 2}


def test_symmetrize_incompatible():
    G = group("Z4-rho-a")
    with pytest.raises(NotCompatible):
        symmetrize(G, [[0, 1], [2, 3]])


def test_f4_omega_orbits():
    fr = get_formring("F4u")
    w = fr.R.parse("w")
    assert len(orbits_under(fr, [w], "left")) == 6
    assert len(orbits_under(fr, [w], "conj")) == 8


def test_save_load(tmp_path):
    G = group("binary-II")
    path = tmp_path / "g.npz"
    G.save(path)
    H = MatrixGroup.load(path)
    assert (H.L, H.n, H.order) == (G.L, G.n, G.order)
    assert set(H.keys) == set(G.keys)
    assert all(a == b for a, b in zip(H.generators, G.generators))


def test_membership():
    G = group("binary-II")
    assert CycMatrix.identity(2, 8) in G
    assert diag(8, [1, root_of_unity(8, 1)]) not in G
    assert diag(8, [CycNum.rational(-1, 8), -1]) in G
