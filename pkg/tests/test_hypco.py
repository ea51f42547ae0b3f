import pytest

from cwtool.hypco import (
    HypCtx, NotAUnit, UElement, kernel_structure, projective_consistency, symplectic_count, u_closure, u_generator_d,
    u_generator_H, u_generators, u_mul,
)
from cwtool.finring import GF, Zn
from cwtool.presets import get_formring

CLOSURES = {  # |U|, |ker pi|, |pi(U)|
    "binary-II": (24, 4, 6),
    "F4-even": (960, 16, 60),
    "Z4-rho-a": (192, 4, 48),
    "Z4-rho-b": (768, 16, 48),
    "F4u": (96, 1, 96),
}


def ctx_for(name):
    return HypCtx(get_formring(name))


def power(ctx, x, k):
    y = ctx.identity()
    for _ in range(k):
        y = u_mul(ctx, y, x)
    return y


def closure_of(ctx, gens):
    seen = {ctx.identity()}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = u_mul(ctx, x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def test_identity_and_inverse_units():
    ctx = ctx_for("Z4-rho-b")
    e = ctx.identity()
    for x in u_closure(ctx.fr).generators:
        assert u_mul(ctx, e, x) == x == u_mul(ctx, x, e)
    zero = ctx.zero_phi
    assert u_mul(ctx, u_generator_d(ctx, 3, zero), u_generator_d(ctx, 3, zero)) == e
    assert u_generator_d(ctx, 1, zero) == e
    with pytest.raises(NotAUnit):
        u_generator_d(ctx, 2, zero)


def test_z4_generators():
    ctx = ctx_for("Z4-rho-a")
    d = u_generator_d(ctx, 3, ctx.zero_phi)
    assert d.A == (3, 0, 0, 3) and d.datum == (ctx.zero_phi, 0, ctx.zero_phi)
    H = u_generator_H(ctx, 1, 1, 1)
    assert H.A == (0, 1, 3, 0) and H.m == 3
    assert u_generator_H(ctx, 0, 0, 0) == ctx.identity()


def test_quaternionic_generators():
    ctx = ctx_for("F4u")
    R, fr = ctx.R, ctx.fr
    w, w2, u = R.parse("w"), R.parse("w^2"), R.parse("u")
    one_u = R.parse("1+u")
    g1 = u_generator_d(ctx, w2, ctx.zero_phi)
    assert g1.A == (w, 0, 0, w2)
    assert power(ctx, g1, 3) == ctx.identity()
    g2 = u_generator_d(ctx, one_u, ctx.zero_phi)
    assert g2.A == (one_u, 0, 0, one_u)
    phi0 = fr.phi_index(fr.meta["phi_generators"][0])
    g3 = u_generator_d(ctx, R.one, phi0)
    assert g3.A == (R.one, u, 0, R.one) and g3.phi2 == phi0
    h = u_generator_H(ctx, R.one, R.one, R.one)
    assert h.A == (R.zero, R.one, R.one, R.zero) and h.m == R.one
    assert len(closure_of(ctx, [g1, g2, g3, h])) == 96


@pytest.mark.parametrize("name", sorted(CLOSURES))
def test_closure_orders(name):
    cl = u_closure(get_formring(name))
    assert (cl.order, cl.ker_pi_order, cl.pi_image_order) == CLOSURES[name]


@pytest.mark.parametrize("name", ["binary-II", "Z4-rho-a", "F4u"])
def test_full_generator_set_same_group(name):
    fr = get_formring(name)
    assert u_closure(fr, full=True).order == u_closure(fr).order


@pytest.mark.parametrize("name", ["binary-II", "F4-even", "Z4-rho-a", "Z4-rho-b", "F4u"])
def test_kernel_is_ker_lambda_squared(name):
    fr = get_formring(name)
    ker = kernel_structure(fr, u_closure(fr))
    kl = sorted(fr.ker_lambda)
    assert ker == sorted((a, b) for a in kl for b in kl)


def test_condition_closed_under_products():
    ctx = ctx_for("F4u")
    cl = u_closure(ctx.fr)
    assert all(ctx.condition(x) for x in cl.elements)
    elems = set(cl.elements)
    for x in cl.elements:
        for y in cl.elements:
            assert u_mul(ctx, x, y, check=True) in elems


def test_witness_independence():
    ctx = ctx_for("Z4-rho-b")
    gens, labels = u_generators(ctx)
    alt = [u_generator_H(ctx, 1, 3, 3) if lab[0] == "H" else g for g, lab in zip(gens, labels)]
    assert len(closure_of(ctx, alt)) == len(closure_of(ctx, gens)) == 768


def test_symplectic_counts():
    # |SL_2(F_q)| = q (q^2 - 1); |SL_2(Z/4)| = 48
    assert symplectic_count(Zn(2)) == 6
    assert symplectic_count(GF(2, 2, [1, 1, 1])) == 60
    assert symplectic_count(Zn(4)) == 48
    assert symplectic_count(Zn(3)) == 24


@pytest.mark.parametrize("name,orientation", [("binary-II", "hom"), ("Z4-rho-a", "hom"), ("F4u", "anti")])
def test_projective_consistency(name, orientation):
    out = projective_consistency(get_formring(name), words=30)
    assert out["consistent"] and out["orientation"] == orientation
    assert out["group_order"] == out["center"] * out["U_order"]


def test_uelement_fields():
    x = UElement(1, 2, 3, 0, 0, 1, 0)
    assert x.A == (1, 2, 3, 0) and x.datum == (0, 1, 0)
