"""The hyperbolic co-unitary group U(R, Phi) and its relation to the Clifford-Weil group."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

import numpy as np

from cwtool.config import DEFAULT_CAPS
from cwtool.cwgroup import cw_generators, gen_macwilliams, gen_quad, gen_unit, conductor
from cwtool.cyclo import CycMatrix
from cwtool.finring import CapExceeded, NotAUnit, units
from cwtool.qform import FormRing, _to_level, symmetric_idempotents


class HypcoError(Exception):
    pass


class ConditionViolated(HypcoError):
    pass


class KernelMismatch(HypcoError):
    pass


class OrderMismatch(HypcoError):
    pass


class NotProjective(HypcoError):
    pass


@dataclass(frozen=True)
class UElement:
    """((a, b), (c, d)) over R with the upper-triangular datum (phi1, m, phi2); m is psi^-1 of the off-diagonal form."""

    a: int
    b: int
    c: int
    d: int
    phi1: int
    m: int
    phi2: int

    @property
    def A(self):
        return (self.a, self.b, self.c, self.d)

    @property
    def datum(self):
        return (self.phi1, self.m, self.phi2)


class HypCtx:
    """Lookup tables for computing in U(R, Phi)."""

    def __init__(self, fr: FormRing):
        self.fr = fr
        R, V = fr.R, fr.V
        self.R, self.V = R, V
        L = fr.L
        self.L = L
        self.PT = fr.phi_tables
        self.MT = np.stack([_to_level(fr.beta.L, fr.ad.psi_tables[r], L) for r in range(R.size)])
        self._phi = {self.PT[i].tobytes(): i for i in range(len(fr.Phi))}
        self._m = {self.MT[r].tobytes(): r for r in range(R.size)}
        self.M = R.mul_table
        self.J = fr.J
        self.act = V.act_table
        self.vadd = V.add_table
        self.zero_phi = next(i for i, p in enumerate(fr.Phi) if p.is_zero())

    # ring helpers
    def mul(self, *xs):
        out = xs[0]
        for x in xs[1:]:
            out = int(self.M[out, x])
        return out

    def add(self, x, y):
        return self.R.add(x, y)

    def sub(self, x, y):
        return self.R.sub(x, y)

    def table(self, phi1, m, phi2):
        T = self.PT[phi1][:, None] + self.MT[m] + self.PT[phi2][None, :]
        return T % self.L

    def datum_of(self, T):
        """Inverse of ``table``: recover (phi1, m, phi2) from an evaluation table on V x V."""
        if T[0, 0] % self.L:
            raise ConditionViolated("datum does not vanish at 0")
        p1 = self._phi.get(np.ascontiguousarray(T[:, 0]).tobytes())
        p2 = self._phi.get(np.ascontiguousarray(T[0, :]).tobytes())
        mt = (T - T[:, :1] - T[:1, :]) % self.L
        m = self._m.get(np.ascontiguousarray(mt).tobytes())
        if p1 is None or p2 is None or m is None:
            raise ConditionViolated("datum leaves Phi_2")
        return p1, m, p2

    def act_pairs(self, A):
        """Index arrays (W1, W2) with A (v1, v2)^T = (W1[v1, v2], W2[v1, v2])."""
        a, b, c, d = A
        W1 = self.vadd[self.act[a][:, None], self.act[b][None, :]]
        W2 = self.vadd[self.act[c][:, None], self.act[d][None, :]]
        return W1, W2

    def condition(self, x: UElement) -> bool:
        fr, J = self.fr, self.J
        a, b, c, d = x.A
        ok = (self.mul(int(J[c]), a) == fr.lam[x.phi1]
              and self.mul(int(J[c]), b) == x.m
              and self.sub(self.mul(int(J[d]), a), self.R.one) == fr.tauM[x.m]
              and self.mul(int(J[d]), b) == fr.lam[x.phi2])
        return bool(ok)

    def identity(self) -> UElement:
        z, one = self.R.zero, self.R.one
        return UElement(one, z, z, one, self.zero_phi, z, self.zero_phi)


def u_mul(ctx: HypCtx, x: UElement, y: UElement, check: bool = True) -> UElement:
    """(A1, q1)(A2, q2) = (A1 A2, q1[A2] + q2) with q[A](v) = q(A v)."""
    a1, b1, c1, d1 = x.A
    a2, b2, c2, d2 = y.A
    m = ctx.mul
    A = (ctx.add(m(a1, a2), m(b1, c2)), ctx.add(m(a1, b2), m(b1, d2)),
         ctx.add(m(c1, a2), m(d1, c2)), ctx.add(m(c1, b2), m(d1, d2)))
    W1, W2 = ctx.act_pairs(y.A)
    T = (ctx.table(*x.datum)[W1, W2] + ctx.table(*y.datum)) % ctx.L
    out = UElement(*A, *ctx.datum_of(T))
    if check and not ctx.condition(out):
        raise ConditionViolated("product violates the defining condition")
    return out


def u_generator_d(ctx: HypCtx, u: int, phi: int) -> UElement:
    """d(u, phi) = ((u^-J, u^-J psi^-1(lambda(phi))), (0, u)) with datum (0, 0, phi)."""
    R, fr = ctx.R, ctx.fr
    if not R.is_unit(u):
        raise NotAUnit(R.fmt(u))
    uJ = int(ctx.J[R.inverse(u)])
    x = UElement(uJ, ctx.mul(uJ, int(fr.lam[phi])), R.zero, u, ctx.zero_phi, R.zero, phi)
    if not ctx.condition(x):
        raise ConditionViolated(f"d({R.fmt(u)}, phi_{phi})")
    return x


def u_generator_H(ctx: HypCtx, iota: int, u_iota: int, v_iota: int) -> UElement:
    """H = ((1 - iota^J, v), (-eps^-1 u^J, 1 - iota)) with datum (0, psi(-eps iota), 0)."""
    R, fr = ctx.R, ctx.fr
    one = R.one
    eps = fr.epsilon
    iJ = int(ctx.J[iota])
    neg = lambda x: R.sub(R.zero, x)
    c = neg(ctx.mul(R.inverse(eps), int(ctx.J[u_iota])))
    x = UElement(R.sub(one, iJ), v_iota, c, R.sub(one, iota),
                 ctx.zero_phi, neg(ctx.mul(eps, iota)), ctx.zero_phi)
    if not ctx.condition(x):
        raise ConditionViolated(f"H({R.fmt(iota)})")
    return x


def u_generators(ctx: HypCtx, full: bool = False):
    """d(u, 0) for generating units, d(1, phi) for additive Phi generators, H per symmetric idempotent.

    d(u, 0) d(1, phi) = d(u, phi), so this reduced set generates the same group as all d(u, phi).
    With ``full`` every d(u, phi) is included.
    """
    fr, R = ctx.fr, ctx.R
    out, labels = [], []
    if full:
        for u in units(R):
            for p in range(len(fr.Phi)):
                out.append(u_generator_d(ctx, u, p))
                labels.append(("d", u, p))
    else:
        for u in fr.unit_generators():
            out.append(u_generator_d(ctx, u, ctx.zero_phi))
            labels.append(("d", u, ctx.zero_phi))
        for p in fr.phi_generators():
            out.append(u_generator_d(ctx, R.one, p))
            labels.append(("d", R.one, p))
    for t in symmetric_idempotents(fr):
        if t[0] == R.zero:
            continue
        out.append(u_generator_H(ctx, *t))
        labels.append(("H",) + tuple(t))
    return out, labels


@dataclass
class UClosure:
    elements: list
    order: int
    ker_pi_order: int
    pi_image_order: int
    generators: list
    labels: list


def u_closure(fr: FormRing, cap: int | None = None, full: bool = False) -> UClosure:
    cap = DEFAULT_CAPS.group_order if cap is None else cap
    ctx = HypCtx(fr)
    gens, labels = u_generators(ctx, full)
    e = ctx.identity()
    seen = {e}
    order = [e]
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = u_mul(ctx, x, g)
                if y not in seen:
                    seen.add(y)
                    order.append(y)
                    nxt.append(y)
                    if len(seen) > cap:
                        raise CapExceeded(f"|U| exceeds {cap}")
        frontier = nxt
    ident_A = e.A
    ker = [x for x in order if x.A == ident_A]
    image = {x.A for x in order}
    kl = len(fr.ker_lambda)
    if len(ker) != kl ** 2:
        raise KernelMismatch(f"|ker pi| = {len(ker)} but |ker lambda|^2 = {kl ** 2}")
    if len(ker) * len(image) != len(order):
        raise KernelMismatch("order is not |ker| * |image|")
    return UClosure(order, len(order), len(ker), len(image), gens, labels)


def kernel_structure(fr: FormRing, closure: UClosure):
    """Datum pairs (phi1, phi2) of ker pi; they should be exactly ker(lambda) x ker(lambda)."""
    return sorted((x.phi1, x.phi2) for x in closure.elements if x.A == (fr.R.one, fr.R.zero, fr.R.zero, fr.R.one))


def symplectic_count(R) -> int:
    """Brute-force |Sp_2(R)| for commutative R: A^T Omega A = Omega with Omega = ((0, 1), (-1, 0))."""
    M = R.mul_table
    add, sub = R.add, R.sub
    z, one = R.zero, R.one
    mone = R.sub(z, one)
    n = 0
    for a, b, c, d in itertools.product(range(R.size), repeat=4):
        # A^T Omega A has off-diagonal entry ad - cb (and its negative); diagonal entries vanish
        if sub(int(M[a, d]), int(M[c, b])) == one and sub(int(M[b, c]), int(M[d, a])) == mone:
            n += 1
    return n


# ---------------------------------------------------------------------------
# projective consistency with the Clifford-Weil group

def _image(fr: FormRing, label, L):
    if label[0] == "d":
        _, u, p = label
        return gen_unit(fr, u, L) @ gen_quad(fr, p, L)
    _, iota, u, v = label
    return gen_macwilliams(fr, iota, u, v, L=L)


def _proportional(A: CycMatrix, B: CycMatrix) -> bool:
    return (A @ B.conj_transpose()).scalar_value() is not None


def projective_map(fr: FormRing, closure: UClosure | None = None):
    """Assign a matrix to every element of U along a spanning tree and check every Cayley-graph edge.

    Tries x g -> M(x) M(g) first and then x g -> M(g) M(x); returns the orientation that is
    consistent up to scalars, or raises NotProjective.
    """
    closure = closure or u_closure(fr)
    ctx = HypCtx(fr)
    L = conductor(fr)
    imgs = [_image(fr, lab, L) for lab in closure.labels]
    for orientation in ("hom", "anti"):
        M = {ctx.identity(): CycMatrix.identity(fr.V.size, L)}
        frontier = [ctx.identity()]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                for g, Mg in zip(closure.generators, imgs):
                    y = u_mul(ctx, x, g, check=False)
                    My = M[x] @ Mg if orientation == "hom" else Mg @ M[x]
                    if y in M:
                        if not _proportional(M[y], My):
                            ok = False
                            break
                    else:
                        M[y] = My
                        nxt.append(y)
                if not ok:
                    break
            frontier = nxt
        if ok:
            return orientation, M
    raise NotProjective("no orientation makes U -> C/Z well defined")


def random_word_check(fr: FormRing, closure: UClosure, orientation: str, words: int = 100, length: int = 12,
                      seed: int = 7, table=None) -> bool:
    """Image of a product equals the product of images up to scalars, for seeded random words."""
    ctx = HypCtx(fr)
    L = conductor(fr)
    imgs = [_image(fr, lab, L) for lab in closure.labels]
    rng = random.Random(seed)
    if table is None:
        _, table = projective_map(fr, closure)
    for _ in range(words):
        w = [rng.randrange(len(imgs)) for _ in range(length)]
        x = ctx.identity()
        Mx = CycMatrix.identity(fr.V.size, L)
        for i in w:
            x = u_mul(ctx, x, closure.generators[i])
            Mx = Mx @ imgs[i] if orientation == "hom" else imgs[i] @ Mx
        if not _proportional(table[x], Mx):
            return False
    return True


def projective_consistency(fr: FormRing, m: int = 1, group=None, words: int = 100) -> dict:
    """|C_m| = |Z| |U(Mat_m(R), Phi_m)| plus the projective map checks."""
    from cwtool.cwgroup import build_group, scalar_center
    from cwtool.qform import matrix_lift
    frm = matrix_lift(fr, m) if m > 1 else fr
    G = group if group is not None else build_group(fr, m)
    z = scalar_center(G)
    cl = u_closure(frm)
    if G.order != z * cl.order:
        raise OrderMismatch(f"|C| = {G.order} but |Z| |U| = {z} * {cl.order}")
    orientation, table = projective_map(frm, cl)
    ok = random_word_check(frm, cl, orientation, words=words, table=table)
    if not ok:
        raise NotProjective("random word check failed")
    return {"group_order": G.order, "center": z, "U_order": cl.order, "ker_pi": cl.ker_pi_order,
            "pi_image": cl.pi_image_order, "orientation": orientation, "consistent": True}
