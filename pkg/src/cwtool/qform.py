"""
Q/Z-valued bilinear forms and quadratic mappings on a finite module, the
qmodule calculus relating them, and validated form rings (R, V, beta, Phi).

Forms are stored extensionally: a value table of numerators over a common
denominator ``L``, normalised so that ``L`` is minimal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product

import numpy as np

from cwtool.config import DEFAULT_CAPS
from cwtool.finring import (CapExceeded, FiniteModule, FiniteRing, MatRing, QZ, idempotents,
                            power_module, power_parts, units)


class FormError(Exception):
    pass


class NotBilinear(FormError):
    pass


class NotQuadratic(FormError):
    pass


class Singular(FormError):
    pass


class MNotTauClosed(FormError):
    pass


class PsiNotInjective(FormError):
    pass


class NoSuchJ(FormError):
    pass


class BraceNotInPhi(FormError):
    pass


class LambdaEscapesM(FormError):
    pass


class ClosureCapExceeded(FormError):
    pass


def _normalise(L, table):
    table = np.asarray(table, dtype=np.int64) % L
    g = math.gcd(L, int(np.gcd.reduce(table.ravel())) if table.size else 0)
    if g > 1:
        return L // g, table // g
    return L, table


def _to_level(L, table, L2):
    return (table * (L2 // L)) % L2


class _Table:
    module: FiniteModule
    L: int
    table: np.ndarray

    def key(self):
        return (self.L, self.table.tobytes())

    def __eq__(self, other):
        return type(self) is type(other) and self.module is other.module and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def at_level(self, L2: int) -> np.ndarray:
        return _to_level(self.L, self.table, L2)

    def _binop(self, other, sign):
        L = math.lcm(self.L, other.L)
        return type(self)(self.module, L, self.at_level(L) + sign * other.at_level(L))

    def __add__(self, other):
        return self._binop(other, 1)

    def __sub__(self, other):
        return self._binop(other, -1)

    def __neg__(self):
        return type(self)(self.module, self.L, -self.table)

    def __rmul__(self, k: int):
        return type(self)(self.module, self.L, k * self.table)

    def is_zero(self):
        return not self.table.any()


class BilForm(_Table):
    """beta: V x V -> Q/Z, table[v, w] / L."""

    def __init__(self, module: FiniteModule, L: int, table, check=False):
        self.module = module
        self.L, self.table = _normalise(L, np.asarray(table).reshape(module.size, module.size))
        if check:
            self.check()

    @classmethod
    def from_function(cls, module, fn, check=True):
        vals = [[QZ.of(fn(v, w)) for w in module.elements()] for v in module.elements()]
        L = math.lcm(1, *(q.denominator for row in vals for q in row))
        tab = [[q.numerator * (L // q.denominator) for q in row] for row in vals]
        return cls(module, L, tab, check=check)

    def value(self, v, w) -> QZ:
        return QZ(int(self.table[v, w]), self.L)

    def check(self):
        """Z-bilinearity: the table must equal the bilinear extension of its generator values."""
        V = self.module
        gens = [V.index(np.eye(V.k, dtype=np.int64)[a]) for a in range(V.k)]
        G = self.table[np.ix_(gens, gens)]
        for a in range(V.k):
            for b in range(V.k):
                if (V.orders[a] * G[a, b]) % self.L or (V.orders[b] * G[a, b]) % self.L:
                    raise NotBilinear("generator values incompatible with orders")
        X = V.vectors
        ext = np.einsum("ia,ab,jb->ij", X, G, X) % self.L
        if not np.array_equal(ext, self.table):
            raise NotBilinear("table is not Z-bilinear")
        return True

    def act(self, r: int, s: int) -> "BilForm":
        """beta(r x s)(v, w) = beta(rv, sw)."""
        A = self.module.act_table
        return BilForm(self.module, self.L, self.table[np.ix_(A[r], A[s])])

    def bracket(self, r: int) -> "BilForm":
        return self.act(r, r)


class QuadMap(_Table):
    """phi: V -> Q/Z, table[v] / L."""

    def __init__(self, module: FiniteModule, L: int, table, check=False):
        self.module = module
        self.L, self.table = _normalise(L, np.asarray(table).reshape(module.size))
        if check:
            self.check()

    @classmethod
    def from_function(cls, module, fn, check=True):
        vals = [QZ.of(fn(v)) for v in module.elements()]
        L = math.lcm(1, *(q.denominator for q in vals))
        return cls(module, L, [q.numerator * (L // q.denominator) for q in vals], check=check)

    @classmethod
    def zero(cls, module):
        return cls(module, 1, np.zeros(module.size, dtype=np.int64))

    def value(self, v) -> QZ:
        return QZ(int(self.table[v]), self.L)

    def check(self):
        """Quad_0 membership: phi(0) = 0 and phi is a degree-2 map on residue vectors."""
        V = self.module
        if self.table[0] % self.L:
            raise NotQuadratic("phi(0) != 0")
        lam = _lambda_table(self)
        gens = [V.index(np.eye(V.k, dtype=np.int64)[a]) for a in range(V.k)]
        lin = self.table[gens]
        Lg = lam[np.ix_(gens, gens)]
        X = V.vectors
        val = X @ lin
        val = val + np.einsum("ia,ab,ib->i", X, np.triu(Lg, 1), X)
        val = val + (X * (X - 1) // 2) @ np.diag(Lg)
        if not np.array_equal(val % self.L, self.table % self.L):
            raise NotQuadratic("phi fails the cube identity")
        return True


def _lambda_table(phi: QuadMap) -> np.ndarray:
    A = phi.module.add_table
    t = phi.table
    return (t[A] - t[:, None] - t[None, :]) % phi.L


# -- the calculus --------------------------------------------------------

def tau(b: BilForm) -> BilForm:
    return BilForm(b.module, b.L, b.table.T.copy())


def brace(b: BilForm) -> QuadMap:
    return QuadMap(b.module, b.L, np.diagonal(b.table).copy())


def lambda_of(phi: QuadMap, check=True) -> BilForm:
    if check:
        try:
            phi.check()
        except NotQuadratic as e:
            raise NotBilinear(str(e)) from None
    return BilForm(phi.module, phi.L, _lambda_table(phi))


def qaction(phi: QuadMap, r: int) -> QuadMap:
    return QuadMap(phi.module, phi.L, phi.table[phi.module.act_table[r]])


# -- admissibility -------------------------------------------------------

@dataclass
class Admissibility:
    J: np.ndarray  # J[r] = index of r^J
    epsilon: int
    psi_tables: np.ndarray  # (|R|, |V|, |V|) at level L
    L: int
    psi_inv: dict  # table bytes (at level L) -> r


def _psi_tables(beta: BilForm):
    A = beta.module.act_table
    # beta_r(v, w) = beta(v, r w)
    return beta.table[:, A].transpose(1, 0, 2)


def admissibility(b: BilForm) -> Admissibility:
    V = b.module
    R = V.ring
    if len({row.tobytes() for row in b.table}) != V.size:
        raise Singular("v -> beta(v, .) is not injective")
    P = _psi_tables(b)
    psi_inv = {}
    for r in range(R.size):
        k = P[r].tobytes()
        if k in psi_inv:
            raise PsiNotInjective(f"beta_r not injective in r ({R.fmt(psi_inv[k])} vs {R.fmt(r)})")
        psi_inv[k] = r
    for r in range(R.size):
        if P[r].T.copy().tobytes() not in psi_inv:
            raise MNotTauClosed(f"tau(beta_{R.fmt(r)}) not in M")
    A = V.act_table
    J = np.zeros(R.size, dtype=np.int64)
    for r in range(R.size):
        # beta(r v, w) = beta(v, r^J w)
        t = b.table[A[r], :].copy().tobytes()
        if t not in psi_inv:
            raise NoSuchJ(f"no r^J for r = {R.fmt(r)}")
        J[r] = psi_inv[t]
    eps = psi_inv.get(b.table.T.copy().tobytes())
    if eps is None:
        raise NoSuchJ("no epsilon with beta(v, w) = beta(w, eps v)")
    ad = Admissibility(J=J, epsilon=int(eps), psi_tables=P, L=b.L, psi_inv=psi_inv)
    _check_involution(R, ad)
    return ad


def _check_involution(R: FiniteRing, ad: Admissibility):
    J, e = ad.J, ad.epsilon
    M = R.mul_table
    if M[J[e], e] != R.one:
        raise NoSuchJ("epsilon^J epsilon != 1")
    # anti-automorphism: (rs)^J = s^J r^J, additive
    if not np.array_equal(J[M], M[J[None, :], J[:, None]]):
        raise NoSuchJ("J is not an anti-automorphism")
    if not np.array_equal(J[R.add_table], R.add_table[J[:, None], J[None, :]]):
        raise NoSuchJ("J is not additive")
    # eps^J r^(J^2) eps = r
    lhs = M[M[J[e], J[J]], e]
    if not np.array_equal(lhs, np.arange(R.size)):
        raise NoSuchJ("eps^J r^(J^2) eps != r")


# -- qmodule closure -----------------------------------------------------

def phi_closure(generators, R: FiniteRing, cap: int | None = None):
    """Least subset of Quad_0 containing the generators closed under + and [r]."""
    cap = DEFAULT_CAPS.closure_maps if cap is None else cap
    gens = list(generators)
    if not gens:
        raise ValueError("need at least the module for an empty generator list")
    V = gens[0].module
    L = math.lcm(1, *(g.L for g in gens))
    A = V.act_table
    zero = np.zeros(V.size, dtype=np.int64)
    seen = {zero.tobytes(): zero}
    order = [zero]
    queue = [g.at_level(L) for g in gens]
    while queue:
        t = queue.pop()
        k = t.tobytes()
        if k in seen:
            continue
        seen[k] = t
        order.append(t)
        if len(order) > cap:
            raise ClosureCapExceeded(f"more than {cap} quadratic maps")
        for r in range(R.size):
            s = t[A[r]]
            if s.tobytes() not in seen:
                queue.append(s)
        for s0 in list(order):
            s = (t + s0) % L
            if s.tobytes() not in seen:
                queue.append(s)
    return [QuadMap(V, L, t) for t in order]


# -- form rings ----------------------------------------------------------

class FormRing:
    """A validated (R, V, beta, Phi) with derived J, epsilon, psi and Phi bookkeeping."""

    def __init__(self, R: FiniteRing, V: FiniteModule, beta: BilForm, Phi, name="rho", check=True):
        self.R, self.V, self.beta = R, V, beta
        self.name = name
        self.meta: dict = {}
        self.ad = admissibility(beta)
        self.J = self.ad.J
        self.epsilon = self.ad.epsilon
        L = math.lcm(beta.L, *(p.L for p in Phi))
        self.L = L
        self.Phi = [QuadMap(V, p.L, p.table) for p in Phi]
        self._phi_index = {p.key(): i for i, p in enumerate(self.Phi)}
        if len(self._phi_index) != len(self.Phi):
            raise ValueError("duplicate maps in Phi")
        if QuadMap.zero(V).key() not in self._phi_index:
            raise ValueError("Phi must contain 0")
        if check:
            for p in self.Phi:
                p.check()
        # psi at level beta.L; lambda(phi) and brace(beta_r) bookkeeping
        self.lam = np.zeros(len(self.Phi), dtype=np.int64)
        for i, p in enumerate(self.Phi):
            lt = lambda_of(p, check=False)
            r = self.psi_inverse(lt)
            if r is None:
                raise LambdaEscapesM(f"lambda(phi_{i}) not in M")
            self.lam[i] = r
        self.brace_of = np.zeros(R.size, dtype=np.int64)
        for r in range(R.size):
            i = self.phi_index(brace(self.psi(r)))
            if i is None:
                raise BraceNotInPhi(f"{{{{beta_{R.fmt(r)}}}}} not in Phi")
            self.brace_of[r] = i
        P = self.ad.psi_tables
        self.tauM = np.array([self.ad.psi_inv[P[r].T.copy().tobytes()] for r in range(R.size)], dtype=np.int64)

    def __repr__(self):
        return f"FormRing({self.name}: |R|={self.R.size}, |V|={self.V.size}, |Phi|={len(self.Phi)})"

    # psi: r -> beta_r
    def psi(self, r: int) -> BilForm:
        return BilForm(self.V, self.beta.L, self.ad.psi_tables[r])

    def psi_inverse(self, b: BilForm):
        if self.beta.L % b.L:
            return None
        return self.ad.psi_inv.get(b.at_level(self.beta.L).tobytes())

    def phi_index(self, p: QuadMap):
        return self._phi_index.get(p.key())

    @cached_property
    def phi_add(self) -> np.ndarray:
        n = len(self.Phi)
        out = np.zeros((n, n), dtype=np.int64)
        for i, a in enumerate(self.Phi):
            for j, b in enumerate(self.Phi):
                out[i, j] = self._phi_index[(a + b).key()]
        return out

    @cached_property
    def phi_act(self) -> np.ndarray:
        """phi_act[i, r] = index of Phi[i][r]."""
        out = np.zeros((len(self.Phi), self.R.size), dtype=np.int64)
        for i, p in enumerate(self.Phi):
            for r in range(self.R.size):
                j = self._phi_index.get(qaction(p, r).key())
                if j is None:
                    raise FormError("Phi is not closed under [r]")
                out[i, r] = j
        return out

    @cached_property
    def phi_tables(self) -> np.ndarray:
        """All Phi tables at level self.L, shape (|Phi|, |V|)."""
        return np.stack([p.at_level(self.L) for p in self.Phi])

    @cached_property
    def beta_table(self) -> np.ndarray:
        return self.beta.at_level(self.L)

    @cached_property
    def ker_lambda(self) -> list:
        z = self.R.zero
        return [i for i in range(len(self.Phi)) if self.lam[i] == z]

    def phi_generators(self) -> list:
        """A small additive generating set of Phi (indices)."""
        add = self.phi_add
        gens = []
        span = {0}
        for i in range(len(self.Phi)):
            if i in span:
                continue
            gens.append(i)
            frontier = list(span)
            while frontier:
                x = frontier.pop()
                for g in gens:
                    y = int(add[x, g])
                    if y not in span:
                        span.add(y)
                        frontier.append(y)
        return gens

    def unit_generators(self) -> list:
        R = self.R
        us = units(R)
        M = R.mul_table
        gens, span = [], {R.one}
        for u in us:
            if u in span:
                continue
            gens.append(u)
            frontier = list(span)
            while frontier:
                x = frontier.pop()
                for g in gens:
                    y = int(M[x, g])
                    if y not in span:
                        span.add(y)
                        frontier.append(y)
        return gens


def form_ring_validate(R, V, b: BilForm, phi_gens, name="rho", closure=True) -> FormRing:
    b.check()
    admissibility(b)
    if closure:
        Phi = phi_closure(list(phi_gens) + [QuadMap.zero(V)], R)
    else:
        Phi = list(phi_gens)
    return FormRing(R, V, b, Phi, name=name)


def regular_form_ring(R, V, b: BilForm, name="rho") -> FormRing:
    """Form ring whose Phi is the qmodule generated by {{M}} (the minimal choice)."""
    ad = admissibility(b)
    gens = [QuadMap(V, b.L, np.diagonal(ad.psi_tables[r]).copy()) for r in range(R.size)]
    return form_ring_validate(R, V, b, gens, name=name)


# -- symmetric idempotents -------------------------------------------------

def symmetric_idempotents(fr: FormRing):
    """(iota, u_iota, v_iota) with u v = iota, v u = iota^J; first witness in index order."""
    R = fr.R
    M = R.mul_table
    out = []
    idem = idempotents(R)
    for i in idem:
        if i == R.zero:
            out.append((0, 0, 0))
            continue
        if i == R.one:
            out.append((R.one, R.one, R.one))
            continue
        iJ = int(fr.J[i])
        S1 = sorted({int(M[M[i, r], iJ]) for r in range(R.size)})
        S2 = sorted({int(M[M[iJ, r], i]) for r in range(R.size)})
        found = None
        for u in S1:
            for v in S2:
                if M[u, v] == i and M[v, u] == iJ:
                    found = (i, u, v)
                    break
            if found:
                break
        if found:
            out.append(found)
    return out


# -- matrix lift -----------------------------------------------------------

def matrix_lift(fr: FormRing, m: int) -> FormRing:
    """Mat_m(fr): ring Mat_m(R) on V^m with beta^(m) and the upper-triangular Phi_m."""
    if m < 1:
        raise ValueError("m must be positive")
    R, V = fr.R, fr.V
    if m == 1:
        Rm = MatRing(1, R)
        Vm = power_module(V, 1, Rm)
        beta = BilForm(Vm, fr.beta.L, fr.beta.table)
        Phi = [QuadMap(Vm, p.L, p.table) for p in fr.Phi]
        out = FormRing(Rm, Vm, beta, Phi, name=f"Mat_1({fr.name})", check=False)
        out.meta.update(base=fr, m=1)
        return out
    n = V.size ** m
    if n > 1 << 12:
        raise CapExceeded(f"|V^{m}| = {n} too large")
    Rm = MatRing(m, R)
    Vm = power_module(V, m, Rm)
    parts = np.array([power_parts(V, m, i) for i in range(n)], dtype=np.int64)  # (n, m)
    L = fr.L
    B = fr.beta_table
    bt = np.zeros((n, n), dtype=np.int64)
    for i in range(m):
        bt += B[parts[:, i][:, None], parts[:, i][None, :]]
    beta = BilForm(Vm, L, bt)
    # Phi_m: diag phi_i in Phi, above-diagonal m_ij in M = psi(R)
    PT = fr.phi_tables
    MT = np.stack([_to_level(fr.beta.L, fr.ad.psi_tables[r], L) for r in range(R.size)])
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    Phi = []
    seen = set()
    for diag in product(range(len(fr.Phi)), repeat=m):
        base = np.zeros(n, dtype=np.int64)
        for i, p in enumerate(diag):
            base += PT[p][parts[:, i]]
        for offs in product(range(R.size), repeat=len(pairs)):
            t = base.copy()
            for (i, j), r in zip(pairs, offs):
                t += MT[r][parts[:, i], parts[:, j]]
            t %= L
            k = t.tobytes()
            if k not in seen:
                seen.add(k)
                Phi.append(QuadMap(Vm, L, t))
    zero_first = sorted(range(len(Phi)), key=lambda i: not Phi[i].is_zero())
    Phi = [Phi[i] for i in zero_first]
    out = FormRing(Rm, Vm, beta, Phi, name=f"Mat_{m}({fr.name})", check=False)
    out.meta.update(base=fr, m=m)
    return out
