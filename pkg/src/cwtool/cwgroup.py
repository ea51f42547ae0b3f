"""Clifford-Weil generators, exact matrix-group closure, scalar center, Molien series, symmetrization."""

from __future__ import annotations

import hashlib
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy

from cwtool.config import DEFAULT_CAPS
from cwtool.cyclo import (CycMatrix, CycNum, RatSeries, charpoly_from_traces, field_for,
                          sqrt_int)
from cwtool.finring import CapExceeded, NotAUnit
from cwtool.qform import FormRing, QuadMap, matrix_lift, symmetric_idempotents


class GroupError(Exception):
    pass


class PhiNotInPhi(GroupError):
    pass


class NonIntegerCoefficient(GroupError):
    pass


class NotCompatible(GroupError):
    pass


# ---------------------------------------------------------------------------
# generators

def conductor(fr: FormRing) -> int:
    """lcm of all beta/phi denominators, 8, and 4p for every prime p dividing |V|."""
    L = math.lcm(fr.beta.L, *(p.L for p in fr.Phi), 8)
    for p in sympy.primefactors(fr.V.size):
        L = math.lcm(L, 4 * p)
    return L


def gen_unit(fr: FormRing, r: int, L: int | None = None) -> CycMatrix:
    """Permutation matrix with a 1 at (v, r v)."""
    L = conductor(fr) if L is None else L
    if not fr.R.is_unit(r):
        raise NotAUnit(fr.R.fmt(r))
    n = fr.V.size
    d = field_for(L).d
    num = np.zeros((n, n, d), dtype=np.int64)
    num[np.arange(n), fr.V.act_table[r], 0] = 1
    return CycMatrix(L, num, 1, canonical=True)


def gen_quad(fr: FormRing, phi, L: int | None = None) -> CycMatrix:
    """diag(exp(2 pi i phi(v))); phi is an index into fr.Phi or a QuadMap."""
    L = conductor(fr) if L is None else L
    if isinstance(phi, QuadMap):
        i = fr.phi_index(phi)
        if i is None:
            raise PhiNotInPhi("map is not in Phi")
        phi = i
    if not 0 <= phi < len(fr.Phi):
        raise PhiNotInPhi(f"no Phi element {phi}")
    F = field_for(L)
    vals = fr.Phi[phi].at_level(L)
    n = fr.V.size
    num = np.zeros((n, n, F.d), dtype=np.int64)
    num[np.arange(n), np.arange(n)] = F.powers[vals % L]
    return CycMatrix(L, num, 1, canonical=True)


def gen_macwilliams(fr: FormRing, iota: int, u_iota: int, v_iota: int, L: int | None = None) -> CycMatrix:
    """x_v -> |iota V|^(-1/2) sum_{w in iota V} e(beta(w, v_iota v)) x_{w + (1 - iota) v}."""
    L = conductor(fr) if L is None else L
    V, R = fr.V, fr.R
    n = V.size
    A = V.act_table
    iV = sorted(set(int(x) for x in A[iota]))
    one_minus = R.sub(R.one, iota)
    s, Ls = sqrt_int(len(iV))
    if L % Ls:
        raise GroupError(f"conductor {L} cannot hold sqrt({len(iV)})")
    B = fr.beta.at_level(L)
    F = field_for(L)
    num = np.zeros((n, n, F.d), dtype=np.int64)
    for v in range(n):
        vv = int(A[v_iota, v])
        base = int(A[one_minus, v])
        for w in iV:
            num[v, V.add(w, base)] += F.powers[int(B[w, vv]) % L]
    return CycMatrix(L, num, 1).scale(s.inverse())


@dataclass
class CWGenerators:
    L: int
    units: list
    quads: list
    macwilliams: list
    labels: list = field(default_factory=list)

    @property
    def all(self) -> list:
        return self.units + self.quads + self.macwilliams


def cw_generators(fr: FormRing, all_units=False, all_phi=False, all_idempotents=True) -> CWGenerators:
    """Clifford-Weil generators: a unit generating set, additive Phi generators, one h per symmetric idempotent."""
    L = conductor(fr)
    from cwtool.finring import units as _units
    us = _units(fr.R) if all_units else fr.unit_generators()
    ps = list(range(1, len(fr.Phi))) if all_phi else fr.phi_generators()
    labels = []
    U = []
    for r in us:
        U.append(gen_unit(fr, r, L))
        labels.append(f"rho({fr.R.fmt(r)})")
    Q = []
    for i in ps:
        Q.append(gen_quad(fr, i, L))
        labels.append(f"rho(phi_{i})")
    H = []
    triples = symmetric_idempotents(fr)
    if not all_idempotents:
        triples = [t for t in triples if t[0] == fr.R.one]
    for t in triples:
        if t[0] == fr.R.zero:
            continue
        H.append(gen_macwilliams(fr, *t, L=L))
        labels.append(f"h({fr.R.fmt(t[0])})")
    return CWGenerators(L, U, Q, H, labels)


# ---------------------------------------------------------------------------
# closure

def _canon_batch(nums: np.ndarray, dens: np.ndarray):
    F = nums.shape[0]
    g = np.gcd.reduce(np.abs(nums.reshape(F, -1)), axis=1)
    g = np.gcd(g, dens)
    g[g == 0] = 1
    return nums // g[:, None, None, None], dens // g


class MatrixGroup:
    """Finite group of CycMatrix elements over a common conductor, stored densely."""

    KEY_DTYPE = np.int32

    def __init__(self, L: int, n: int, nums: np.ndarray, dens: np.ndarray, generators, name="G"):
        self.L, self.n = L, n
        self.nums = nums
        self.dens = dens
        self.generators = list(generators)
        self.name = name
        self._keys = None

    @property
    def order(self) -> int:
        return len(self.dens)

    def __len__(self):
        return self.order

    def element(self, i: int) -> CycMatrix:
        return CycMatrix(self.L, self.nums[i].astype(np.int64), int(self.dens[i]), canonical=True)

    def elements(self):
        for i in range(self.order):
            yield self.element(i)

    @staticmethod
    def _key(num, den) -> bytes:
        return np.int64(den).tobytes() + np.asarray(num, dtype=MatrixGroup.KEY_DTYPE).tobytes()

    @property
    def keys(self) -> dict:
        if self._keys is None:
            self._keys = {self._key(self.nums[i], self.dens[i]): i for i in range(self.order)}
        return self._keys

    def __contains__(self, g: CycMatrix) -> bool:
        g = g.embed(self.L) if g.L != self.L else g
        num, den = _canon_batch(g.num[None], np.array([g.den], dtype=np.int64))
        return self._key(num[0], den[0]) in self.keys

    def index(self, g: CycMatrix) -> int:
        num, den = _canon_batch(g.embed(self.L).num[None], np.array([g.den], dtype=np.int64))
        return self.keys[self._key(num[0], den[0])]

    # dump format: header (conductor, dimension, order) + canonical encodings
    def save(self, path):
        np.savez_compressed(path, header=np.array([self.L, self.n, self.order], dtype=np.int64),
                            nums=self.nums, dens=self.dens,
                            gen_nums=np.stack([g.num for g in self.generators]) if self.generators else np.zeros(0),
                            gen_dens=np.array([g.den for g in self.generators], dtype=np.int64))

    @classmethod
    def load(cls, path, name="G") -> "MatrixGroup":
        z = np.load(path)
        L, n, order = (int(x) for x in z["header"])
        gens = [CycMatrix(L, gn, int(gd), canonical=True) for gn, gd in zip(z["gen_nums"], z["gen_dens"])] \
            if len(z["gen_dens"]) else []
        G = cls(L, n, z["nums"], z["dens"], gens, name=name)
        if G.order != order:
            raise GroupError("corrupt group dump")
        return G


def close(generators, L: int | None = None, cap: int | None = None, chunk: int = 4096, name="G") -> MatrixGroup:
    """Breadth-first closure of the generators under right multiplication."""
    cap = DEFAULT_CAPS.group_order if cap is None else cap
    gens = list(generators)
    if not gens:
        raise GroupError("need at least one generator")
    L = L or math.lcm(*(g.L for g in gens))
    gens = [g.embed(L) for g in gens]
    n = gens[0].n
    d = field_for(L).d
    Ws = [g.right_mul_matrix() for g in gens]
    Wmax = [int(np.abs(W).max()) for W in Ws]
    gd = [g.den for g in gens]
    key = MatrixGroup._key
    ident = CycMatrix.identity(n, L)
    store_n = [ident.num[None].astype(MatrixGroup.KEY_DTYPE)]
    store_d = [np.array([1], dtype=np.int64)]
    seen = {key(ident.num, 1)}
    frontier_n, frontier_d = ident.num[None], np.array([1], dtype=np.int64)
    lim = np.iinfo(MatrixGroup.KEY_DTYPE).max
    while len(frontier_d):
        new_n, new_d = [], []
        for s in range(0, len(frontier_d), chunk):
            X = frontier_n[s:s + chunk].astype(np.int64)
            Xd = frontier_d[s:s + chunk]
            F = len(Xd)
            xmax = int(np.abs(X).max())
            for W, wm, den in zip(Ws, Wmax, gd):
                if xmax * wm * n * d >= 1 << 62:
                    Y = (X.reshape(F * n, n * d).astype(object) @ W.astype(object))
                    Y = Y.reshape(F, n, n, d)
                    g = [math.gcd(int(Xd[i]) * den, *[int(v) for v in Y[i].ravel()]) for i in range(F)]
                    Y = np.stack([(Y[i] // g[i]) for i in range(F)]).astype(np.int64)
                    Yd = np.array([int(Xd[i]) * den // g[i] for i in range(F)], dtype=np.int64)
                else:
                    Y = (X.reshape(F * n, n * d) @ W).reshape(F, n, n, d)
                    Y, Yd = _canon_batch(Y, Xd * den)
                if np.abs(Y).max() > lim:
                    raise OverflowError("group element numerators exceed the storage type")
                Yk = Y.astype(MatrixGroup.KEY_DTYPE)
                Ykb = Yk.tobytes()
                step = Yk[0].nbytes
                dbytes = Yd.astype(np.int64).tobytes()
                keep = []
                for i in range(F):
                    k = dbytes[8 * i:8 * i + 8] + Ykb[step * i:step * (i + 1)]
                    if k not in seen:
                        seen.add(k)
                        keep.append(i)
                if keep:
                    new_n.append(Yk[keep])
                    new_d.append(Yd[keep])
                if len(seen) > cap:
                    raise CapExceeded(f"group order exceeds cap {cap}")
        if not new_n:
            break
        frontier_n = np.concatenate(new_n)
        frontier_d = np.concatenate(new_d)
        store_n.append(frontier_n)
        store_d.append(frontier_d)
    G = MatrixGroup(L, n, np.concatenate(store_n), np.concatenate(store_d), gens, name=name)
    G._keys = None
    return G


def _cache_path(fr: FormRing, m: int, gens: CWGenerators):
    root = os.environ.get("CWTOOL_CACHE_DIR")
    if not root:
        return None
    h = hashlib.sha256()
    for g in gens.all:
        h.update(g.key())
    os.makedirs(root, exist_ok=True)
    return os.path.join(root, f"group-{h.hexdigest()[:24]}.npz")


def build_group(fr: FormRing, m: int = 1, cap: int | None = None, **gen_opts) -> MatrixGroup:
    """The genus-m Clifford-Weil group C_m(rho) = C(Mat_m(rho))."""
    frm = matrix_lift(fr, m) if m > 1 else fr
    gens = cw_generators(frm, **gen_opts)
    path = _cache_path(frm, m, gens)
    if path and os.path.exists(path):
        return MatrixGroup.load(path, name=f"C_{m}({fr.name})")
    G = close(gens.all, L=gens.L, cap=cap, name=f"C_{m}({fr.name})")
    if path:
        G.save(path)
    return G


# ---------------------------------------------------------------------------
# center

def scalar_elements(G: MatrixGroup) -> list:
    n = G.n
    diag = G.nums[:, np.arange(n), np.arange(n)]  # (N, n, d)
    off = G.nums.copy()
    off[:, np.arange(n), np.arange(n)] = 0
    ok = ~off.reshape(G.order, -1).any(axis=1) & (diag == diag[:, :1]).all(axis=(1, 2))
    return [int(i) for i in np.nonzero(ok)[0]]


def scalar_center(G: MatrixGroup) -> int:
    """Order of the cyclic group of scalars c with cI in G."""
    idx = scalar_elements(G)
    # scalars in a finite group are roots of unity; check cyclicity via element orders
    orders = []
    for i in idx:
        c = G.element(i).entry(0, 0)
        k, p = 1, c
        while not (p - 1).is_zero():
            p = p * c
            k += 1
            if k > 10 * G.L * G.n:
                raise GroupError("scalar of infinite order")
        orders.append(k)
    if idx and max(orders) != len(idx):
        raise GroupError("scalar subgroup is not cyclic")
    return len(idx)


# ---------------------------------------------------------------------------
# Molien series

def _batch_cyc_mul(P, X, S):
    """Batched matrix product over Q(zeta): (F,n,n,d) x (F,n,n,d) integer numerators."""
    d = S.shape[0]
    out = np.zeros_like(P)
    for a in range(d):
        Pa = P[..., a]
        for b in range(d):
            if not S[a, b].any():
                continue
            M = np.matmul(Pa, X[..., b])
            out += M[..., None] * S[a, b]
    return out


def trace_signatures(G: MatrixGroup, chunk: int = 2048):
    """Per element: canonical (numerators, denominators) of tr(g^k), k = 1..n."""
    n, L = G.n, G.L
    F = field_for(L)
    d = F.d
    tr_num = np.zeros((G.order, n, d), dtype=np.int64)
    tr_den = np.zeros((G.order, n), dtype=np.int64)
    idx = np.arange(n)
    for s in range(0, G.order, chunk):
        X = G.nums[s:s + chunk].astype(np.int64)
        Xd = G.dens[s:s + chunk].astype(np.int64)
        P, Pd = X, Xd
        for k in range(n):
            if k:
                P = _batch_cyc_mul(P, X, F.S)
                P, Pd = _canon_batch(P, Pd * Xd)
            t = P[:, idx, idx].sum(axis=1)
            g = np.gcd(np.gcd.reduce(np.abs(t), axis=1), Pd)
            g[g == 0] = 1
            tr_num[s:s + chunk, k] = t // g[:, None]
            tr_den[s:s + chunk, k] = Pd // g
    return tr_num, tr_den


def class_buckets(G: MatrixGroup):
    """Group elements by their power-trace signature; returns (representative signatures, multiplicities)."""
    tn, td = trace_signatures(G)
    sig = np.concatenate([tn.reshape(G.order, -1), td], axis=1)
    uniq, counts = np.unique(sig, axis=0, return_counts=True)
    n, d = G.n, field_for(G.L).d
    reps = []
    for row in uniq:
        num = row[:n * d].reshape(n, d)
        den = row[n * d:]
        reps.append([CycNum(G.L, [Fraction(int(x), int(den[k])) for x in num[k]]) for k in range(n)])
    return reps, [int(c) for c in counts]


def _zeta_int_vec(x: CycNum):
    out = []
    for q in x.c:
        if q.denominator != 1:
            raise NonIntegerCoefficient("characteristic polynomial coefficient is not an algebraic integer")
        out.append(int(q))
    return out


def molien(G: MatrixGroup, D: int, closed_form_exps=None) -> RatSeries:
    """(1/|G|) sum_g 1/det(I - t g) to degree D; coefficients are checked to be nonnegative integers."""
    L, n = G.L, G.n
    F = field_for(L)
    d = F.d
    reps, mult = class_buckets(G)
    B = len(reps)
    # det(I - t g) has algebraic-integer coefficients in Q(zeta_L), hence lies in Z[zeta_L][t]
    C = np.zeros((B, n + 1, d), dtype=object)
    for b, traces in enumerate(reps):
        cp = charpoly_from_traces(traces, L)
        for k, c in enumerate(cp):
            C[b, k] = _zeta_int_vec(c)
    S = F.S
    s = np.zeros((B, D + 1, d), dtype=object)
    s[:, 0, 0] = 1
    nz = [(a, b, [(c, int(S[a, b, c])) for c in range(d) if S[a, b, c]]) for a in range(d) for b in range(d)]
    for k in range(1, D + 1):
        acc = np.zeros((B, d), dtype=object)
        for i in range(1, min(k, n) + 1):
            x, y = C[:, i], s[:, k - i]
            for a, b, cs in nz:
                p = x[:, a] * y[:, b]
                for c, w in cs:
                    acc[:, c] += w * p
        s[:, k] = -acc
    w = np.array(mult, dtype=object)
    tot = (s * w[:, None, None]).sum(axis=0)  # (D+1, d)
    coeffs = []
    for k in range(D + 1):
        if any(tot[k, 1:]):
            raise NonIntegerCoefficient(f"degree {k}: irrational Molien coefficient")
        q = Fraction(int(tot[k, 0]), G.order)
        if q.denominator != 1 or q < 0:
            raise NonIntegerCoefficient(f"degree {k}: coefficient {q}")
        coeffs.append(q)
    out = RatSeries(coeffs)
    if closed_form_exps is not None:
        out = out.rationalize(closed_form_exps)
    return out


# ---------------------------------------------------------------------------
# symmetrization

def compress(g: CycMatrix, orbits, convention: str = "row") -> CycMatrix:
    """Orbit-compressed matrix; 'row' sums g[v, w] over w in o' (v in o), 'column' sums g[w, v'] over w in o."""
    n = g.n
    cover = sorted(x for o in orbits for x in o)
    if cover != list(range(n)):
        raise NotCompatible("orbits must partition the index set")
    A = g.num if convention == "row" else np.transpose(g.num, (1, 0, 2))
    k = len(orbits)
    out = np.zeros((k, k, A.shape[2]), dtype=np.int64)
    for i, o in enumerate(orbits):
        for j, o2 in enumerate(orbits):
            sums = A[list(o)][:, list(o2)].sum(axis=1)  # one per representative in o
            if not (sums == sums[0]).all():
                raise NotCompatible(f"orbit sums differ between representatives of orbit {i}")
            out[i, j] = sums[0]
    if convention != "row":
        out = np.transpose(out, (1, 0, 2))
    return CycMatrix(g.L, out, g.den)


def symmetrize(G: MatrixGroup, orbits, convention: str = "row", cap=None) -> MatrixGroup:
    gens = [compress(g, orbits, convention) for g in G.generators]
    return close(gens, L=G.L, cap=cap, name=f"sym({G.name})")


def orbits_under(fr: FormRing, elements, how: str = "left") -> list:
    """Orbits of V under left multiplication (or conjugation x -> r x r^-1 for the regular module)."""
    V, R = fr.V, fr.R
    parent = list(range(V.size))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for r in elements:
        for v in range(V.size):
            if how == "left":
                w = V.act(r, v)
            else:
                w = R.mul(R.mul(r, v), R.inverse(r))
            a, b = find(v), find(w)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups = {}
    for v in range(V.size):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values())
