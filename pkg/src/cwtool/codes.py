"""
Codes C <= V^N, duality/isotropy, weight enumerators, invariance and MacWilliams checks.

Polynomial identities are tested exactly by evaluation: a polynomial of total degree <= N
in k variables that vanishes on the simplex grid {a in N^k : sum a <= N} is zero, so
comparing p(gX) with p(X) on that grid (after setting x_0 = 1 in the homogeneous forms)
is a proof, not a heuristic.  All arithmetic is in Z[zeta_L] with Python integers.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from cwtool.config import DEFAULT_CAPS
from cwtool.cyclo import CycMatrix, field_for, sqrt_int
from cwtool.finring import CapExceeded, power_index
from cwtool.qform import FormRing


class CodeError(Exception):
    pass


class SizeExceeded(CodeError):
    pass


# ---------------------------------------------------------------------------
# codes

WORDS_CAP = 1 << 22  # codewords held in memory at once


def _howell_index(rows, n: int) -> int:
    """Index [Z^N : L] of L = span(rows) + n Z^N, by column-wise gcd reduction modulo n."""
    work = [list(int(x) % n for x in r) for r in rows]
    N = len(work[0]) if work else 0
    index = 1
    for j in range(N):
        live = [r for r in work if r[j] % n]
        rest = [r for r in work if not r[j] % n]
        while len(live) > 1:
            live.sort(key=lambda r: r[j])
            piv = live[0]
            nxt = [piv]
            for r in live[1:]:
                q = r[j] // piv[j]
                r2 = [(a - q * b) % n for a, b in zip(r, piv)]
                (nxt if r2[j] else rest).append(r2)
            live = nxt
        if not live:
            index *= n  # pivot is the implicit n e_j
            work = rest
            continue
        piv = live[0]
        g = math.gcd(piv[j], n)
        # replace piv by a row with entry g at column j (unimodular over Z/n up to a unit)
        if g != piv[j]:
            u = next(u for u in range(1, n) if math.gcd(u, n) == 1 and (u * piv[j]) % n == g)
            piv = [(u * a) % n for a in piv]
        index *= g
        rest.append([(n // g) * a % n for a in piv])  # what remains of n e_j after elimination
        work = [r for r in rest if any(r)]
    return index


def _field_rank(R, rows) -> int:
    M = R.mul_table
    A = R.add_table
    work = [list(r) for r in rows]
    rank = 0
    N = len(work[0]) if work else 0
    for j in range(N):
        piv = next((i for i in range(rank, len(work)) if work[i][j] != R.zero), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = R.inverse(work[rank][j])
        work[rank] = [int(M[inv, x]) for x in work[rank]]
        for i in range(len(work)):
            if i != rank and work[i][j] != R.zero:
                f = R.sub(R.zero, work[i][j])
                work[i] = [int(A[x, M[f, y]]) for x, y in zip(work[i], work[rank])]
        rank += 1
    return rank


def code_size_fast(C) -> int | None:
    """Exact |C| for regular-module codes over Z/n or a finite field; None when not applicable."""
    R = C.fr.R
    if not C.fr.V.meta.get("regular"):
        return None
    kind = R.meta.get("kind")
    if kind == "Zn":
        n = R.meta["n"]
        return n ** C.length // _howell_index(C.rows, n)
    if kind == "GF":
        return R.size ** _field_rank(R, C.rows)
    return None


class Code:
    """Left R-span of the rows of a k x N matrix over V (entries are V indices)."""

    def __init__(self, fr: FormRing, rows, name: str = "C"):
        self.fr = fr
        self.name = name
        self.rows = np.array([[self._elem(x) for x in r] for r in rows], dtype=np.int64)
        if self.rows.ndim != 2:
            raise CodeError("rows must form a rectangular matrix")
        self._words = None
        self._size = None

    def _elem(self, x) -> int:
        if isinstance(x, (int, np.integer)):
            if not 0 <= int(x) < self.fr.V.size:
                raise CodeError(f"element index {x} out of range")
            return int(x)
        return self.fr.R.parse(x)

    @property
    def length(self) -> int:
        return self.rows.shape[1]

    @property
    def k(self) -> int:
        return self.rows.shape[0]

    def _additive_generators(self):
        """{r g_j}: r over additive generators of R is enough for the R-span."""
        R, V = self.fr.R, self.fr.V
        gens = []
        ring_gens = [R.index(np.eye(R.k, dtype=np.int64)[a]) for a in range(R.k)]
        for g in self.rows:
            for r in ring_gens:
                gens.append(V.act_table[r][g])
        return gens

    def codewords(self, cap: int | None = None) -> np.ndarray:
        """All codewords, shape (|C|, N), sorted; exact additive closure."""
        if self._words is not None:
            return self._words
        cap = WORDS_CAP if cap is None else cap
        V = self.fr.V
        N = self.length
        fast = code_size_fast(self)
        if fast is not None and fast > cap:
            raise CapExceeded(f"|C| = {fast} exceeds the in-memory cap {cap}; use stream_words")
        if V.size ** N >= 1 << 62:
            raise CapExceeded("word encoding exceeds 64 bits")
        weights = V.size ** np.arange(N - 1, -1, -1, dtype=np.int64)
        words = np.zeros((1, N), dtype=np.int64)
        A = V.add_table
        for g in self._additive_generators():
            if not g.any():
                continue
            # words + j g for j = 0 .. ord(g) - 1
            layers = [words]
            mult = g.copy()
            while mult.any():
                layers.append(A[words, mult[None, :]])
                mult = A[mult, g]
            allw = np.concatenate(layers)
            _, first = np.unique(allw @ weights, return_index=True)
            words = allw[first]
            if len(words) > cap:
                raise CapExceeded(f"|C| exceeds {cap}")
        self._words = words
        return words

    @property
    def size(self) -> int:
        if self._size is None:
            fast = code_size_fast(self)
            self._size = fast if fast is not None else len(self.codewords())
        return self._size

    def stream_words(self, chunk: int = 1 << 16):
        """x G for all x in R^k in blocks; every codeword appears mu = |R|^k / |C| times."""
        R, V = self.fr.R, self.fr.V
        total = R.size ** self.k
        if total > DEFAULT_CAPS.enumeration:
            raise CapExceeded(f"|R|^k = {total} exceeds enumeration cap")
        A = V.add_table
        acts = [V.act_table[:, g] for g in self.rows]  # (|R|, N) per row
        for s in range(0, total, chunk):
            idx = np.arange(s, min(total, s + chunk), dtype=np.int64)
            w = np.zeros((len(idx), self.length), dtype=np.int64)
            for j in range(self.k - 1, -1, -1):
                idx, digit = np.divmod(idx, R.size)
                w = A[w, acts[j][digit]]
            yield w

    def enumerate(self):
        """Stream x G over x in R^k; yields (codeword, multiplicity mu)."""
        R, V = self.fr.R, self.fr.V
        total = R.size ** self.k
        if total > DEFAULT_CAPS.enumeration:
            raise CapExceeded(f"|R|^k = {total} exceeds enumeration cap")
        mu = total // self.size
        A = V.add_table
        for xs in itertools.product(range(R.size), repeat=self.k):
            w = np.zeros(self.length, dtype=np.int64)
            for r, g in zip(xs, self.rows):
                w = A[w, V.act_table[r][g]]
            yield w, mu

    def __repr__(self):
        return f"Code({self.name}, N={self.length}, k={self.k})"


def dual_and_selfdual_check(C: Code) -> dict:
    fr = C.fr
    B = fr.beta_table
    A = fr.V.act_table
    so = True
    for gi in C.rows:
        for gj in C.rows:
            for t in range(fr.R.size):
                if B[gi, A[t][gj]].sum() % fr.L:
                    so = False
                    break
    sd = so and C.size ** 2 == fr.V.size ** C.length
    return {"self_orthogonal": so, "self_dual": sd}


def isotropy_check(C: Code, exhaustive: bool = False) -> bool:
    fr = C.fr
    T = fr.phi_tables
    if not exhaustive and dual_and_selfdual_check(C)["self_orthogonal"]:
        return not (T[:, C.rows].sum(axis=2) % fr.L).any()
    W = C.codewords()
    return not (T[:, W].sum(axis=2) % fr.L).any()


def check_type(C: Code, fr: FormRing | None = None) -> bool:
    if fr is not None and fr is not C.fr:
        C = Code(fr, C.rows, C.name)
    return dual_and_selfdual_check(C)["self_dual"] and isotropy_check(C)


def dual_code_words(C: Code, cap: int | None = None) -> np.ndarray:
    """C-perp by exhaustive scan of V^N."""
    cap = DEFAULT_CAPS.dual_scan if cap is None else cap
    fr = C.fr
    V = fr.V
    N = C.length
    if V.size ** N > cap:
        raise CapExceeded(f"|V|^N = {V.size ** N} exceeds dual-scan cap {cap}")
    allw = np.array(list(itertools.product(range(V.size), repeat=N)), dtype=np.int64).reshape(-1, N)
    B = fr.beta_table
    ok = np.ones(len(allw), dtype=bool)
    for c in C.codewords():
        ok &= (B[allw, c[None, :]].sum(axis=1) % fr.L) == 0
    return allw[ok]


# ---------------------------------------------------------------------------
# polynomials

@dataclass
class SparsePoly:
    """Polynomial in n variables: exponent tuple -> integer coefficient."""

    n: int
    terms: dict = field(default_factory=dict)

    @classmethod
    def from_counts(cls, n: int, counts: np.ndarray, mult: int = 1) -> "SparsePoly":
        ex, c = np.unique(counts, axis=0, return_counts=True)
        return cls(n, {tuple(int(x) for x in e): int(k) * mult for e, k in zip(ex, c)})

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def coefficient_sum(self) -> int:
        return sum(self.terms.values())

    def coefficient(self, exps) -> int:
        return self.terms.get(tuple(exps), 0)

    def __eq__(self, other):
        if not isinstance(other, SparsePoly):
            return NotImplemented
        a = {e: c for e, c in self.terms.items() if c}
        b = {e: c for e, c in other.terms.items() if c}
        return self.n == other.n and a == b

    def scale(self, k: int) -> "SparsePoly":
        return SparsePoly(self.n, {e: c * k for e, c in self.terms.items()})

    def substitute(self, orbits) -> "SparsePoly":
        """x_v -> y_{orbit(v)}."""
        where = {}
        for i, o in enumerate(orbits):
            for v in o:
                where[v] = i
        out = {}
        for e, c in self.terms.items():
            f = [0] * len(orbits)
            for v, k in enumerate(e):
                f[where[v]] += k
            f = tuple(f)
            out[f] = out.get(f, 0) + c
        return SparsePoly(len(orbits), out)

    def to_json(self):
        return {"nvars": self.n, "terms": [{"exponents": list(e), "coefficient": c}
                                           for e, c in sorted(self.terms.items())]}

    def to_sympy(self, symbols=None):
        import sympy
        xs = symbols or sympy.symbols(f"x0:{self.n}")
        return sympy.Add(*[c * sympy.Mul(*[x ** k for x, k in zip(xs, e)]) for e, c in self.terms.items()])


def cwe(C: Code) -> SparsePoly:
    n = C.fr.V.size
    if C.size > WORDS_CAP:
        mu = C.fr.R.size ** C.k // C.size
        acc = {}
        for W in C.stream_words():
            counts = np.zeros((len(W), n), dtype=np.int64)
            np.add.at(counts, (np.arange(len(W))[:, None], W), 1)
            ex, c = np.unique(counts, axis=0, return_counts=True)
            for e, k in zip(ex, c):
                t = tuple(int(x) for x in e)
                acc[t] = acc.get(t, 0) + int(k)
        return SparsePoly(n, {e: c // mu for e, c in acc.items()})
    W = C.codewords()
    counts = np.zeros((len(W), n), dtype=np.int64)
    np.add.at(counts, (np.arange(len(W))[:, None], W), 1)
    return SparsePoly.from_counts(n, counts)


def cwe_m(C: Code, m: int) -> SparsePoly:
    """Genus-m enumerator: cwe of C(m) <= (V^m)^N with slot 1 most significant."""
    if m == 1:
        return cwe(C)
    V = C.fr.V
    W = C.codewords()
    if len(W) ** m > DEFAULT_CAPS.enumeration:
        raise CapExceeded(f"|C|^{m} exceeds enumeration cap")
    n = V.size ** m
    acc = {}
    # combine rows slot by slot: index = ((c1 * |V| + c2) * |V| + ...)
    idx = W
    for _ in range(m - 1):
        idx = (idx[:, None, :] * V.size + W[None, :, :]).reshape(-1, C.length)
    for s in range(0, len(idx), 1 << 16):
        block = idx[s:s + (1 << 16)]
        counts = np.zeros((len(block), n), dtype=np.int64)
        np.add.at(counts, (np.arange(len(block))[:, None], block), 1)
        ex, c = np.unique(counts, axis=0, return_counts=True)
        for e, k in zip(ex, c):
            t = tuple(int(x) for x in e)
            acc[t] = acc.get(t, 0) + int(k)
    return SparsePoly(n, acc)


def swe(C: Code, orbits) -> SparsePoly:
    return cwe(C).substitute(orbits)


# ---------------------------------------------------------------------------
# exact evaluation in Z[zeta]

class _ZZeta:
    """Batched arithmetic on arrays (P, d) of Python integers representing Z[zeta_L]."""

    def __init__(self, L: int):
        self.F = field_for(L)
        self.d = self.F.d
        S = self.F.S
        self.nz = [(a, b, [(c, int(S[a, b, c])) for c in range(self.d) if S[a, b, c]])
                   for a in range(self.d) for b in range(self.d)]

    def mul(self, x, y):
        out = np.zeros(np.broadcast_shapes(x.shape, y.shape), dtype=object)
        for a, b, cs in self.nz:
            p = x[..., a] * y[..., b]
            for c, w in cs:
                out[..., c] += w * p
        return out

    def lift(self, ints):
        out = np.zeros(ints.shape + (self.d,), dtype=object)
        out[..., 0] = ints.astype(object)
        return out


def evaluate(p: SparsePoly, X, Z: _ZZeta):
    """p at points X: object array (P, n, d) over Z[zeta]; returns (P, d)."""
    P = X.shape[0]
    N = p.degree
    pw = [[None] * (N + 1) for _ in range(p.n)]
    one = np.zeros((P, Z.d), dtype=object)
    one[:, 0] = 1
    for v in range(p.n):
        pw[v][0] = one
        for k in range(1, N + 1):
            pw[v][k] = Z.mul(pw[v][k - 1], X[:, v])
    out = np.zeros((P, Z.d), dtype=object)
    for e, c in p.terms.items():
        t = None
        for v, k in enumerate(e):
            if k:
                t = pw[v][k] if t is None else Z.mul(t, pw[v][k])
        out += c * (one if t is None else t)
    return out


def _apply(g: CycMatrix, X, Z: _ZZeta):
    """den * (g X) for points X (P, n, d): row convention (gX)_v = sum_w g[v, w] x_w."""
    G = g.num.astype(object)  # (n, n, d)
    P, n, d = X.shape
    out = np.zeros((P, n, d), dtype=object)
    for v in range(n):
        acc = np.zeros((P, d), dtype=object)
        for w in range(n):
            if G[v, w].any():
                acc = acc + Z.mul(np.broadcast_to(G[v, w], (P, d)), X[:, w])
        out[:, v] = acc
    return out


def simplex_grid(k: int, N: int):
    """All a in N^k with sum(a) <= N."""
    if k == 0:
        yield ()
        return
    for a in range(N + 1):
        for rest in simplex_grid(k - 1, N - a):
            yield (a,) + rest


def identity_points(n: int, N: int, cap: int | None = None) -> np.ndarray:
    """Points (1, a) with a on the simplex grid; a unisolvent set for homogeneous degree-N forms."""
    cap = DEFAULT_CAPS.symbolic_points if cap is None else cap
    count = math.comb(N + n - 1, n - 1)
    if count > cap:
        raise SizeExceeded(f"{count} grid points exceed the symbolic cap {cap}")
    pts = np.array([(1,) + a for a in simplex_grid(n - 1, N)], dtype=np.int64).reshape(-1, n)
    return pts


def sampled_points(n: int, k: int = 40, seed: int = 20240101, hi: int = 1 << 16) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.integers(1, hi + 1, size=(k, n), dtype=np.int64)


def _transform_equal(p: SparsePoly, q: SparsePoly, g: CycMatrix, pts: np.ndarray, scale=Fraction(1)) -> bool:
    """Check scale * q(g X) == p(X) on the given integer points (exact)."""
    Z = _ZZeta(g.L)
    X = Z.lift(pts)
    N = max(p.degree, q.degree)
    lhs = evaluate(q, _apply(g, X, Z), Z)  # = den^N q(gX) for homogeneous q of degree N
    rhs = evaluate(p, X, Z)
    # scale * lhs / den^N == rhs
    s = Fraction(scale) / Fraction(g.den) ** N
    return bool(np.all(lhs * s.numerator == rhs * s.denominator))


def invariance_check(p: SparsePoly, g: CycMatrix, mode: str = "symbolic", k: int = 40, seed: int = 20240101) -> bool:
    """p(gX) == p(X): exact on a unisolvent grid ('symbolic') or at k seeded points ('sampled')."""
    if not p.is_homogeneous():
        raise CodeError("invariance check expects a homogeneous polynomial")
    if mode == "symbolic":
        pts = identity_points(p.n, p.degree)
    elif mode == "sampled":
        pts = sampled_points(p.n, k, seed)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return _transform_equal(p, p, g, pts)


def expand_transform(p: SparsePoly, g: CycMatrix):
    """p(gX) - p(X) expanded with sympy over Q[z]/Phi_L(z) (independent oracle for small cases)."""
    import sympy
    xs = sympy.symbols(f"x0:{p.n}")
    z = sympy.Symbol("z")
    ent = [[sum(sympy.Rational(int(c), g.den) * z ** a for a, c in enumerate(g.num[i, j])) for j in range(g.n)]
           for i in range(g.n)]
    gx = [sum(ent[v][w] * xs[w] for w in range(g.n)) for v in range(g.n)]
    diff = sympy.expand(p.to_sympy(xs).subs(dict(zip(xs, gx)), simultaneous=True) - p.to_sympy(xs))
    cyc = sympy.cyclotomic_poly(g.L, z)
    P = sympy.Poly(diff, *xs)
    return {m: sympy.rem(sympy.expand(c), cyc, z) for m, c in P.terms() if sympy.rem(sympy.expand(c), cyc, z) != 0}


def macwilliams_matrix(fr: FormRing) -> CycMatrix:
    """Unnormalised transform H[v, w] = e(beta(w, v))."""
    L = fr.L
    F = field_for(L)
    B = fr.beta.at_level(L)
    num = F.powers[B.T % L]
    return CycMatrix(L, num, 1)


def macwilliams_verify(C: Code, mode: str = "symbolic") -> bool:
    """|C| cwe(C-perp)(X) == cwe(C)(H X) with H[v, w] = e(beta(w, v))."""
    perp = dual_code_words(C)
    n = C.fr.V.size
    counts = np.stack([np.bincount(w, minlength=n) for w in perp])
    q = SparsePoly.from_counts(n, counts)
    p = cwe(C)
    H = macwilliams_matrix(C.fr)
    N = C.length
    pts = identity_points(n, N) if mode == "symbolic" else sampled_points(n)
    return _transform_equal(q.scale(C.size), p, H, pts)


# ---------------------------------------------------------------------------
# generalized doubly-even codes over F_{2^f}

def even_code_check(C: Code) -> bool:
    """sum c_i = 0 and sum_{i<j} c_i c_j = 0 for all codewords (over F_{2^f})."""
    R = C.fr.R
    if R.meta.get("kind") != "GF" or R.meta.get("p") != 2:
        raise CodeError("even_code_check needs a field of characteristic 2")
    W = C.codewords()
    A = R.add_table
    M = R.mul_table
    s = np.zeros(len(W), dtype=np.int64)
    e2 = np.zeros(len(W), dtype=np.int64)
    for i in range(C.length):
        e2 = A[e2, M[s, W[:, i]]]
        s = A[s, W[:, i]]
    return bool((s == R.zero).all() and (e2 == R.zero).all())


def code_from_json(spec: dict, fr: FormRing | None = None) -> Code:
    from cwtool.presets import load_formring
    fr = fr or load_formring(spec["formring"])
    C = Code(fr, spec["rows"], name=spec.get("name", "C"))
    if "length" in spec and spec["length"] != C.length:
        raise CodeError("declared length does not match rows")
    return C
