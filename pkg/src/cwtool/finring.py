"""
Finite rings and finite left modules given by an additive presentation
(a list of cyclic orders) and a product table on additive generators.

Elements are residue vectors; everywhere downstream they are addressed by
their index in the lexicographic order of residue vectors (first coordinate
most significant).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product

import numpy as np

from cwtool.config import DEFAULT_CAPS


class RingError(Exception):
    pass


class NotIrreducible(RingError):
    pass


class AxiomViolation(RingError):
    pass


class CapExceeded(RingError):
    pass


class NotAUnit(RingError):
    pass


# ---------------------------------------------------------------------------
# Q/Z scalars

@dataclass(frozen=True, order=True)
class QZ:
    """Element of Q/Z, kept as a reduced fraction in [0, 1)."""

    numerator: int
    denominator: int = 1

    def __post_init__(self):
        if self.denominator <= 0:
            raise ValueError("denominator must be positive")
        f = Fraction(self.numerator, self.denominator)
        f -= math.floor(f)
        object.__setattr__(self, "numerator", f.numerator)
        object.__setattr__(self, "denominator", f.denominator)

    @classmethod
    def of(cls, x) -> "QZ":
        if isinstance(x, QZ):
            return x
        f = Fraction(x)
        return cls(f.numerator, f.denominator)

    def __add__(self, other):
        other = QZ.of(other)
        return QZ.of(Fraction(self.numerator, self.denominator)
                      + Fraction(other.numerator, other.denominator))

    def __sub__(self, other):
        other = QZ.of(other)
        return QZ.of(Fraction(self.numerator, self.denominator)
                     - Fraction(other.numerator, other.denominator))

    def __neg__(self):
        return QZ(-self.numerator, self.denominator)

    def __mul__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        return QZ(self.numerator * k, self.denominator)

    __rmul__ = __mul__

    def __str__(self):
        return f"{self.numerator}/{self.denominator}"


def qz_arith(a, b, op: str) -> QZ:
    a = QZ.of(a)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "scale":
        return a * int(b)
    raise ValueError(f"unknown op {op!r}")


# ---------------------------------------------------------------------------
# helpers

def _mixed_radix(orders):
    orders = tuple(int(d) for d in orders)
    strides = []
    s = 1
    for d in reversed(orders):
        strides.append(s)
        s *= d
    return orders, np.array(strides[::-1], dtype=np.int64), s


def _all_vectors(orders):
    if not orders:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.meshgrid(*[np.arange(d) for d in orders], indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)


class _Additive:
    """Shared additive-group machinery for rings and modules."""

    orders: tuple

    def _init_additive(self, orders):
        self.orders, self._strides, self.size = _mixed_radix(orders)
        self._mods = np.array(self.orders, dtype=np.int64)

    @property
    def k(self) -> int:
        return len(self.orders)

    @cached_property
    def vectors(self) -> np.ndarray:
        return _all_vectors(self.orders)

    def index(self, vec) -> int:
        vec = np.asarray(vec, dtype=np.int64) % self._mods
        return int(vec @ self._strides)

    def indices(self, vecs: np.ndarray) -> np.ndarray:
        vecs = np.asarray(vecs, dtype=np.int64) % self._mods
        return vecs @ self._strides

    def vector(self, i: int) -> tuple:
        return tuple(int(x) for x in self.vectors[i])

    @cached_property
    def add_table(self) -> np.ndarray:
        V = self.vectors
        S = (V[:, None, :] + V[None, :, :]) % self._mods
        return (S @ self._strides).astype(np.int64)

    @cached_property
    def neg(self) -> np.ndarray:
        return self.indices(-self.vectors)

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[a, self.neg[b]])

    def zmul(self, n: int, a: int) -> int:
        return self.index(n * self.vectors[a])

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*self.orders) if self.orders else 1


# ---------------------------------------------------------------------------
# rings

class FiniteRing(_Additive):
    """
    Finite ring with additive group Z/d1 x ... x Z/dk and multiplication
    extended Z-bilinearly from ``table[a, b] = g_a * g_b`` (residue vectors).
    """

    TABLE_CAP = 2048

    def __init__(self, orders, table, one, name="R", literal=None, check=True):
        self._init_additive(orders)
        self.table = np.asarray(table, dtype=np.int64).reshape(self.k, self.k, self.k) % self._mods
        self.one_vec = tuple(int(x) % d for x, d in zip(one, self.orders))
        self.name = name
        self._literal = literal
        self.meta: dict = {}
        if check:
            self._check_axioms()

    def __repr__(self):
        return f"FiniteRing({self.name}, |R|={self.size})"

    # -- axioms (trilinear, so generator triples are exhaustive) --
    def _check_axioms(self):
        k, T, mods = self.k, self.table, self._mods
        for a in range(k):
            for b in range(k):
                if np.any((self.orders[a] * T[a, b]) % mods) or np.any((self.orders[b] * T[a, b]) % mods):
                    raise AxiomViolation(f"product table not compatible with orders at ({a},{b})")
        # (g_a g_b) g_c == g_a (g_b g_c)
        left = np.einsum("abx,xcy->abcy", T, T) % mods
        right = np.einsum("bcx,axy->abcy", T, T) % mods
        if not np.array_equal(left, right):
            raise AxiomViolation(f"{self.name}: multiplication not associative")
        one = np.array(self.one_vec, dtype=np.int64)
        eye = np.eye(k, dtype=np.int64)
        if not np.array_equal(np.einsum("x,xby->by", one, T) % mods, eye % mods):
            raise AxiomViolation(f"{self.name}: one is not a left identity")
        if not np.array_equal(np.einsum("x,bxy->by", one, T) % mods, eye % mods):
            raise AxiomViolation(f"{self.name}: one is not a right identity")

    # -- elements --
    @property
    def zero(self) -> int:
        return 0

    @cached_property
    def one(self) -> int:
        return self.index(self.one_vec)

    def elements(self) -> range:
        return range(self.size)

    def _mul_vecs(self, X, Y):
        # X, Y: (..., k)
        return np.einsum("...a,...b,abc->...c", X, Y, self.table) % self._mods

    @cached_property
    def _left_mats(self):
        # x * y = y @ _left_mats[x]  (as residue vectors), one matrix per element
        return np.einsum("ia,abc->ibc", self.vectors, self.table)

    @cached_property
    def mul_table(self) -> np.ndarray:
        if self.size > self.TABLE_CAP:
            raise CapExceeded(f"|R| = {self.size} too large for a full product table")
        P = np.einsum("ibc,jb->ijc", self._left_mats, self.vectors) % self._mods
        return (P @ self._strides).astype(np.int64)

    def mul(self, a: int, b: int) -> int:
        if self.size <= self.TABLE_CAP:
            return int(self.mul_table[a, b])
        return self.index(self._mul_vecs(self.vectors[a], self.vectors[b]))

    def left_mul_row(self, a: int) -> np.ndarray:
        """Indices of a*x for all x."""
        if self.size <= self.TABLE_CAP:
            return self.mul_table[a]
        P = (self.vectors @ self._left_mats[a]) % self._mods
        return P @ self._strides

    def right_mul_row(self, b: int) -> np.ndarray:
        """Indices of x*b for all x."""
        if self.size <= self.TABLE_CAP:
            return self.mul_table[:, b]
        P = np.einsum("ia,abc,b->ic", self.vectors, self.table, self.vectors[b]) % self._mods
        return P @ self._strides

    def pow(self, a: int, e: int) -> int:
        r = self.one
        for _ in range(e):
            r = self.mul(r, a)
        return r

    # -- literals --
    def parse(self, lit) -> int:
        if self._literal is not None:
            return self._literal.parse(lit)
        if isinstance(lit, int):
            return self.index(self.zmul_vec(lit))
        return self.index([int(x) for x in lit])

    def fmt(self, i: int) -> str:
        if self._literal is not None:
            return self._literal.fmt(i)
        return ",".join(str(x) for x in self.vector(i))

    def zmul_vec(self, n):
        return (n * np.array(self.one_vec, dtype=np.int64)) % self._mods

    def from_int(self, n: int) -> int:
        return self.index(self.zmul_vec(n))

    @cached_property
    def characteristic(self) -> int:
        one = np.array(self.one_vec, dtype=np.int64)
        n = 1
        while np.any((n * one) % self._mods):
            n += 1
        return n

    # -- unit group --
    @cached_property
    def _inverse_table(self) -> dict:
        if self.size > DEFAULT_CAPS.brute_force:
            raise CapExceeded(f"|R| = {self.size} exceeds brute-force cap")
        M = self.mul_table
        one = self.one
        inv = {}
        for a in range(self.size):
            cands = np.nonzero(M[a] == one)[0]
            for b in cands:
                if M[b, a] == one:
                    inv[a] = int(b)
                    break
        return inv

    def inverse(self, a: int) -> int:
        try:
            return self._inverse_table[a]
        except KeyError:
            raise NotAUnit(f"{self.fmt(a)} is not a unit in {self.name}") from None

    def is_unit(self, a: int) -> bool:
        return a in self._inverse_table


class _PolyLiteral:
    """Literals like ``3``, ``w^2+w+1`` or ``1+wu`` for the polynomial-type rings."""

    _term = re.compile(r"^(\d*)(w(?:\^(\d+))?)?(u)?$")

    def __init__(self, ring, p, deg, has_u):
        self.ring, self.p, self.deg, self.has_u = ring, p, deg, has_u

    def _coeffs(self, i):
        vec = self.ring.vector(i)
        if self.has_u:
            a, b = vec[: self.deg], vec[self.deg:]
        else:
            a, b = vec, ()
        # residue vectors list the highest power of w first
        return list(reversed(a)), list(reversed(b))

    def parse(self, lit) -> int:
        if isinstance(lit, int):
            lit = str(lit)
        s = lit.replace(" ", "").replace("*", "")
        if s in ("", "0"):
            return 0
        a = [0] * self.deg
        b = [0] * self.deg
        for term in s.split("+"):
            m = self._term.match(term)
            if not m or term == "":
                raise ValueError(f"bad literal {lit!r}")
            coef = int(m.group(1)) if m.group(1) else 1
            if m.group(2):
                e = int(m.group(3)) if m.group(3) else 1
            else:
                e = 0
            if not m.group(1) and not m.group(2) and not m.group(4):
                raise ValueError(f"bad literal {lit!r}")
            if m.group(4) and not self.has_u:
                raise ValueError(f"ring has no u: {lit!r}")
            target = b if m.group(4) else a
            # w^e with e >= deg: reduce via field multiplication below
            if e >= self.deg:
                target_idx = self._reduce_power(e)
                vals = self._coeffs(target_idx)[0]
                for j, v in enumerate(vals):
                    target[j] = (target[j] + coef * v) % self.p
            else:
                target[e] = (target[e] + coef) % self.p
        vec = list(reversed(a)) + (list(reversed(b)) if self.has_u else [])
        return self.ring.index(vec)

    def _reduce_power(self, e):
        w = self.parse("w")
        r = self.ring.one
        for _ in range(e):
            r = self.ring.mul(r, w)
        return r

    def fmt(self, i: int) -> str:
        a, b = self._coeffs(i)
        terms = []

        def mono(c, e, u):
            w = "" if e == 0 else ("w" if e == 1 else f"w^{e}")
            body = w + ("u" if u else "")
            if c == 1 and body:
                return body
            return f"{c}{body}"

        for e, c in enumerate(a):
            if c:
                terms.append(mono(c, e, False))
        for e, c in enumerate(b):
            if c:
                terms.append(mono(c, e, True))
        return "+".join(terms) if terms else "0"


class _ZnLiteral:
    def __init__(self, n):
        self.n = n

    def parse(self, lit) -> int:
        return int(lit) % self.n

    def fmt(self, i):
        return str(i)


# ---------------------------------------------------------------------------
# constructors

def Zn(n: int) -> FiniteRing:
    if n < 1:
        raise ValueError("n must be positive")
    R = FiniteRing([n], [[[1]]], [1], name=f"Z/{n}Z", literal=_ZnLiteral(n))
    R.meta.update(kind="Zn", n=n)
    return R


def _poly_irreducible_mod_p(coeffs, p) -> bool:
    """coeffs low->high, monic. Brute-force root/factor test by trial division."""
    deg = len(coeffs) - 1
    if deg <= 0:
        return False
    if deg == 1:
        return True

    def polymod(a, b):
        a = a[:]
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b):
            c = (a[-1] * inv) % p
            s = len(a) - len(b)
            for i, bi in enumerate(b):
                a[s + i] = (a[s + i] - c * bi) % p
            while a and a[-1] == 0:
                a.pop()
        return a

    f = [c % p for c in coeffs]
    for d in range(1, deg // 2 + 1):
        for tail in product(range(p), repeat=d):
            g = list(tail) + [1]
            if not polymod(f, g):
                return False
    return True


def GF(p: int, f: int, poly) -> FiniteRing:
    """
    F_{p^f} = F_p[w]/(poly), poly given low->high and monic of degree f.
    Residue vectors list coefficients of w^{f-1}, ..., w, 1, so that for F_4 with
    x^2+x+1 the element order is 0, 1, w, w^2.
    """
    poly = [int(c) % p for c in poly]
    if len(poly) != f + 1 or poly[-1] != 1:
        raise ValueError("poly must be monic of degree f (coefficients low->high)")
    if not _poly_irreducible_mod_p(poly, p):
        raise NotIrreducible(f"{poly} is reducible mod {p}")
    # power -> residue vector (high first)
    powers = []
    cur = [1] + [0] * (f - 1)  # low->high
    for e in range(2 * f - 1):
        powers.append(cur[:])
        # multiply by w
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(f):
                cur[i] = (cur[i] - top * poly[i]) % p

    def vec(low_high):
        return list(reversed(low_high))

    # generator index j corresponds to w^{f-1-j}
    table = np.zeros((f, f, f), dtype=np.int64)
    for a in range(f):
        for b in range(f):
            table[a, b] = vec(powers[(f - 1 - a) + (f - 1 - b)])
    R = FiniteRing([p] * f, table, vec([1] + [0] * (f - 1)), name=f"F_{p**f}")
    R._literal = _PolyLiteral(R, p, f, False)
    R.meta.update(kind="GF", p=p, f=f, poly=poly)
    return R


def MatRing(m: int, base: FiniteRing) -> FiniteRing:
    """m x m matrices over base; generator (i, j, a) = E_ij * g_a, row-major."""
    k = base.k
    K = m * m * k

    def gi(i, j, a):
        return (i * m + j) * k + a

    table = np.zeros((K, K, K), dtype=np.int64)
    for i, j, a in product(range(m), range(m), range(k)):
        for l, b in product(range(m), range(k)):
            # (E_ij g_a)(E_jl g_b) = E_il (g_a g_b)
            src = gi(i, j, a)
            dst = gi(j, l, b)
            for c in range(k):
                table[src, dst, gi(i, l, c)] = base.table[a, b, c]
    one = np.zeros(K, dtype=np.int64)
    for i in range(m):
        one[gi(i, i, 0):gi(i, i, 0) + k] = base.one_vec
    R = FiniteRing(list(base.orders) * (m * m), table, one, name=f"Mat_{m}({base.name})")
    R._literal = _MatLiteral(R, base, m)
    R.meta.update(kind="MatRing", m=m, base=base)
    return R


class _MatLiteral:
    def __init__(self, ring, base, m):
        self.ring, self.base, self.m = ring, base, m

    def parse(self, lit) -> int:
        if isinstance(lit, str):
            import json
            lit = json.loads(lit)
        vec = []
        for row in lit:
            for x in row:
                vec.extend(self.base.vector(self.base.parse(x)))
        return self.ring.index(vec)

    def fmt(self, i):
        return str(self.entries(i))

    def entries(self, i):
        v = self.ring.vector(i)
        k, m = self.base.k, self.m
        out = []
        for r in range(m):
            row = []
            for c in range(m):
                row.append(self.base.fmt(self.base.index(v[(r * m + c) * k:(r * m + c + 1) * k])))
            out.append(row)
        return out


def mat_entries(R: FiniteRing, i: int):
    """Entry indices (over the base ring) of a MatRing element, as an m x m list."""
    base, m = R.meta["base"], R.meta["m"]
    v = R.vector(i)
    k = base.k
    return [[base.index(v[(r * m + c) * k:(r * m + c + 1) * k]) for c in range(m)] for r in range(m)]


def mat_from_entries(R: FiniteRing, rows) -> int:
    base = R.meta["base"]
    vec = []
    for row in rows:
        for x in row:
            vec.extend(base.vector(x))
    return R.index(vec)


_DEFAULT_QUAD_POLYS = {2: [1, 1, 1], 3: [1, 0, 1], 5: [3, 0, 1], 7: [1, 0, 1]}


def QuaternionicU(q: int, poly=None) -> FiniteRing:
    """
    F_{q^2} + F_{q^2} u with u^2 = 0 and u a = a^q u (q prime).
    Residue vector: (a-part, u-part), each high power of w first.
    """
    p = q
    if any(q % d == 0 for d in range(2, int(q ** 0.5) + 1)):
        raise ValueError("QuaternionicU implemented for prime q")
    if poly is None:
        poly = _DEFAULT_QUAD_POLYS[q]
    F = GF(p, 2, poly)
    e = F.k  # == 2
    frob = np.array([F.index(F.vectors[0] * 0)] * F.size)
    for a in F.elements():
        frob[a] = F.pow(a, q)
    K = 2 * e
    table = np.zeros((K, K, K), dtype=np.int64)
    basis = [F.index(np.eye(e, dtype=np.int64)[j]) for j in range(e)]
    for a in range(e):
        for b in range(e):
            ga, gb = basis[a], basis[b]
            # a * b
            table[a, b, :e] = F.vectors[F.mul(ga, gb)]
            # a * (b u) = (ab) u
            table[a, e + b, e:] = F.vectors[F.mul(ga, gb)]
            # (a u) * b = a b^q u
            table[e + a, b, e:] = F.vectors[F.mul(ga, int(frob[gb]))]
            # (a u)(b u) = 0
    one = list(F.one_vec) + [0] * e
    R = FiniteRing([p] * K, table, one, name=f"F_{q*q}+F_{q*q}u")
    R._literal = _PolyLiteral(R, p, e, True)
    R.meta.update(kind="QuaternionicU", q=q, field=F, frob=frob)
    return R


def qu_split(R: FiniteRing, i: int):
    """(a, b) field indices for the element a + b u of a QuaternionicU ring."""
    F = R.meta["field"]
    v = R.vector(i)
    return F.index(v[:F.k]), F.index(v[F.k:])


def qu_join(R: FiniteRing, a: int, b: int) -> int:
    F = R.meta["field"]
    return R.index(list(F.vector(a)) + list(F.vector(b)))


def DirectProduct(factors) -> FiniteRing:
    factors = list(factors)
    orders, one = [], []
    offs = []
    for F in factors:
        offs.append(len(orders))
        orders.extend(F.orders)
        one.extend(F.one_vec)
    K = len(orders)
    table = np.zeros((K, K, K), dtype=np.int64)
    for F, o in zip(factors, offs):
        table[o:o + F.k, o:o + F.k, o:o + F.k] = F.table
    R = FiniteRing(orders, table, one, name=" x ".join(F.name for F in factors))
    R.meta.update(kind="DirectProduct", factors=factors)
    return R


def ring_construct(spec) -> FiniteRing:
    """Build a ring from a JSON-style spec dict."""
    kind = spec["kind"]
    if kind == "Zn":
        return Zn(int(spec["n"]))
    if kind == "GF":
        return GF(int(spec["p"]), int(spec["f"]), spec["poly"])
    if kind == "MatRing":
        return MatRing(int(spec["m"]), ring_construct(spec["base"]))
    if kind == "QuaternionicU":
        return QuaternionicU(int(spec["q"]), spec.get("poly"))
    if kind == "DirectProduct":
        return DirectProduct([ring_construct(s) for s in spec["factors"]])
    raise ValueError(f"unknown ring kind {kind!r}")


# ---------------------------------------------------------------------------
# units and idempotents

def units(R: FiniteRing, cap: int | None = None) -> list:
    cap = DEFAULT_CAPS.brute_force if cap is None else cap
    if R.size > cap:
        raise CapExceeded(f"|R| = {R.size} exceeds brute-force cap {cap}")
    return sorted(R._inverse_table)


@dataclass
class IdempotentSet:
    elements: tuple
    partial: bool = False

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in self.elements


def idempotents(R: FiniteRing, cap: int | None = None) -> IdempotentSet:
    cap = DEFAULT_CAPS.brute_force if cap is None else cap
    if R.size <= cap:
        if R.size <= R.TABLE_CAP:
            sq = np.diagonal(R.mul_table)
            return IdempotentSet(tuple(int(i) for i in np.nonzero(sq == np.arange(R.size))[0]))
        out = [a for a in R.elements() if R.mul(a, a) == a]
        return IdempotentSet(tuple(out))
    if R.meta.get("kind") != "MatRing":
        raise CapExceeded(f"|R| = {R.size} exceeds brute-force cap {cap}")
    # structured: diagonal matrices with idempotent entries from the base ring
    base, m = R.meta["base"], R.meta["m"]
    base_idem = idempotents(base, cap).elements
    out = set()
    for diag in product(base_idem, repeat=m):
        rows = [[diag[i] if i == j else 0 for j in range(m)] for i in range(m)]
        out.add(mat_from_entries(R, rows))
    return IdempotentSet(tuple(sorted(out)), partial=True)


# ---------------------------------------------------------------------------
# modules

class FiniteModule(_Additive):
    """
    Finite left R-module, additive group Z/e1 x ... x Z/el, with
    ``action[a, b]`` = g_a . v_b as residue vector.
    """

    TABLE_CAP = 1 << 22

    def __init__(self, ring: FiniteRing, orders, action, name="V", check=True):
        self.ring = ring
        self._init_additive(orders)
        self.action = np.asarray(action, dtype=np.int64).reshape(ring.k, self.k, self.k) % self._mods
        self.name = name
        self.meta: dict = {}
        if check:
            self._check_axioms()

    def __repr__(self):
        return f"FiniteModule({self.name} over {self.ring.name}, |V|={self.size})"

    def _check_axioms(self):
        R, A, mods = self.ring, self.action, self._mods
        for a in range(R.k):
            for b in range(self.k):
                if np.any((R.orders[a] * A[a, b]) % mods) or np.any((self.orders[b] * A[a, b]) % mods):
                    raise AxiomViolation("action table not compatible with orders")
        # (g_a g_b) v_c == g_a (g_b v_c)
        left = np.einsum("abx,xcy->abcy", R.table, A) % mods
        right = np.einsum("bcx,axy->abcy", A, A) % mods
        if not np.array_equal(left, right):
            raise AxiomViolation(f"{self.name}: (rs)v != r(sv)")
        one = np.array(R.one_vec, dtype=np.int64)
        if not np.array_equal(np.einsum("x,xby->by", one, A) % mods, np.eye(self.k, dtype=np.int64) % mods):
            raise AxiomViolation(f"{self.name}: 1.v != v")

    @cached_property
    def act_table(self) -> np.ndarray:
        """act_table[r, v] = index of r.v"""
        R = self.ring
        if R.size * self.size > self.TABLE_CAP:
            raise CapExceeded("action table too large")
        Lm = np.einsum("ia,abc->ibc", R.vectors, self.action)  # (|R|, kV, kV)
        P = np.einsum("ibc,jb->ijc", Lm, self.vectors) % self._mods
        return (P @ self._strides).astype(np.int64)

    def act(self, r: int, v: int) -> int:
        return int(self.act_table[r, v])

    def elements(self) -> range:
        return range(self.size)


def regular_module(R: FiniteRing) -> FiniteModule:
    V = FiniteModule(R, R.orders, R.table, name=f"{R.name}_reg", check=False)
    V.meta["regular"] = True
    V.parse = R.parse
    V.fmt = R.fmt
    return V


def power_module(V: FiniteModule, m: int, R: FiniteRing) -> FiniteModule:
    """V^m as a left Mat_m(base)-module (column vectors), R = MatRing(m, V.ring)."""
    base = V.ring
    kb, kv = base.k, V.k
    K, KV = R.k, m * kv
    action = np.zeros((K, KV, KV), dtype=np.int64)
    for i, j, a in product(range(m), range(m), range(kb)):
        src = (i * m + j) * kb + a
        for b in range(kv):
            # E_ij g_a . (v in slot j, generator b) = slot i, g_a v_b
            action[src, j * kv + b, i * kv:(i + 1) * kv] = V.action[a, b]
    W = FiniteModule(R, list(V.orders) * m, action, name=f"{V.name}^{m}", check=False)
    W.meta.update(base_module=V, m=m)
    return W


def power_index(V: FiniteModule, parts) -> int:
    """Index in V^m of the tuple (v_1, ..., v_m) of V-indices."""
    i = 0
    for p in parts:
        i = i * V.size + int(p)
    return i


def power_parts(V: FiniteModule, m: int, i: int) -> tuple:
    out = []
    for _ in range(m):
        out.append(i % V.size)
        i //= V.size
    return tuple(reversed(out))
