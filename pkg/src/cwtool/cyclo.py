"""
Exact arithmetic in Q(zeta_L): numbers, matrices, reversed characteristic
polynomials, and truncated power series over Q.

Numbers live in the power basis 1, z, ..., z^(d-1), d = phi(L), reduced
modulo the L-th cyclotomic polynomial.  Matrices keep an integer numerator
array of shape (n, n, d) and one positive common denominator, reduced by gcd;
that pair is the canonical form used for hashing.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce

import numpy as np
import sympy


class CycError(Exception):
    pass


class SingularMatrix(CycError):
    pass


class NotInvertible(CycError):
    pass


class NoPolynomialNumerator(CycError):
    pass


# ---------------------------------------------------------------------------
# the field

class CycField:
    def __init__(self, L: int):
        if L < 1:
            raise ValueError("conductor must be positive")
        self.L = L
        x = sympy.Symbol("x")
        coeffs = [int(c) for c in sympy.Poly(sympy.cyclotomic_poly(L, x), x).all_coeffs()][::-1]
        self.phi_poly = coeffs  # low -> high, monic
        self.d = d = len(coeffs) - 1
        # power basis expansion of z^e for 0 <= e < max(L, 2d-1)
        top = max(L, 2 * d - 1)
        B = np.zeros((top, d), dtype=np.int64)
        cur = np.zeros(d, dtype=np.int64)
        cur[0] = 1
        tail = np.array(coeffs[:-1], dtype=np.int64)
        for e in range(top):
            B[e] = cur
            hi = cur[-1]
            cur = np.concatenate([[0], cur[:-1]])
            if hi:
                cur = cur - hi * tail
        self.powers = B[:L] if L >= 1 else B
        self._wide = B
        S = np.zeros((d, d, d), dtype=np.int64)
        for a in range(d):
            for b in range(d):
                S[a, b] = B[a + b]
        self.S = S
        # complex conjugation z -> z^-1 as a d x d integer matrix acting on rows
        C = np.zeros((d, d), dtype=np.int64)
        for a in range(d):
            C[a] = self.powers[(-a) % L]
        self.conj_matrix = C

    def zeta_power(self, k: int) -> np.ndarray:
        return self.powers[k % self.L].copy()

    def embed_matrix(self, L2: int) -> np.ndarray:
        """d x d2 integer matrix taking Q(zeta_L) coordinates to Q(zeta_L2)."""
        if L2 % self.L:
            raise ValueError(f"{self.L} does not divide {L2}")
        F2 = field_for(L2)
        step = L2 // self.L
        return np.stack([F2.powers[(a * step) % L2] for a in range(self.d)])

    def mul_vec(self, x, y):
        """Product of coordinate vectors (works on object arrays too)."""
        return np.einsum("a,b,abc->c", x, y, self.S) if x.dtype != object else _obj_mul(x, y, self.S)

    def regular(self, x) -> np.ndarray:
        """d x d matrix of multiplication by x on row vectors: y @ regular(x) = y*x."""
        return np.einsum("b,abc->ac", x, self.S)


@lru_cache(maxsize=None)
def field_for(L: int) -> CycField:
    return CycField(L)


def _obj_mul(x, y, S):
    d = S.shape[0]
    out = [0] * d
    for a in range(d):
        xa = x[a]
        if xa == 0:
            continue
        for b in range(d):
            yb = y[b]
            if yb == 0:
                continue
            p = xa * yb
            for c in np.nonzero(S[a, b])[0]:
                out[c] += int(S[a, b, c]) * p
    return np.array(out, dtype=object)


def batch_mul(X, Y, F: CycField):
    """Elementwise product of (..., d) coordinate arrays (object or int)."""
    d = F.d
    out = np.zeros(np.broadcast_shapes(X.shape, Y.shape), dtype=X.dtype if X.dtype == Y.dtype else object)
    for a in range(d):
        xa = X[..., a]
        for b in range(d):
            row = F.S[a, b]
            nz = np.nonzero(row)[0]
            if not len(nz):
                continue
            p = xa * Y[..., b]
            for c in nz:
                s = int(row[c])
                out[..., c] += p if s == 1 else s * p
    return out


# ---------------------------------------------------------------------------
# numbers

class CycNum:
    """Element of Q(zeta_L) with rational power-basis coordinates."""

    __slots__ = ("L", "c")

    def __init__(self, L: int, coeffs):
        self.L = L
        self.c = tuple(Fraction(x) for x in coeffs)
        if len(self.c) != field_for(L).d:
            raise ValueError("wrong coordinate length")

    @property
    def field(self) -> CycField:
        return field_for(self.L)

    @classmethod
    def rational(cls, q, L: int = 1) -> "CycNum":
        d = field_for(L).d
        return cls(L, [Fraction(q)] + [Fraction(0)] * (d - 1))

    def embed(self, L2: int) -> "CycNum":
        if L2 == self.L:
            return self
        E = self.field.embed_matrix(L2)
        out = [Fraction(0)] * field_for(L2).d
        for a, ca in enumerate(self.c):
            if ca:
                for j, e in enumerate(E[a]):
                    if e:
                        out[j] += ca * int(e)
        return CycNum(L2, out)

    def _align(self, other):
        if not isinstance(other, CycNum):
            other = CycNum.rational(other, self.L)
        if other.L == self.L:
            return self, other
        L = math.lcm(self.L, other.L)
        return self.embed(L), other.embed(L)

    def __add__(self, other):
        a, b = self._align(other)
        return CycNum(a.L, [x + y for x, y in zip(a.c, b.c)])

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.L, [-x for x in self.c])

    def __sub__(self, other):
        return self + (-other if isinstance(other, CycNum) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, CycNum):
            q = Fraction(other)
            return CycNum(self.L, [x * q for x in self.c])
        a, b = self._align(other)
        S = a.field.S
        d = a.field.d
        out = [Fraction(0)] * d
        for i, x in enumerate(a.c):
            if not x:
                continue
            for j, y in enumerate(b.c):
                if not y:
                    continue
                p = x * y
                for k in np.nonzero(S[i, j])[0]:
                    out[k] += int(S[i, j, k]) * p
        return CycNum(a.L, out)

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise ZeroDivisionError("inverse of 0")
        F = self.field
        d = F.d
        # solve y * self = 1:  y @ regular(self) = e_0
        M = [[Fraction(int(v)) for v in row] for row in np.zeros((d, d), dtype=np.int64)]
        for b, cb in enumerate(self.c):
            if cb:
                for a in range(d):
                    for k in range(d):
                        s = F.S[a, b, k]
                        if s:
                            M[a][k] += cb * int(s)
        # y M = e0  <=>  M^T y^T = e0
        A = [[M[a][k] for a in range(d)] + [Fraction(int(k == 0))] for k in range(d)]
        y = _solve(A, d)
        return CycNum(self.L, y)

    def __truediv__(self, other):
        if not isinstance(other, CycNum):
            return self * (1 / Fraction(other))
        a, b = self._align(other)
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        r = CycNum.rational(1, self.L)
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def conj(self) -> "CycNum":
        C = self.field.conj_matrix
        out = [Fraction(0)] * self.field.d
        for a, ca in enumerate(self.c):
            if ca:
                for k, v in enumerate(C[a]):
                    if v:
                        out[k] += ca * int(v)
        return CycNum(self.L, out)

    def is_zero(self) -> bool:
        return not any(self.c)

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.c[0]

    def __eq__(self, other):
        try:
            a, b = self._align(other)
        except (TypeError, ValueError):
            return NotImplemented
        return a.c == b.c

    def __hash__(self):
        # hash via the minimal conductor representation is expensive; hash rational part only
        return hash(self.c[0]) if self.is_rational() else hash((self.L, self.c))

    def to_complex(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.L)
        return sum(float(x) * z ** a for a, x in enumerate(self.c))

    def __repr__(self):
        terms = [f"{x}*z{self.L}^{a}" if a else f"{x}" for a, x in enumerate(self.c) if x]
        return "(" + " + ".join(terms or ["0"]) + ")"


def _solve(A, n):
    """Gauss-Jordan on an n x (n+1) augmented Fraction matrix."""
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col]), None)
        if piv is None:
            raise SingularMatrix("singular system")
        A[col], A[piv] = A[piv], A[col]
        inv = 1 / A[col][col]
        A[col] = [x * inv for x in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [A[r][n] for r in range(n)]


def root_of_unity(L: int, k: int) -> CycNum:
    F = field_for(L)
    return CycNum(L, [Fraction(int(x)) for x in F.zeta_power(k)])


def _squarefree_split(n: int):
    a, b = 1, 1
    for p, e in sympy.factorint(n).items():
        a *= p ** (e // 2)
        if e % 2:
            b *= p
    return a, b


def sqrt_conductor(n: int) -> int:
    _, b = _squarefree_split(n)
    if b == 1:
        return 1
    return reduce(math.lcm, [8] + [4 * p for p in sympy.primefactors(b)])


def sqrt_int(n: int):
    """Positive square root of n in Q(zeta_L); returns (value, L)."""
    if n < 1:
        raise ValueError("n must be positive")
    a, b = _squarefree_split(n)
    L = sqrt_conductor(n)
    val = CycNum.rational(a, L)
    for p in sympy.primefactors(b):
        if p == 2:
            s = root_of_unity(8, 1) + root_of_unity(8, 7)
        else:
            g = CycNum.rational(0, p)
            for x in range(1, p):
                g = g + root_of_unity(p, x) * sympy.legendre_symbol(x, p)
            s = g if p % 4 == 1 else g * root_of_unity(4, 3)
        val = val * s.embed(L)
    if not (val * val) == CycNum.rational(n, L):
        raise CycError(f"sqrt({n}) failed to square back")
    z = val.to_complex()
    if not (abs(z.imag) < 1e-9 and z.real > 0):
        raise CycError(f"sqrt({n}) has wrong sign")
    return val, L


# ---------------------------------------------------------------------------
# matrices

def _canon(num: np.ndarray, den: int):
    g = int(np.gcd.reduce(np.abs(num).ravel())) if num.size else 0
    g = math.gcd(g, int(den))
    if g > 1:
        num = num // g
        den = int(den) // g
    return num, int(den)


class CycMatrix:
    """Square matrix over Q(zeta_L): integer numerators (n, n, d) over a common denominator."""

    __slots__ = ("L", "num", "den", "_key")

    def __init__(self, L: int, num, den: int = 1, canonical=False):
        self.L = L
        num = np.asarray(num, dtype=np.int64)
        if not canonical:
            num, den = _canon(num, den)
        self.num = num
        self.den = int(den)
        self._key = None

    @property
    def n(self) -> int:
        return self.num.shape[0]

    @property
    def field(self) -> CycField:
        return field_for(self.L)

    @classmethod
    def identity(cls, n: int, L: int) -> "CycMatrix":
        d = field_for(L).d
        num = np.zeros((n, n, d), dtype=np.int64)
        num[np.arange(n), np.arange(n), 0] = 1
        return cls(L, num, 1, canonical=True)

    @classmethod
    def from_entries(cls, L: int, entries) -> "CycMatrix":
        """entries: n x n nested list of CycNum / rationals."""
        n = len(entries)
        d = field_for(L).d
        vals = []
        for row in entries:
            for x in row:
                x = x.embed(L) if isinstance(x, CycNum) else CycNum.rational(x, L)
                vals.append(x.c)
        den = reduce(math.lcm, (q.denominator for c in vals for q in c), 1)
        num = np.array([[int(q * den) for q in c] for c in vals], dtype=np.int64).reshape(n, n, d)
        return cls(L, num, den)

    def entry(self, i: int, j: int) -> CycNum:
        return CycNum(self.L, [Fraction(int(x), self.den) for x in self.num[i, j]])

    def entries(self):
        return [[self.entry(i, j) for j in range(self.n)] for i in range(self.n)]

    def embed(self, L2: int) -> "CycMatrix":
        if L2 == self.L:
            return self
        E = self.field.embed_matrix(L2)
        return CycMatrix(L2, self.num @ E, self.den)

    def key(self) -> bytes:
        if self._key is None:
            self._key = np.int64(self.den).tobytes() + self.num.tobytes()
        return self._key

    def __eq__(self, other):
        if not isinstance(other, CycMatrix):
            return NotImplemented
        a, b = _align_mats(self, other)
        return a.den == b.den and np.array_equal(a.num, b.num)

    def __hash__(self):
        return hash(self.key())

    def right_mul_matrix(self) -> np.ndarray:
        """(n*d, n*d) integer matrix W with (X @ self).num == X.num.reshape(n, n*d) @ W."""
        n, d = self.n, self.field.d
        W = np.einsum("jkb,abc->jakc", self.num, self.field.S)
        return W.reshape(n * d, n * d)

    def __matmul__(self, other: "CycMatrix") -> "CycMatrix":
        a, b = _align_mats(self, other)
        n, d = a.n, a.field.d
        bound = int(np.abs(a.num).max(initial=0)) * int(np.abs(b.num).max(initial=0)) * n * d * d
        if bound >= 1 << 62:
            return _matmul_obj(a, b)
        out = a.num.reshape(n, n * d) @ b.right_mul_matrix()
        return CycMatrix(a.L, out.reshape(n, n, d), a.den * b.den)

    def scale(self, s) -> "CycMatrix":
        if isinstance(s, CycNum):
            L = math.lcm(self.L, s.L)
            m = self.embed(L)
            s = s.embed(L)
            den = reduce(math.lcm, (q.denominator for q in s.c), 1)
            sv = np.array([int(q * den) for q in s.c], dtype=np.int64)
            R = field_for(L).regular(sv)
            return CycMatrix(L, m.num @ R, m.den * den)
        q = Fraction(s)
        return CycMatrix(self.L, self.num * q.numerator, self.den * q.denominator)

    def conj_transpose(self) -> "CycMatrix":
        num = self.num @ self.field.conj_matrix
        return CycMatrix(self.L, np.transpose(num, (1, 0, 2)).copy(), self.den, canonical=True)

    def transpose(self) -> "CycMatrix":
        return CycMatrix(self.L, np.transpose(self.num, (1, 0, 2)).copy(), self.den, canonical=True)

    def trace(self) -> CycNum:
        t = self.num[np.arange(self.n), np.arange(self.n)].sum(axis=0)
        return CycNum(self.L, [Fraction(int(x), self.den) for x in t])

    def is_identity(self) -> bool:
        return self == CycMatrix.identity(self.n, self.L)

    def scalar_value(self):
        """The scalar c if self == c*I, else None."""
        n = self.n
        off = self.num.copy()
        off[np.arange(n), np.arange(n)] = 0
        if off.any():
            return None
        diag = self.num[np.arange(n), np.arange(n)]
        if not (diag == diag[0]).all():
            return None
        return self.entry(0, 0)

    def inverse(self) -> "CycMatrix":
        n = self.n
        A = [row + [CycNum.rational(int(i == j), self.L) for j in range(n)]
             for i, row in enumerate(self.entries())]
        for col in range(n):
            piv = next((r for r in range(col, n) if not A[r][col].is_zero()), None)
            if piv is None:
                raise SingularMatrix("matrix is singular")
            A[col], A[piv] = A[piv], A[col]
            inv = A[col][col].inverse()
            A[col] = [x * inv for x in A[col]]
            for r in range(n):
                if r != col and not A[r][col].is_zero():
                    f = A[r][col]
                    A[r] = [x - f * y for x, y in zip(A[r], A[col])]
        return CycMatrix.from_entries(self.L, [row[n:] for row in A])

    def to_complex(self) -> np.ndarray:
        z = np.exp(2j * np.pi * np.arange(self.field.d) / self.L)
        return (self.num @ z) / self.den

    def __repr__(self):
        return f"CycMatrix(n={self.n}, L={self.L}, den={self.den})"


def _matmul_obj(a: CycMatrix, b: CycMatrix) -> CycMatrix:
    F = a.field
    n = a.n
    A = a.num.astype(object)
    B = b.num.astype(object)
    out = np.zeros((n, n, F.d), dtype=object)
    for i in range(n):
        for k in range(n):
            acc = np.zeros(F.d, dtype=object)
            for j in range(n):
                acc = acc + _obj_mul(A[i, j], B[j, k], F.S)
            out[i, k] = acc
    den = a.den * b.den
    g = math.gcd(den, *[int(x) for x in out.ravel()])
    out = out // g
    if np.abs(out).max() >= 1 << 62:
        raise OverflowError("matrix entries exceed 64-bit range")
    return CycMatrix(a.L, out.astype(np.int64), den // g)


def _align_mats(a: CycMatrix, b: CycMatrix):
    if a.L == b.L:
        return a, b
    L = math.lcm(a.L, b.L)
    return a.embed(L), b.embed(L)


def mat_arith(A: CycMatrix, B=None, op: str = "mul"):
    if op == "mul":
        return A @ B
    if op == "inverse":
        return A.inverse()
    if op == "scalar":
        return A.scale(B)
    raise ValueError(f"unknown op {op!r}")


def power_traces(g: CycMatrix, upto: int | None = None):
    upto = g.n if upto is None else upto
    out = []
    P = g
    for k in range(upto):
        if k:
            P = P @ g
        out.append(P.trace())
    return out


def charpoly_from_traces(traces, L: int):
    """Coefficients of det(I - t g), t^0..t^n, from tr(g^k), k = 1..n (Newton's identities)."""
    n = len(traces)
    e = [CycNum.rational(1, L)]
    for k in range(1, n + 1):
        acc = CycNum.rational(0, L)
        for i in range(1, k + 1):
            term = e[k - i] * traces[i - 1]
            acc = acc + term if i % 2 else acc - term
        e.append(acc * Fraction(1, k))
    return [x if k % 2 == 0 else -x for k, x in enumerate(e)]


def rev_charpoly(g: CycMatrix):
    """det(I - t g) as a list of CycNum coefficients (constant term first)."""
    return charpoly_from_traces(power_traces(g), g.L)


# ---------------------------------------------------------------------------
# power series

def _poly_from_exponents(exps):
    """Coefficients of prod (1 - t^e)."""
    out = [1]
    for e in exps:
        nxt = out + [0] * e
        for i, c in enumerate(out):
            nxt[i + e] -= c
        out = nxt
    return out


@dataclass
class RatSeries:
    """Truncated series c_0 + ... + c_D t^D over Q, optionally with a closed form num/den."""

    coeffs: list
    closed_form: tuple | None = None  # (numerator coeffs, denominator coeffs), low->high

    def __post_init__(self):
        self.coeffs = [Fraction(c) for c in self.coeffs]
        if self.closed_form is not None:
            num, den = self.closed_form
            exp = RatSeries.from_rational(num, den, self.D)
            if exp.coeffs != self.coeffs:
                raise ValueError("closed form does not match coefficients")

    @property
    def D(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_rational(cls, num, den, D: int) -> "RatSeries":
        num = [Fraction(c) for c in num]
        den = [Fraction(c) for c in den]
        inv = _invert(den, D)
        return cls(_mul(num, inv, D))

    @classmethod
    def from_product_form(cls, num, exps, D: int) -> "RatSeries":
        return cls.from_rational(num, _poly_from_exponents(exps), D)

    def __add__(self, other):
        D = min(self.D, other.D)
        return RatSeries([a + b for a, b in zip(self.coeffs[:D + 1], other.coeffs[:D + 1])])

    def __mul__(self, other):
        D = min(self.D, other.D)
        return RatSeries(_mul(self.coeffs, other.coeffs, D))

    def invert(self) -> "RatSeries":
        if self.coeffs[0] == 0:
            raise NotInvertible("constant term is zero")
        return RatSeries(_invert(self.coeffs, self.D))

    def rationalize(self, exps, max_num_degree: int | None = None) -> "RatSeries":
        """
        Multiply by prod(1 - t^e); the product must be a polynomial of degree at
        most ``max_num_degree`` (default D - 1) within the truncation.
        """
        D = self.D
        den = _poly_from_exponents(exps)
        prod = _mul(self.coeffs, [Fraction(c) for c in den], D)
        limit = D - 1 if max_num_degree is None else max_num_degree
        nz = [i for i, c in enumerate(prod) if c]
        deg = nz[-1] if nz else 0
        if deg > limit:
            raise NoPolynomialNumerator(f"numerator degree {deg} exceeds {limit}")
        num = prod[:deg + 1]
        return RatSeries(self.coeffs, closed_form=(num, [Fraction(c) for c in den]))

    def to_json(self):
        out = {"coefficients": [_frac_str(c) for c in self.coeffs], "closed_form": None}
        if self.closed_form is not None:
            num, den = self.closed_form
            out["closed_form"] = {"num": [_frac_str(c) for c in num], "den": [_frac_str(c) for c in den]}
        return out


def _frac_str(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _mul(a, b, D):
    out = [Fraction(0)] * (D + 1)
    for i, x in enumerate(a[:D + 1]):
        if x:
            for j, y in enumerate(b[:D + 1 - i]):
                if y:
                    out[i + j] += x * y
    return out


def _invert(a, D):
    a = list(a) + [Fraction(0)] * max(0, D + 1 - len(a))
    inv0 = 1 / Fraction(a[0])
    out = [inv0]
    for n in range(1, D + 1):
        s = sum((a[k] * out[n - k] for k in range(1, n + 1) if a[k]), Fraction(0))
        out.append(-s * inv0)
    return out


def series_ops(a: RatSeries, b=None, op: str = "add"):
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "invert":
        return a.invert()
    if op == "rationalize":
        return a.rationalize(b)
    raise ValueError(f"unknown op {op!r}")
