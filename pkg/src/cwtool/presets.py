"""
Built-in form rings and codes: generalized doubly-even codes over F_{2^f},
doubly-even codes over Z/2^f Z (with and without the all-ones condition),
self-dual codes over F_{q^2} + F_{q^2} u, plus the classical binary cases.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from cwtool.finring import GF, QuaternionicU, Zn, qu_split, regular_module, ring_construct
from cwtool.qform import BilForm, FormRing, QuadMap, form_ring_validate, regular_form_ring


class UnknownPreset(KeyError):
    pass


# ---------------------------------------------------------------------------
# field helpers

def _field_trace(F, x: int) -> int:
    """Absolute trace F_{p^f} -> F_p of x, as an integer mod p."""
    p = F.meta["p"]
    t = 0
    for e in range(F.k):
        # coefficient of w^e in x * w^e
        we = F.parse("w^%d" % e) if e else F.one
        v = F.vector(F.mul(x, we))
        t += v[F.k - 1 - e]
    return t % p


def _prime_field_value(F, x: int) -> int:
    v = F.vector(x)
    if any(v[:-1]):
        raise ValueError(f"{F.fmt(x)} is not in the prime field")
    return v[-1]


def _gr4_trace_square(F, x: int) -> int:
    """Tr_{GR(4,f)/Z4}(y^2) for any lift y of x in Z4[X]/(poly); independent of the lift."""
    poly = F.meta["poly"]
    f = F.meta["f"]
    y = list(reversed(F.vector(x)))  # low -> high over {0,1} lifted to Z4

    def mulmod(a, b):
        prod = [0] * (2 * f - 1)
        for i, ai in enumerate(a):
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
        for d in range(2 * f - 2, f - 1, -1):
            c = prod[d]
            if c:
                prod[d] = 0
                for i in range(f):
                    prod[d - f + i] -= c * poly[i]
        return [c % 4 for c in prod[:f]]

    y2 = mulmod(y, y)
    t = 0
    for e in range(f):
        xe = [int(i == e) for i in range(f)]
        t += mulmod(y2, xe)[e]
    return t % 4


# ---------------------------------------------------------------------------
# form rings

DEFAULT_POLYS = {1: [0, 1], 2: [1, 1, 1], 3: [1, 1, 0, 1], 4: [1, 1, 0, 0, 1]}


def even_form_ring(f: int, poly=None, name=None) -> FormRing:
    """F_{2^f}, beta(x, y) = Tr(xy)/2, Phi generated by x -> Tr(x^2)/4 computed in GR(4, f)."""
    poly = DEFAULT_POLYS[f] if poly is None else poly
    F = GF(2, f, poly)
    V = regular_module(F)
    beta = BilForm.from_function(V, lambda x, y: Fraction(_field_trace(F, F.mul(x, y)), 2))
    phi1 = QuadMap.from_function(V, lambda x: Fraction(_gr4_trace_square(F, x), 4))
    fr = form_ring_validate(F, V, beta, [phi1], name=name or f"F{2**f}-even")
    fr.meta.update(phi_generators=[phi1], family="even", f=f)
    return fr


def rho_z2f(f: int, variant: str = "a") -> FormRing:
    """Z/2^f Z with beta = xy/2^f; Phi generated by x^2/2^(f+1) (and x/2^f for variant b)."""
    n = 2 ** f
    R = Zn(n)
    V = regular_module(R)
    beta = BilForm.from_function(V, lambda x, y: Fraction(x * y, n))
    phi0 = QuadMap.from_function(V, lambda x: Fraction(x * x, 2 * n))
    gens = [phi0]
    if variant == "b":
        gens.append(QuadMap.from_function(V, lambda x: Fraction(x, n)))
    elif variant != "a":
        raise ValueError("variant must be 'a' or 'b'")
    fr = form_ring_validate(R, V, beta, gens, name=f"Z{n}-rho-{variant}")
    fr.meta.update(phi_generators=gens, family=f"rho-{variant}", f=f)
    return fr


def quaternionic_form_ring(q: int = 2) -> FormRing:
    """R = F_{q^2} + F_{q^2} u, beta(a'+b'u, a+bu) = Tr(ab' - a'b)/p, phi0(a+bu) = Tr(a^(q+1))/p."""
    R = QuaternionicU(q)
    F = R.meta["field"]
    p = q
    V = regular_module(R)

    def beta_fn(x, y):
        a1, b1 = qu_split(R, x)
        a, b = qu_split(R, y)
        t = F.sub(F.mul(a, b1), F.mul(a1, b))
        return Fraction(_field_trace(F, t), p)

    def phi_fn(x):
        a, _ = qu_split(R, x)
        return Fraction(_prime_field_value(F, F.pow(a, q + 1)), p)

    beta = BilForm.from_function(V, beta_fn)
    phi0 = QuadMap.from_function(V, phi_fn)
    fr = form_ring_validate(R, V, beta, [phi0], name=f"F{q*q}u")
    fr.meta.update(phi_generators=[phi0], family="quaternionic", q=q)
    return fr


def zn_regular(n: int) -> FormRing:
    """Z/nZ with beta = xy/n and the minimal Phi generated by {{M}}."""
    R = Zn(n)
    V = regular_module(R)
    beta = BilForm.from_function(V, lambda x, y: Fraction(x * y, n))
    return regular_form_ring(R, V, beta, name=f"Z{n}-euclid")


# ---------------------------------------------------------------------------
# codes

@dataclass
class CodeSpec:
    name: str
    formring: str
    rows: list  # literals
    note: str = ""

    def to_json(self):
        return {"name": self.name, "formring": self.formring, "length": len(self.rows[0]), "rows": self.rows}


def _digits(s):
    return [int(c) for c in s.replace(" ", "")]


D8_ROWS = [_digits(r) for r in ["13100102", "13010210", "13001021", "22000000", "20222000"]]

C16_ROWS = [_digits(r) for r in [
    "1111111111111111", "1011111100001000", "1101001111000100", "1110101010100010",
    "0000111111100001", "0000020000022002", "0000002000022222", "0000000200002202",
    "0000000020000222", "0000000002020202", "0000000000220022"]]

D16_ROWS = [_digits(r) for r in [
    "1111111111111111", "1110000023000000",
    "1101000002300000", "1100100022230000",
    "1100010002223000", "1100001022222300",
    "1100000102222230", "1011111102222221",
]]

E8_HAMMING_ROWS = [[1, 1, 1, 1, 0, 0, 0, 0], [0, 0, 1, 1, 1, 1, 0, 0],
                   [0, 0, 0, 0, 1, 1, 1, 1], [1, 0, 1, 0, 1, 0, 1, 0]]

Q4_ROWS = [["1", "1", "1", "1"], ["0", "1", "w", "w^2"]]


def column_scaled(rows, col=0, factor=3, modulus=4):
    out = [list(r) for r in rows]
    for r in out:
        r[col] = (r[col] * factor) % modulus
    return out


def _poly_mulmod(a, b, mod):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % mod
    return out


def hensel_lift_z4(g2):
    """Z/4 lift (Graeffe) of a binary factor g2 of x^n - 1, n odd; coefficients low->high."""
    even = [c if i % 2 == 0 else 0 for i, c in enumerate(g2)]
    odd = [c if i % 2 == 1 else 0 for i, c in enumerate(g2)]
    e2 = _poly_mulmod(even, even, 4)
    o2 = _poly_mulmod(odd, odd, 4)
    h = [(x - y) % 4 for x, y in zip(e2 + [0] * (len(o2) - len(e2)), o2 + [0] * (len(e2) - len(o2)))]
    g = [h[2 * i] for i in range(len(g2))]
    if g[-1] != 1:
        g = [(-c) % 4 for c in g]
    return g


def _binary_qr_generator(p):
    """Degree-(p-1)/2 binary divisors of x^p - 1 with nonzero constant term, smallest first.

    The two quadratic-residue generator polynomials are among them; the caller keeps the first
    candidate whose lift passes the type check.
    """
    deg = (p - 1) // 2
    target = [1] + [0] * (p - 1) + [1]  # x^p - 1 over F2, low -> high
    cands = []
    for tail in itertools.product(range(2), repeat=deg):
        g = list(tail) + [1]
        if g[0] == 0:
            continue
        rem = target[:]
        for d in range(len(rem) - 1, deg - 1, -1):
            if rem[d]:
                for i, c in enumerate(g):
                    rem[d - deg + i] ^= c
        if not any(rem[:deg]):
            cands.append(g)
    cands.sort(key=lambda g: sum(c << i for i, c in enumerate(g)))
    return cands


def cyclic_rows(g, n, mod):
    k = n - (len(g) - 1)
    rows = []
    for s in range(k):
        r = [0] * n
        for i, c in enumerate(g):
            r[s + i] = c % mod
        rows.append(r)
    return rows


def extended_qr_z4(p):
    """Extended Z/4 QR code of length p+1: Hensel lift, cyclic code, extension coordinate chosen so 1 is in the code."""
    from cwtool.codes import Code, check_type
    fr = get_formring("Z4-rho-b")
    for g2 in _binary_qr_generator(p):
        g4 = hensel_lift_z4(g2)
        base = cyclic_rows(g4, p, 4)
        for sign in (-1, 1):
            rows = [r + [(sign * sum(r)) % 4] for r in base]
            ones = [1] * (p + 1)
            for extra in ([], [ones]):
                C = Code(fr, rows + extra)
                if check_type(C):
                    return rows + extra, g4
    raise RuntimeError(f"no Type rho_b extension of the Z/4 QR code of length {p + 1}")


# ---------------------------------------------------------------------------
# registry

FORMRING_BUILDERS = {
    "binary-II": lambda: even_form_ring(1, name="binary-II"),
    "F4-even": lambda: even_form_ring(2),
    "F8-even": lambda: even_form_ring(3),
    "Z4-rho-a": lambda: rho_z2f(2, "a"),
    "Z4-rho-b": lambda: rho_z2f(2, "b"),
    "F4u": lambda: quaternionic_form_ring(2),
}


@lru_cache(maxsize=None)
def get_formring(name: str) -> FormRing:
    if name in FORMRING_BUILDERS:
        return FORMRING_BUILDERS[name]()
    if name.startswith("Z2f-rho-"):
        # Z2f-rho-a(3) etc.
        variant = name[len("Z2f-rho-")]
        f = int(name[name.index("(") + 1:name.index(")")])
        return rho_z2f(f, variant)
    raise UnknownPreset(name)


def _code_specs():
    specs = {
        "Q4": CodeSpec("Q4", "F4-even", Q4_ROWS),
        "d8": CodeSpec("d8", "Z4-rho-b", D8_ROWS),
        "d8'": CodeSpec("d8'", "Z4-rho-a", column_scaled(D8_ROWS)),
        "c16": CodeSpec("c16", "Z4-rho-b", C16_ROWS),
        "d16": CodeSpec("d16", "Z4-rho-b", D16_ROWS),
        "e8-hamming": CodeSpec("e8-hamming", "binary-II", E8_HAMMING_ROWS),
    }
    return specs


CODE_NAMES = ["Q4", "d8", "d8'", "c16", "d16", "e8-hamming", "octacode-QR7", "e8'", "QR23-lift"]
FORMRING_NAMES = list(FORMRING_BUILDERS) + ["Z2f-rho-a(f)", "Z2f-rho-b(f)"]


@lru_cache(maxsize=None)
def get_code_spec(name: str) -> CodeSpec:
    specs = _code_specs()
    if name in specs:
        return specs[name]
    if name == "octacode-QR7":
        rows, g = extended_qr_z4(7)
        return CodeSpec(name, "Z4-rho-b", rows, note=f"derived: Hensel lift g = {g}")
    if name == "e8'":
        rows = get_code_spec("octacode-QR7").rows
        return CodeSpec(name, "Z4-rho-a", column_scaled(rows), note="derived: octacode with one column times 3")
    if name == "QR23-lift":
        rows, g = extended_qr_z4(23)
        return CodeSpec(name, "Z4-rho-b", rows, note=f"derived: Hensel lift g = {g}")
    raise UnknownPreset(name)


def get_code(name: str, formring: str | None = None):
    from cwtool.codes import Code
    spec = get_code_spec(name)
    fr = get_formring(formring or spec.formring)
    return Code(fr, spec.rows, name=name)


# ---------------------------------------------------------------------------
# JSON specs

def formring_to_json(name: str) -> dict:
    """JSON spec understood by ``formring_from_json``."""
    if name in ("binary-II", "F4-even", "F8-even"):
        f = {"binary-II": 1, "F4-even": 2, "F8-even": 3}[name]
        ring = {"kind": "GF", "p": 2, "f": f, "poly": DEFAULT_POLYS[f]}
        return {"name": name, "ring": ring, "module": "regular", "beta": "trace-half",
                "phi_generators": ["trace-square-quarter"]}
    if name.startswith("Z4-rho-") or name.startswith("Z2f-rho-"):
        fr = get_formring(name)
        n = fr.R.size
        gens = ["x2-over-2f+1"] + (["x-over-2f"] if fr.meta["family"] == "rho-b" else [])
        return {"name": name, "ring": {"kind": "Zn", "n": n}, "module": "regular", "beta": "xy-over-2f",
                "phi_generators": gens}
    if name == "F4u":
        return {"name": name, "ring": {"kind": "QuaternionicU", "q": 2}, "module": "regular",
                "beta": "quaternionic-skew", "phi_generators": ["quaternionic-norm"]}
    raise UnknownPreset(name)


def formring_from_json(spec: dict) -> FormRing:
    R = ring_construct(spec["ring"])
    if spec.get("module", "regular") != "regular":
        raise ValueError("only the regular module is supported in spec files")
    V = regular_module(R)
    kind = spec["ring"]["kind"]
    b = spec["beta"]
    if isinstance(b, list):
        beta = BilForm.from_function(V, lambda x, y: Fraction(b[x][y]))
    elif b == "trace-half":
        beta = BilForm.from_function(V, lambda x, y: Fraction(_field_trace(R, R.mul(x, y)), 2))
    elif b in ("xy-over-2f", "xy-over-n"):
        n = R.size
        beta = BilForm.from_function(V, lambda x, y: Fraction(x * y, n))
    elif b == "quaternionic-skew":
        return quaternionic_form_ring(int(spec["ring"]["q"]))
    else:
        raise ValueError(f"unknown beta formula {b!r}")
    gens = []
    for g in spec.get("phi_generators", []):
        if isinstance(g, list):
            gens.append(QuadMap.from_function(V, lambda x, g=g: Fraction(g[x])))
        elif g == "trace-square-quarter":
            gens.append(QuadMap.from_function(V, lambda x: Fraction(_gr4_trace_square(R, x), 4)))
        elif g in ("x2-over-2f+1", "x2-over-2n"):
            n = R.size
            gens.append(QuadMap.from_function(V, lambda x: Fraction(x * x, 2 * n)))
        elif g in ("x-over-2f", "x-over-n"):
            n = R.size
            gens.append(QuadMap.from_function(V, lambda x: Fraction(x, n)))
        elif g == "brace-M":
            return regular_form_ring(R, V, beta, name=spec.get("name", "rho"))
        else:
            raise ValueError(f"unknown phi formula {g!r}")
    fr = form_ring_validate(R, V, beta, gens, name=spec.get("name", "rho"))
    fr.meta["phi_generators"] = gens
    return fr


def load_formring(ref) -> FormRing:
    """Preset name, path to a JSON spec, or a spec dict."""
    if isinstance(ref, dict):
        return formring_from_json(ref)
    try:
        return get_formring(ref)
    except UnknownPreset:
        with open(ref) as fh:
            return formring_from_json(json.load(fh))
