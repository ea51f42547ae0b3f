"""Independent oracles and printed data shared by the test modules."""

from functools import lru_cache

import numpy as np

from cwtool.cwgroup import build_group
from cwtool.presets import get_formring
from cwtool.qform import BilForm, brace, lambda_of, qaction, tau


@lru_cache(maxsize=None)
def group(name, m=1):
    return build_group(get_formring(name), m)


def expand_product(num, den_exps, D):
    """Integer power series of num(t) / prod (1 - t^e) by repeated geometric-series sums."""
    out = [0] * (D + 1)
    for e, c in num.items():
        if e <= D:
            out[e] += c
    for e in den_exps:
        for i in range(e, D + 1):
            out[i] += out[i - e]
    return out


def poly_pow_product(*factors):
    """Sparse product of polynomials given as {exponent: coeff} dicts."""
    acc = {0: 1}
    for f in factors:
        nxt = {}
        for a, x in acc.items():
            for b, y in f.items():
                nxt[a + b] = nxt.get(a + b, 0) + x * y
        acc = {k: v for k, v in nxt.items() if v}
    return acc


# closed forms as printed
F4U_F = [1, 1, 4, 3, 53, 104, 458, 858, 2474, 4839, 10667, 19018, 34193, 55481, 86078, 125990, 173466,
         230402, 287430, 346462, 393648, 431930, 450648, 450648, 431930, 393648, 346462, 287430, 230402,
         173466, 125990, 86078, 55481, 34193, 19018, 10667, 4839, 2474, 858, 458, 104, 53, 3, 4, 1, 1]
F4U_DEN = [2] * 5 + [3] + [4] * 6 + [6] * 4

F8_F = {0: 1, 16: 5, 24: 77, 32: 300, 40: 908, 48: 2139, 56: 3808, 64: 5864, 72: 8257, 80: 10456,
        88: 12504, 96: 14294, 104: 15115, 112: 15115, 120: 14294, 128: 12504, 136: 10456, 144: 8257,
        152: 5864, 160: 3808, 168: 2139, 176: 908, 184: 300, 192: 77, 200: 5, 216: 1}
F8_DEN = [8, 8, 16, 16, 24, 24, 56, 72]

MOLIEN_CLOSED = {
    "binary-II": ({0: 1}, [8, 24]),
    "F4-even": ({0: 1, 40: 1}, [4, 8, 12, 20]),
    "Z4-rho-a": (poly_pow_product({0: 1, 8: 1}, {0: 1, 16: 1}, {0: 1, 16: 1}), [8, 8, 8, 24]),
    "Z4-rho-b": (poly_pow_product({0: 1, 16: 1}, {0: 1, 32: 1}), [8, 8, 16, 24]),
    "F4u": (dict(enumerate(F4U_F)), F4U_DEN),
}


def remark_identities(fr):
    """Failures of the qmodule calculus identities over beta(r x s), lambda(Phi), Phi and r, s in R."""
    R = fr.R
    fails = []
    betas = [fr.beta.act(r, s) for r in range(R.size) for s in range(R.size)]
    betas += [lambda_of(p) for p in fr.Phi]
    for b in betas:
        if brace(tau(b)) != brace(b):
            fails.append(("brace-tau", b))
        if lambda_of(brace(b)) != b + tau(b):
            fails.append(("lambda-brace", b))
        if brace(lambda_of(brace(b))) != 2 * brace(b):
            fails.append(("brace-lambda-brace", b))
    for p in fr.Phi:
        lp = lambda_of(p)
        if tau(lp) != lp:
            fails.append(("lambda-symmetric", p))
        if lambda_of(brace(lp)) != 2 * lp:
            fails.append(("lambda-brace-lambda", p))
        for r in range(R.size):
            for s in range(R.size):
                lhs = qaction(p, R.add(r, s)) - qaction(p, r) - qaction(p, s)
                if lhs != brace(lp.act(r, s)):
                    fails.append(("polarization", p, r, s))
    return fails


def involution_failures(fr):
    """eps^J eps = 1, (rs)^J = s^J r^J, (r+s)^J = r^J + s^J, checked by brute force."""
    R, J, e = fr.R, fr.J, fr.epsilon
    out = []
    if R.mul(int(J[e]), e) != R.one:
        out.append("eps")
    for r in range(R.size):
        for s in range(R.size):
            if J[R.mul(r, s)] != R.mul(int(J[s]), int(J[r])):
                out.append(("mul", r, s))
            if J[R.add(r, s)] != R.add(int(J[r]), int(J[s])):
                out.append(("add", r, s))
    return out


def distinct_small_codes(fr, max_len, max_rows=2):
    """One row matrix per distinct code spanned by at most two rows of V^N, N <= max_len (zero code included)."""
    import itertools
    R = fr.R
    A, M = fr.V.add_table, fr.V.act_table
    out = []
    for N in range(1, max_len + 1):
        out.append([[0] * N])
        vecs = np.array(list(itertools.product(range(fr.V.size), repeat=N)), dtype=np.int64)[1:]
        pairs = [(i, i) for i in range(len(vecs))]
        if max_rows >= 2:
            pairs += list(itertools.combinations(range(len(vecs)), 2))
        P = np.array(pairs, dtype=np.int64)
        G1, G2 = vecs[P[:, 0]], vecs[P[:, 1]]
        coef = np.array(list(itertools.product(range(R.size), repeat=2)), dtype=np.int64)
        words = A[M[coef[:, 0]][:, G1], M[coef[:, 1]][:, G2]].transpose(1, 0, 2)  # (pairs, coef, N)
        enc = words @ (fr.V.size ** np.arange(N, dtype=np.int64))
        enc.sort(axis=1)
        _, first = np.unique(enc, axis=0, return_index=True)
        for i in sorted(first):
            a, b = P[i]
            out.append([vecs[a].tolist()] if a == b else [vecs[a].tolist(), vecs[b].tolist()])
    return out


def all_generator_matrices(n_elems, max_len, max_rows=2):
    import itertools
    for N in range(1, max_len + 1):
        vecs = list(itertools.product(range(n_elems), repeat=N))
        for k in range(1, max_rows + 1):
            for rows in itertools.product(vecs, repeat=k):
                yield [list(r) for r in rows]
