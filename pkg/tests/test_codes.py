import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cwtool.codes import (
    Code, SizeExceeded, SparsePoly, check_type, code_from_json, code_size_fast, cwe, cwe_m, dual_and_selfdual_check,
    even_code_check, expand_transform, identity_points, invariance_check, isotropy_check, macwilliams_verify, swe,
)
from cwtool.cwgroup import scalar_center
from cwtool.cyclo import CycMatrix, sqrt_int
from cwtool.finring import units
from cwtool.presets import get_code, get_formring, zn_regular
from helpers import group


def binary_rep():
    return Code(get_formring("binary-II"), [[1, 1]], name="rep2")


def brute_words(C):
    """Codewords by summing all R-combinations of the rows."""
    V = C.fr.V
    out = set()
    for xs in itertools.product(range(C.fr.R.size), repeat=C.k):
        w = np.zeros(C.length, dtype=np.int64)
        for r, g in zip(xs, C.rows):
            w = V.add_table[w, V.act_table[r][g]]
        out.add(tuple(int(x) for x in w))
    return out


def test_enumerate_examples():
    C = Code(get_formring("Z4-rho-a"), [[0, 0]])
    got = list(C.enumerate())
    assert len(got) == 4 and all(not w.any() and mu == 4 for w, mu in got)
    assert C.size == 1
    assert get_code("d8").size == 256
    R = binary_rep()
    assert {tuple(w) for w, mu in R.enumerate()} == {(0, 0), (1, 1)}
    assert all(mu == 1 for _, mu in R.enumerate())


@given(st.sampled_from([2, 3, 4, 6, 8, 9, 12]), st.integers(1, 3), st.integers(1, 4), st.integers(0, 2 ** 32))
def test_fast_size_matches_closure(n, k, N, seed):
    rng = np.random.default_rng(seed)
    C = Code(zn_regular(n), rng.integers(0, n, (k, N)).tolist())
    assert code_size_fast(C) == len(C.codewords()) == len(brute_words(C))


@given(st.integers(1, 3), st.integers(1, 4), st.integers(0, 2 ** 32))
def test_field_size_matches_closure(k, N, seed):
    fr = get_formring("F4-even")
    rng = np.random.default_rng(seed)
    C = Code(fr, rng.integers(0, 4, (k, N)).tolist())
    assert code_size_fast(C) == len(C.codewords()) == len(brute_words(C))


def test_selfdual_examples():
    for name in ["Q4", "d8", "c16", "d16"]:
        d = dual_and_selfdual_check(get_code(name))
        assert d == {"self_orthogonal": True, "self_dual": True}, name
    assert dual_and_selfdual_check(binary_rep())["self_dual"]


def test_isotropy_examples():
    assert isotropy_check(get_code("Q4"))
    assert isotropy_check(get_code("d8"))
    assert not isotropy_check(binary_rep())
    assert not isotropy_check(binary_rep(), exhaustive=True)


@pytest.mark.parametrize("name", ["Q4", "d8", "d8'", "c16", "d16", "e8-hamming", "octacode-QR7", "e8'"])
def test_presets_are_type(name):
    C = get_code(name)
    assert check_type(C)
    if C.size <= 1 << 16:
        assert isotropy_check(C, exhaustive=True)


def test_rho_a_rho_b_distinction():
    # every Phi_a map lies in Phi_b, so Type rho_b implies Type rho_a; the converse fails for d8'
    fa, fb = get_formring("Z4-rho-a"), get_formring("Z4-rho-b")
    assert {p.key() for p in fa.Phi} <= {p.key() for p in fb.Phi}
    assert check_type(get_code("d8", "Z4-rho-a"))
    assert not check_type(get_code("d8'", "Z4-rho-b"))
    assert not check_type(get_code("e8'", "Z4-rho-b"))


def test_cwe_examples():
    assert cwe(binary_rep()) == SparsePoly(2, {(2, 0): 1, (0, 2): 1})
    p = cwe(get_code("Q4"))
    assert p.coefficient_sum() == 16 and p.coefficient((4, 0, 0, 0)) == 1
    assert p.is_homogeneous() and p.degree == 4
    q = cwe_m(binary_rep(), 2)
    assert q == SparsePoly(4, {(2, 0, 0, 0): 1, (0, 2, 0, 0): 1, (0, 0, 2, 0): 1, (0, 0, 0, 2): 1})
    assert cwe_m(get_code("e8-hamming"), 2).coefficient_sum() == 256
    assert cwe_m(get_code("Q4"), 1) == cwe(get_code("Q4"))


def test_streamed_cwe_matches_closure():
    C = get_code("d8")
    direct = cwe(C)
    acc = {}
    mu = C.fr.R.size ** C.k // C.size
    for W in C.stream_words(chunk=97):
        for w in W:
            e = tuple(int(x) for x in np.bincount(w, minlength=4))
            acc[e] = acc.get(e, 0) + 1
    assert SparsePoly(4, {e: c // mu for e, c in acc.items()}) == direct


def test_swe_examples():
    C = get_code("d8")
    assert swe(C, [[0], [1], [2], [3]]) == cwe(C)
    s = swe(C, [[0], [2], [1, 3]])
    assert s.n == 3 and s.coefficient_sum() == 256
    assert swe(C, [[0, 1, 2, 3]]) == SparsePoly(1, {(8,): 256})


def test_invariance_examples():
    x = SparsePoly(2, {(2, 0): 1, (0, 2): 1})
    h = CycMatrix.from_entries(8, [[1, 1], [1, -1]]).scale(sqrt_int(2)[0].inverse())
    assert invariance_check(x, h)
    for name in ["d8", "Q4"]:
        C = get_code(name)
        p = cwe(C)
        for g in group(C.fr.name).generators:
            assert invariance_check(p, g)


def test_invariance_detects_failure():
    p = cwe(binary_rep())
    gens = group("binary-II").generators
    got = [invariance_check(p, g) for g in gens]
    assert got == [False, True]
    assert [invariance_check(p, g, "sampled") for g in gens] == got


def test_sympy_oracle_agrees():
    p = cwe(binary_rep())
    for g in group("binary-II").generators:
        assert (expand_transform(p, g) == {}) == invariance_check(p, g)
    q = cwe(get_code("Q4"))
    for g in group("F4-even").generators:
        assert expand_transform(q, g) == {}


def test_symbolic_cap():
    with pytest.raises(SizeExceeded):
        identity_points(16, 40, cap=1000)


def test_macwilliams_examples():
    fr = get_formring("Z4-rho-a")
    assert macwilliams_verify(Code(fr, [[0]]))
    assert macwilliams_verify(Code(fr, [[1, 0], [0, 1]]))
    fb = get_formring("binary-II")
    assert macwilliams_verify(Code(fb, [[1, 1, 0], [0, 1, 1]]))
    assert macwilliams_verify(Code(zn_regular(3), [[1, 2, 0]]))


def test_even_code_examples():
    assert even_code_check(get_code("e8-hamming"))
    assert even_code_check(get_code("Q4"))
    assert not even_code_check(binary_rep())


def test_center_divides_lengths():
    for name in ["Q4", "d8", "d8'", "c16", "d16", "e8-hamming", "octacode-QR7"]:
        C = get_code(name)
        assert C.length % scalar_center(group(C.fr.name)) == 0


def test_cwe_invariant_under_unit_permutations():
    # the Type rho enumerators are symmetric under x_v -> x_{rv}
    C = get_code("d16")
    p = cwe(C)
    fr = C.fr
    for r in units(fr.R):
        perm = fr.V.act_table[r]
        q = SparsePoly(p.n, {tuple(e[perm[v]] for v in range(p.n)): c for e, c in p.terms.items()})
        assert q == p
    assert p.coefficient_sum() == 65536


def test_json_code():
    C = code_from_json({"formring": "F4-even", "length": 4, "rows": [["1", "1", "1", "1"], ["0", "1", "w", "w^2"]]})
    assert C.size == 16 and check_type(C)
