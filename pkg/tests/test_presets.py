import pytest

from cwtool.codes import check_type
from cwtool.presets import (
    CODE_NAMES, UnknownPreset, formring_from_json, formring_to_json, get_code, get_code_spec, get_formring,
    hensel_lift_z4,
)
from cwtool.qform import form_ring_validate


def test_q4_rows():
    C = get_code("Q4")
    R = C.fr.R
    want = [[R.parse(x) for x in r] for r in [["1", "1", "1", "1"], ["0", "1", "w", "w^2"]]]
    assert [list(map(int, r)) for r in C.rows] == want


def test_d8_rows():
    rows = get_code_spec("d8").rows
    assert rows == [[1, 3, 1, 0, 0, 1, 0, 2], [1, 3, 0, 1, 0, 2, 1, 0], [1, 3, 0, 0, 1, 0, 2, 1],
                    [2, 2, 0, 0, 0, 0, 0, 0], [2, 0, 2, 2, 2, 0, 0, 0]]
    primed = get_code_spec("d8'").rows
    assert [r[0] for r in primed] == [3 * r[0] % 4 for r in rows]
    assert [r[1:] for r in primed] == [r[1:] for r in rows]


def test_e8_hamming():
    C = get_code("e8-hamming")
    assert (C.length, C.size) == (8, 16)
    assert min(int((w != 0).sum()) for w in C.codewords() if w.any()) == 4
    assert check_type(C)


def test_hensel_lift_octacode():
    C = get_code("octacode-QR7")
    assert (C.length, C.size) == (8, 256)
    assert check_type(C)
    # x^3 + x + 1 over F2 lifts to a factor of x^7 - 1 over Z/4Z
    g = hensel_lift_z4([1, 1, 0, 1])
    assert [c % 2 for c in g] == [1, 1, 0, 1]


@pytest.mark.parametrize("name", ["binary-II", "F4-even", "Z4-rho-a", "Z4-rho-b", "F4u"])
def test_json_roundtrip(name):
    fr = get_formring(name)
    again = formring_from_json(formring_to_json(name))
    assert again.R.size == fr.R.size
    assert {p.key() for p in again.Phi} == {p.key() for p in fr.Phi}


@pytest.mark.parametrize("name", ["binary-II", "F4-even", "Z4-rho-a", "Z4-rho-b"])
def test_presets_validate(name):
    fr = get_formring(name)
    again = form_ring_validate(fr.R, fr.V, fr.beta, fr.meta["phi_generators"])
    assert len(again.Phi) == len(fr.Phi)


def test_unknown():
    with pytest.raises(UnknownPreset):
        get_formring("nope")
    with pytest.raises(UnknownPreset):
        get_code("nope")


def test_general_rho_family():
    fa, fb = get_formring("Z2f-rho-a(3)"), get_formring("Z2f-rho-b(3)")
    assert fa.R.size == fb.R.size == 8
    assert len(fa.Phi) < len(fb.Phi)
    assert {p.key() for p in fa.Phi} <= {p.key() for p in fb.Phi}


def test_code_names_resolve():
    for name in CODE_NAMES:
        spec = get_code_spec(name)
        assert spec.formring in ("binary-II", "F4-even", "Z4-rho-a", "Z4-rho-b")
