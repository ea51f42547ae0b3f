"""Molien series of the preset groups, optionally put over a product of (1 - t^e) factors.

    python scripts/molien_table.py F4-even --degree 64 --den 4,8,12,20
"""

import argparse

from cwtool.cwgroup import build_group, molien
from cwtool.presets import get_formring


def fmt_poly(coeffs):
    terms = [f"{c}t^{i}" if i else str(c) for i, c in enumerate(coeffs) if c]
    return " + ".join(terms) or "0"


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("name")
    ap.add_argument("--degree", type=int, default=64)
    ap.add_argument("--den", help="comma-separated exponents e of the (1 - t^e) denominator")
    a = ap.parse_args()
    G = build_group(get_formring(a.name))
    s = molien(G, a.degree)
    print(f"|G| = {G.order}")
    print("series:", fmt_poly(s.coeffs))
    if a.den:
        exps = [int(x) for x in a.den.split(",")]
        num = [int(x) for x in s.rationalize(exps).to_json()["closed_form"]["num"]]
        print("numerator:", fmt_poly(num))
        print("denominator: prod (1 - t^e), e in", exps)


if __name__ == "__main__":
    main()
