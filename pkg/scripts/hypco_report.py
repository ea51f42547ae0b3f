"""Check that the Clifford-Weil group is a projective image of the hyperbolic co-unitary group."""

import argparse
import json

from cwtool.hypco import projective_consistency
from cwtool.presets import get_formring


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("names", nargs="*", default=["binary-II", "F4-even", "Z4-rho-a", "Z4-rho-b", "F4u"])
    ap.add_argument("--genus", type=int, default=1)
    ap.add_argument("--words", type=int, default=100)
    a = ap.parse_args()
    for name in a.names:
        out = projective_consistency(get_formring(name), a.genus, words=a.words)
        print(json.dumps({"formring": name, **out}, sort_keys=True))


if __name__ == "__main__":
    main()
