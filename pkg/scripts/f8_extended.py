"""The F8-even computation: group order, Molien series to degree 240 and its numerator over
(1-t^8)^2 (1-t^16)^2 (1-t^24)^2 (1-t^56) (1-t^72). Takes a minute or two."""

import time

from cwtool.cwgroup import build_group, molien, scalar_center
from cwtool.presets import get_formring

DEN = [8, 8, 16, 16, 24, 24, 56, 72]


def main():
    t0 = time.time()
    G = build_group(get_formring("F8-even"))
    print(f"|G| = {G.order}, |Z| = {scalar_center(G)}  ({time.time() - t0:.1f}s)")
    s = molien(G, 240)  # slack past the degree-216 numerator
    num = [int(x) for x in s.rationalize(DEN).to_json()["closed_form"]["num"]]
    print("numerator coefficients (degree: coeff):")
    print({i: c for i, c in enumerate(num) if c})
    print(f"total {time.time() - t0:.1f}s")


if __name__ == "__main__":
    main()
