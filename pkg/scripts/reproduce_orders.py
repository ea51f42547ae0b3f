"""Print group order, scalar center and hyperbolic co-unitary data for each genus-1 preset."""

import argparse
import json

from cwtool.cwgroup import build_group, scalar_center
from cwtool.hypco import u_closure
from cwtool.presets import get_formring

DEFAULT = ["binary-II", "F4-even", "Z4-rho-a", "Z4-rho-b", "F4u"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("names", nargs="*", default=DEFAULT)
    ap.add_argument("--genus", type=int, default=1)
    a = ap.parse_args()
    rows = []
    for name in a.names:
        fr = get_formring(name)
        G = build_group(fr, a.genus)
        row = {"formring": name, "genus": a.genus, "order": G.order, "center": scalar_center(G)}
        if a.genus == 1:
            cl = u_closure(fr)
            row.update(U=cl.order, ker_pi=cl.ker_pi_order, pi_image=cl.pi_image_order)
        rows.append(row)
        print(json.dumps(row, sort_keys=True))


if __name__ == "__main__":
    main()
