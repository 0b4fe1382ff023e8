"""Print the determinant/trace angle table and the special rotation matrices."""

import argparse
import math

from isodil.matrix2 import AngleKind, angle_table, rotation_matrix


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--det-max", type=int, default=5)
    parser.add_argument("--trace-max", type=int, default=4)
    args = parser.parse_args()

    rows = angle_table(args.det_max, args.trace_max)
    for row in rows:
        theta = row.angle.theta_abs
        deg = "" if theta is None or not row.applicable else f"{math.degrees(theta):12.7f} deg"
        print(f"det={row.delta:<3} tr={row.tau:<3} {row.kind_label:<16} {row.exact_label:<18} {deg}")

    print()
    for multiple, label in [(0, "tau = 0"), (1, "tau^2 = det"), (2, "tau^2 = 2 det"), (3, "tau^2 = 3 det")]:
        tau, delta = {0: (0, 1), 1: (1, 1), 2: (2, 2), 3: (3, 3)}[multiple]
        R = rotation_matrix(tau, delta)
        print(f"{label:<14} R = [[{R[0, 0]: .6f}, {R[0, 1]: .6f}], [{R[1, 0]: .6f}, {R[1, 1]: .6f}]]")

    special = sum(r.angle.kind is AngleKind.SPECIAL for r in rows if r.applicable)
    irrational = sum(r.angle.kind is AngleKind.INCOMMENSURABLE for r in rows if r.applicable)
    print(f"\n{special} special cells, {irrational} incommensurable cells")


if __name__ == "__main__":
    main()
