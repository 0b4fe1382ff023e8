"""Two-angle residuals over matrices, j' and truncation depth.

Shows how the plain truncated product is limited by its first-order phase
tail, and what the corrected product reaches.
"""

import argparse
import itertools
import math

from isodil.matrix2 import IntMatrix2, classify_angle, is_rotational
from isodil.refine import Mask, power_identity_residual, verify_two_angle


def two_tap(delta):
    r = math.sqrt(delta) / 2
    return Mask({(0, 0): r, (1, 0): r}, delta)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--bound", type=int, default=2)
    parser.add_argument("--samples", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--jmax", type=int, default=5)
    args = parser.parse_args()

    mats = [
        M for M in (IntMatrix2(*e) for e in itertools.product(range(-args.bound, args.bound + 1), repeat=4))
        if is_rotational(M) and M.det >= 2
    ]
    print(f"{len(mats)} rotational matrices with entries in [-{args.bound}, {args.bound}]")
    print(f"{'matrix':<12} {'det':>3} {'angle':<18} {'depth':>5} {'plain':>10} {'corrected':>10} {'power':>10}")
    for A in mats:
        mask = two_tap(A.det)
        label = classify_angle(A).exact_label
        power = max(power_identity_residual(A, j) for j in range(1, args.jmax + 1))
        for depth in (20, 40):
            plain = corrected = 0.0
            for j in range(1, args.jmax + 1):
                plain = max(plain, verify_two_angle(mask, A, j, args.samples, args.seed, depth,
                                                    tail_correction=False))
                corrected = max(corrected, verify_two_angle(mask, A, j, args.samples, args.seed, depth))
            print(f"{str(A):<12} {A.det:>3} {label:<18} {depth:>5} {plain:10.2e} {corrected:10.2e} {power:10.2e}")


if __name__ == "__main__":
    main()
