"""Render |phi_hat| and the reconstructed phi for a few dilation matrices."""

import argparse
import math
from pathlib import Path

from isodil.cli import main as cli_main

MATRICES = ["1,-1;1,1", "0,-2;1,1", "1,-2;1,1", "0,-1;2,0"]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="gallery")
    parser.add_argument("--grid", type=int, default=256)
    parser.add_argument("--mask", default=str(Path(__file__).resolve().parent.parent / "masks" / "haar2.json"))
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for text in MATRICES:
        stem = text.replace(",", "_").replace(";", "__").replace("-", "m")
        for mode, extent in (("freq", 4 * math.pi), ("spatial", 8 * math.pi)):
            cli_main([
                "render", text, "--mask", args.mask, "--grid", str(args.grid),
                "--extent", repr(extent), "--mode", mode, "--out", str(out / f"{stem}_{mode}.pgm"),
            ])


if __name__ == "__main__":
    main()
