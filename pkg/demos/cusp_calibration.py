#!/usr/bin/env python3
"""Beta profile at the tip of the cusp y = |t|^(1 + alpha0).

Prints beta_inf(0, 2^-k), the fitted log-log slope (close to alpha0) and the
square-function verdict for a range of alpha.  The sum converges for
alpha < alpha0 and diverges for alpha > alpha0, but ten scales cannot resolve
alpha close to alpha0: with the default floor, alpha = 0.4 is already called
divergent because its increments r^(0.2) have not dropped below 1e-2.

    python3 demos/cusp_calibration.py --alpha0 0.5 --samples 4000
"""

import argparse

import numpy as np

from conebeta.classify import beta_profile, square_function
from conebeta.synth import SynthSpec, generate


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha0", type=float, default=0.5)
    ap.add_argument("--samples", type=int, default=4000)
    ap.add_argument("--scales", type=int, default=10)
    args = ap.parse_args()

    E, gt = generate(SynthSpec("cusp_graph", sample_count=args.samples, alpha0=args.alpha0))
    x = E.points[gt.notes["origin_index"]]
    prof = beta_profile(E, x, 1, base=2, k_lo=0, k_hi=args.scales - 1)

    print(f"{E.size} points, resolution {E.resolution:.3g}")
    print(" k      r_k      beta")
    for k, r, b in zip(prof.ks, prof.scales, prof.betas):
        print(f"{k:2d}  {r:8.5f}  {b:.5f}")
    slope = np.polyfit(np.log(prof.scales), np.log(prof.betas), 1)[0]
    print(f"log-log slope {slope:.3f} (alpha0 = {args.alpha0})")

    print("alpha  verdict        sum       tail ratio")
    for a in (0.0, 0.25, 0.4, 0.6, 0.75, 0.9):
        sq = square_function(prof, a)
        print(f"{a:5.2f}  {sq.verdict:13s}  {sq.total:9.3g}  {sq.ratio:.3f}")


if __name__ == "__main__":
    main()
