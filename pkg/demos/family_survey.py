#!/usr/bin/env python3
"""Classify every point of each synthetic family and compare with ground truth.

For each family the script reports the share of summable, divergent and
indeterminate alpha = 0 verdicts, the share of points with a cone certificate
and the agreement with the generator's cone labels.

    python3 demos/family_survey.py            # default sizes, base 10
    python3 demos/family_survey.py --base 2   # more scales, slower
"""

import argparse
import time

import numpy as np

from conebeta.classify import ClassifyParams, classify_points
from conebeta.synth import SynthSpec, generate

SPECS = [SynthSpec("plane"), SynthSpec("plane", n=3, d=2, sample_count=900), SynthSpec("lipschitz_graph"),
         SynthSpec("cusp_graph"), SynthSpec("two_lines"), SynthSpec("spiral"), SynthSpec("koch", depth=4),
         SynthSpec("cantor4", depth=5)]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--base", type=float, default=10.0)
    args = ap.parse_args()

    print(f"{'family':16s} {'n/d':>4s} {'points':>6s} {'summ':>6s} {'div':>6s} {'indet':>6s} "
          f"{'cert':>6s} {'truth':>6s} {'secs':>5s}")
    for spec in SPECS:
        t0 = time.perf_counter()
        E, gt = generate(spec)
        rep = classify_points(E, ClassifyParams(d=spec.d, base=args.base))
        s = rep.summary["alpha=0"]
        verdicts = np.array([lab.squares[0.0].verdict for lab in rep.labels])
        truth = np.where(verdicts == "summable", gt.cone, (verdicts == "divergent") & ~gt.cone).mean()
        print(f"{spec.family:16s} {spec.n}/{spec.d:<2d} {E.size:6d} {s['summable']:6.1%} {s['divergent']:6.1%} "
              f"{s['indeterminate']:6.1%} {s['certified']:6.1%} {truth:6.1%} {time.perf_counter() - t0:5.1f}")


if __name__ == "__main__":
    main()
