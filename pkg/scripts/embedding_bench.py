#!/usr/bin/env python3
"""Timing study: certified hyperbolic embeddings across rings and sizes.

Generates random alternating unimodular Gram matrices, runs the split
embedding plus the shuffle onto the plane-wise standard space, and prints a
per-(ring, size) table of timings.  Every certificate is re-verified by
construction, so the timings measure fully checked runs.
"""

import argparse
import random
import time

from gwforms.forms import embed_into_hyperbolic, shuffle_isometry
from gwforms.rings import GF, QQ, ZZ
from gwforms.sampling import random_alternating_unimodular


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--reps", type=int, default=25)
    ap.add_argument("--sizes", type=int, nargs="+", default=[2, 4, 6, 8])
    args = ap.parse_args()

    rng = random.Random(args.seed)
    rings = [("ZZ", ZZ()), ("QQ", QQ()), ("GF(5)", GF(5))]
    print(f"{'ring':>8} {'size':>5} {'reps':>5} {'total s':>9} {'per case ms':>12}")
    for name, ring in rings:
        for size in args.sizes:
            spaces = [
                random_alternating_unimodular(ring, size, rng)
                for _ in range(args.reps)
            ]
            t0 = time.perf_counter()
            for s in spaces:
                iso = embed_into_hyperbolic(s)
                iso.compose(shuffle_isometry(iso.target))
            dt = time.perf_counter() - t0
            print(
                f"{name:>8} {size:>5} {args.reps:>5} {dt:>9.3f} "
                f"{1000 * dt / args.reps:>12.2f}"
            )


if __name__ == "__main__":
    main()
