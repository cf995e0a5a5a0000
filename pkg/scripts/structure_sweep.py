#!/usr/bin/env python3
"""Sweep the structure-map subspace construction over all admissible indices
for both families, with random membership samples and the distinguished-point
certificates, printing one row per (family, index)."""

import argparse
import random
import time

from gwforms.forms import FormFlavor, hyperbolic
from gwforms.grassmann import (
    orthogonal_complement,
    random_membership_sample,
    structure_distinguished_hgr,
    structure_distinguished_rgr,
    structure_subspace_hgr,
    structure_subspace_rgr,
    tautological_on_chart,
)
from gwforms.serialize import parse_ring_name

ALT, SYM = FormFlavor.ALTERNATING, FormFlavor.SYMMETRIC


def sample_pair(ring, first_flavor, rng):
    fam_u = tautological_on_chart(2, 4, (1, 2), hyperbolic(first_flavor, 2, ring))
    u = orthogonal_complement(fam_u, random_membership_sample(fam_u, rng))
    fam_h = tautological_on_chart(2, 4, (1, 2), hyperbolic(ALT, 2, ring))
    hp = orthogonal_complement(fam_h, random_membership_sample(fam_h, rng))
    return u, hp


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ring", default="GF(7)")
    ap.add_argument("--samples", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    ring = parse_ring_name(args.ring)
    rng = random.Random(args.seed)

    print(f"{'family':>7} {'i':>3} {'samples':>8} {'rank':>5} {'flavor':>12} "
          f"{'unimod':>7} {'tvs':>5} {'time s':>7}")
    for fam, indices in (("hgr", (-1, 0, 1)), ("rgr", (-2, 0, 2))):
        for i in indices:
            t0 = time.perf_counter()
            ok = True
            rank = flavor = None
            for _ in range(args.samples):
                if fam == "hgr":
                    u, hp = sample_pair(ring, ALT, rng)
                    res = structure_subspace_hgr(1, i, u, hp)
                else:
                    u, hp = sample_pair(ring, SYM, rng)
                    res = structure_subspace_rgr(2, i, u, hp)
                rank, flavor = res.rank, res.flavor.value
                ok = ok and res.is_unimodular()
            if fam == "hgr":
                dist = structure_distinguished_hgr(1, i, ring)
            else:
                dist = structure_distinguished_rgr(2, i, ring)
            ok = ok and dist.front_aligned and dist.homotopy_ok
            dt = time.perf_counter() - t0
            print(
                f"{fam:>7} {i:>3} {args.samples:>8} {rank:>5} {flavor:>12} "
                f"{str(ok):>7} {dist.transvection_count:>5} {dt:>7.2f}"
            )


if __name__ == "__main__":
    main()
