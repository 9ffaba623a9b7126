"""Relative deviation of h_n from the limit intensity as n grows.

Prints one CSV row per (weight, |z|, n) along a single ray, with radii on
both sides of the unit circle.

    python3 scripts/convergence_study.py --nmax 60 --angle 0.7
"""

import argparse

import numpy as np

from opuczeros import weights as W
from opuczeros.intensity import convergence_profile
from opuczeros.opuc import build_basis

FAMILIES = {
    "uniform": W.uniform(),
    "bernstein_szego(0.5)": W.bernstein_szego(0.5),
    "trig_poly(2+cos)": W.trig_poly([2.0, 1.0]),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nmax", type=int, default=40)
    ap.add_argument("--angle", type=float, default=0.7)
    ap.add_argument("--radii", type=float, nargs="+", default=[0.3, 0.6, 0.8, 0.95, 1.05, 1.3, 2.0, 3.0])
    args = ap.parse_args()

    n_list = sorted({1, 2, 5, 10, 20, args.nmax} | set(range(10, args.nmax + 1, 10)))
    n_list = [n for n in n_list if n <= args.nmax]
    print("weight,r,n,h,rel_dev")
    for name, spec in FAMILIES.items():
        basis = build_basis(W.compute_moments(spec, args.nmax + 1))
        for r in args.radii:
            z = r * np.exp(1j * args.angle)
            for n, h, dev in convergence_profile(basis, z, n_list):
                print(f"{name},{r},{n},{h:.12e},{dev:.3e}")


if __name__ == "__main__":
    main()
