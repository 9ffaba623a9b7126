"""Monte Carlo zero counts against quadrature of the intensity.

For each weight, degree and region, draws random polynomials, counts zeros,
and reports the z-score of the sample mean against the integrated intensity.

    python3 scripts/mc_vs_quadrature.py --trials 20000 --seed 3
"""

import argparse

from opuczeros import weights as W
from opuczeros.opuc import build_basis
from opuczeros.randompoly import monte_carlo_expected_zeros
from opuczeros.regions import AnnularSector, Annulus, Disk, Rectangle, integrate_intensity

WEIGHTS = {
    "uniform": W.uniform(),
    "bernstein_szego(0.5)": W.bernstein_szego(0.5),
    "trig_poly(2+cos)": W.trig_poly([2.0, 1.0]),
}
REGIONS = {
    "disk(0,0.8)": Disk(0, 0.8),
    "disk(0,1)": Disk(0, 1.0),
    "annulus(0.9,1.1)": Annulus(0, 0.9, 1.1),
    "annulus(1.2,2)": Annulus(0, 1.2, 2.0),
    "sector(0.5,1.5,0,pi/2)": AnnularSector(0, 0.5, 1.5, 0.0, 1.5707963267948966),
    "rect(0.2..1.2,-0.5..0.5)": Rectangle(0.2, 1.2, -0.5, 0.5),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=20000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--degrees", type=int, nargs="+", default=[1, 5, 20])
    args = ap.parse_args()

    print(f"{'weight':22} {'n':>3} {'region':26} {'quad':>9} {'mc':>9} {'stderr':>8} {'z':>6}")
    for wname, spec in WEIGHTS.items():
        basis = build_basis(W.compute_moments(spec, max(args.degrees) + 1))
        for n in args.degrees:
            for k, (rname, region) in enumerate(REGIONS.items()):
                ref = integrate_intensity(basis, n, region, tol=1e-5).value
                rep = monte_carlo_expected_zeros(basis, n, region, args.trials,
                                                 args.seed + 100 * n + k, reference=ref)
                print(f"{wname:22} {n:>3} {rname:26} {ref:9.5f} {rep.mean:9.5f} "
                      f"{rep.stderr:8.5f} {rep.z_score:6.2f}")


if __name__ == "__main__":
    main()
