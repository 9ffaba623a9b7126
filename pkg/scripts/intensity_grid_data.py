"""Write intensity grids (and the limit density) as CSV for external plotting.

    python3 scripts/intensity_grid_data.py --out grids/ --degrees 5 20 --steps 201
"""

import argparse
import json
from pathlib import Path

from opuczeros import weights as W
from opuczeros.intensity import intensity_grid
from opuczeros.opuc import build_basis


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("grids"))
    ap.add_argument("--a", type=float, default=0.5, help="Bernstein-Szego parameter")
    ap.add_argument("--degrees", type=int, nargs="+", default=[1, 5, 20, 40])
    ap.add_argument("--extent", type=float, default=2.0)
    ap.add_argument("--steps", type=int, default=161)
    args = ap.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    spec = W.bernstein_szego(args.a)
    basis = build_basis(W.compute_moments(spec, max(args.degrees) + 1))
    span = (-args.extent, args.extent)
    for n in args.degrees:
        g = intensity_grid(basis, n, span, span, (args.steps, args.steps), weight=spec.to_dict())
        path = args.out / f"intensity_n{n}.csv"
        path.write_text(g.to_csv())
        path.with_suffix(".json").write_text(json.dumps(g.sidecar(), indent=2, sort_keys=True))
        print(f"n={n}: max h {g.values.max():.4g}, {int(g.mask.sum())} points by direct sums -> {path}")


if __name__ == "__main__":
    main()
