#!/usr/bin/env python3
"""Export OBJ meshes and singular loci for the worked surface examples.

Writes into ./meshes by default:
  cross_cap.obj          parabola pair, cross cap at the origin
  s1_plus.obj            cubic/parabola pair, S1+ at the origin
  s1_minus.obj           helix pair, S1- at the origin
  sin_self_plus.obj      closed-curve self pair (plus)
  sin_self_minus.obj     closed-curve self pair (minus)
  self_regular.obj       regular-curve self pair, S1+ at (0, pi)
plus a <name>.csv singular locus next to each mesh.
"""
import math
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from transurf.cli import write_obj  # noqa: E402
from transurf.surface import export_singular_csv, find_singular_points  # noqa: E402
from transurf.verify import surface_for  # noqa: E402

PI = math.pi

JOBS = [
    ("cross_cap", "s0", (-1.5, 1.5, -1.5, 1.5)),
    ("s1_plus", "s1p", (-1.2, 1.2, -1.2, 1.2)),
    ("s1_minus", "s1m", (-1.5, 1.5, -1.5, 1.5)),
    ("sin_self_plus", "sin_plus", (-PI, PI, -PI, PI)),
    ("sin_self_minus", "sin_minus", (-PI, PI, -PI, PI)),
    ("self_regular", "self_s1p_plus", (-0.8, PI + 0.8, -0.8, PI + 0.8)),
]


def main(outdir="meshes", n=65):
    out = pathlib.Path(outdir)
    n = int(n)
    out.mkdir(exist_ok=True)
    for name, key, window in JOBS:
        s = surface_for(key)
        write_obj(s, window, n, str(out / f"{name}.obj"))
        pts = find_singular_points(s, window, grid_n=48)
        export_singular_csv(pts, str(out / f"{name}.csv"))
        iso = sum(q.isolated for q in pts)
        print(f"{name}: {len(pts)} singular samples ({iso} isolated) "
              f"-> {out / (name + '.obj')}")


if __name__ == "__main__":
    main(*sys.argv[1:])
