#!/usr/bin/env python3
"""Small-radius fits of lambda_1 - pi^2/2 and the one/two-corner additivity."""

import argparse
from pathlib import Path

from twoholes import bench as B
from twoholes import cell as C
from twoholes.svg import line_plot

BRANCHES = ("corner_one_hole", "side_center", "side_at:0.5", "adjacent", "opposite", "cluster")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/scaling")
    ap.add_argument("--radii", default=",".join(map(str, B.DEFAULT_SCALING_RADII)))
    ap.add_argument("--jobs", type=int, default=None)
    args = ap.parse_args()
    radii = tuple(float(x) for x in args.radii.split(","))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    fits = {b: B.scaling_fit(b, radii, jobs=args.jobs) for b in BRANCHES}
    lines = []
    for f in fits.values():
        lines += f.lines()
    ok, got, expect = B.side_ratio_check(fits["side_center"], fits["side_at:0.5"], 0.5)
    lines.append(f"side coefficient ratio xi=0 / xi=0.5: {got:.4f} (cos^2 prediction {expect:.4f}) {'pass' if ok else 'FAIL'}")
    lines.append(
        f"side coefficient {fits['side_center'].limit_coefficient:.4f} vs (pi^2/4)(J_inf + pi) = "
        f"{B.side_coefficient_prediction():.4f}"
    )
    e1 = C.energy_E(1.0)
    lines.append(
        f"corner coefficient {fits['corner_one_hole'].limit_coefficient:.4f} vs (pi^4/16)(E(1) + 5pi/2) = "
        f"{B.corner_coefficient_prediction(e1.energy):.4f} with E(1) = {e1.energy:.4f}"
    )
    add = B.additivity_check(radii, jobs=args.jobs, cell_energy=e1.energy)
    lines += add.lines()
    series = {b: (list(f.radii), list(f.deltas)) for b, f in fits.items() if b != "cluster"}
    (out / "deltas.svg").write_text(line_plot(series, "eigenvalue shift", "r", "lambda - pi^2/2"))
    rows = ["branch,r,delta"] + [f"{b},{r:g},{d:.12e}" for b, f in fits.items() for r, d in zip(f.radii, f.deltas)]
    (out / "scaling.csv").write_text("\n".join(rows) + "\n")
    (out / "summary.txt").write_text("\n".join(lines) + "\n")
    print("\n".join(lines))


if __name__ == "__main__":
    main()
