#!/usr/bin/env python3
"""Closed-form constants, corner-cell energies, identity residuals and the inequality suite."""

import argparse
from pathlib import Path

from twoholes import cell as C


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/cell")
    ap.add_argument("--R", type=float, default=C.DEFAULT_R)
    ap.add_argument("--density", type=int, default=C.DEFAULT_DENSITY)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    kw = dict(R=args.R, density=args.density)

    lines = ["# constants"] + C.summary_lines(C.constants_checks())
    lines += ["", "# identities"]
    for a, b in ((1.0, 1.0), (1.5, 1.0), (2.0, 1.0), (1.5, 1.5)):
        lines += C.general_identity_residuals(a, b, **kw).lines()
    lines += ["", "# threshold"] + C.summary_lines(C.threshold_check(**kw))
    lines += ["", "# monotonicity"] + C.summary_lines(C.monotonicity_checks(**kw))
    lines += ["", "# lower bounds"] + C.summary_lines(C.j_lower_checks(**kw) + C.family_lower_checks(**kw) + C.jhp_checks())
    lines += ["", "# quadratic bounds (rest on I = aJ)"] + C.summary_lines(C.quadratic_bound_checks(**kw))
    lines += ["", "# same-corner samples"] + C.summary_lines(C.same_corner_checks(**kw))
    g = C.gamma_K_estimate(**kw)
    lines += ["", "# half-plane tangent cell", f"M_K = {g.mk:.6f} +- {g.error:.2e}, 2 J_inf = {2 * C.JINF:.6f}, Gamma_K = {g.gamma_k:.6f}"]
    lines.append(f"Richardson E(1) = {C.richardson_E(1.0, args.R):.6f}")
    (out / "summary.txt").write_text("\n".join(lines) + "\n")
    print("\n".join(lines))


if __name__ == "__main__":
    main()
