"""Uncertainty product over one period for several squeeze strengths.

Prints the closed-form variances next to the Heisenberg-picture Fock values
and the largest relative gap per r. The product oscillates between 1/4 and
(1/4)[1 + (s^2 - s^-2)^2 / 4] twice per period.
"""
import argparse

import numpy as np

from squeezelab import analytic as an
from squeezelab import gates as gt


def main(rs, alpha, points, cutoff):
    t = np.linspace(0, 2 * np.pi, points)
    print("r,alpha,max_product,min_product,max_rel_gap")
    for r in rs:
        spec = gt.SqueezeSpec(r)
        u = an.uncertainty_evolution(spec, t)
        vx, vp = an.heisenberg_variances(gt.squeezed_state(alpha, spec, None, cutoff), t)
        gap = max(np.max(np.abs(u.var_x / vx - 1)), np.max(np.abs(u.var_p / vp - 1)))
        print(f"{r:g},{alpha:g},{u.product.max():.12f},{u.product.min():.12f},{gap:.2e}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--r", type=float, nargs="+", default=[0.25, 0.5, 1.0])
    ap.add_argument("--alpha", type=float, default=1.0)
    ap.add_argument("--points", type=int, default=257)
    ap.add_argument("--cutoff", type=int, default=256)
    a = ap.parse_args()
    main(a.r, a.alpha, a.points, a.cutoff)
