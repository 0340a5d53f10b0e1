"""Where the factored gate products stop being trustworthy.

For D(alpha) the three-factor product cancels large terms at high
occupation. This prints, per column n, the entrywise gap to the direct
exponential next to the rounding bound used to choose comparison windows.
"""
import argparse

import numpy as np

from squeezelab import fock as fk
from squeezelab import gates as gt


def main(alpha: complex, cutoff: int, stride: int):
    a = fk.lowering(cutoff)
    exact = gt._displace(a, 1, alpha, "exp")
    factors = gt._displace_factors(a, 1, alpha)
    prod = gt._product(factors)
    bound = gt.bch_error_bound(factors)
    gap = np.max(np.abs(exact.mat - prod.mat), axis=0)
    print("column,gap,bound")
    for n in range(0, cutoff, stride):
        print(f"{n},{gap[n]:.3e},{bound[n]:.3e}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--alpha-re", type=float, default=1.2)
    ap.add_argument("--alpha-im", type=float, default=0.3)
    ap.add_argument("--cutoff", type=int, default=256)
    ap.add_argument("--stride", type=int, default=16)
    a = ap.parse_args()
    main(complex(a.alpha_re, a.alpha_im), a.cutoff, a.stride)
