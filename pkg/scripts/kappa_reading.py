"""Which denominator in the chirp parameter reproduces the squeezed state.

The chirp kappa = z2 sinh r / (2 r D) can be read with D equal to the width S
or to s = e^r. Both readings are compared with the Fock-sum oracle for a sweep
of squeeze phases; only one of them stays at rounding level.
"""
import argparse
import math

import numpy as np

from squeezelab import analytic as an
from squeezelab import gates as gt


def main(r: float, alpha: complex, cutoff: int, n_theta: int):
    x = an.GridSpec().points()
    x0, p0 = an.xp_from_alpha(alpha)
    print("theta,dev_width_reading,dev_exp_reading")
    for theta in np.linspace(0, math.pi, n_theta):
        spec = gt.SqueezeSpec.polar(r, theta)
        ref = an.fock_sum(gt.squeezed_state(alpha, spec, None, cutoff), x)
        dev = [float(np.max(np.abs(an.squeezed_wavefunction(x0, p0, spec, x, reading) - ref)))
               for reading in ("S", "s")]
        print(f"{theta:.4f},{dev[0]:.3e},{dev[1]:.3e}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--r", type=float, default=0.5)
    ap.add_argument("--alpha-re", type=float, default=0.4)
    ap.add_argument("--alpha-im", type=float, default=0.3)
    ap.add_argument("--cutoff", type=int, default=256)
    ap.add_argument("--n-theta", type=int, default=9)
    a = ap.parse_args()
    main(a.r, complex(a.alpha_re, a.alpha_im), a.cutoff, a.n_theta)
