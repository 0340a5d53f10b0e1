"""How far the normal-ordered series for A_j survives in double precision.

For each order j the series matrix is built at double and at extended
precision over growing cutoffs and compared with the spectral matrix.
Prints one row per (j, cutoff).

    python scripts/coeff_precision_scan.py --orders 2 3 --cutoffs 11 21 31 41 61
"""
import argparse
from dataclasses import dataclass, field

from squeezelab import multiboson as mb


@dataclass
class ScanConfig:
    orders: list = field(default_factory=lambda: [2, 3])
    cutoffs: list = field(default_factory=lambda: [11, 16, 21, 26, 31, 41, 61])


def scan(cfg: ScanConfig):
    print("j,cutoff,double_residual,extended_residual")
    for j in cfg.orders:
        for n in cfg.cutoffs:
            dbl = max(mb.series_residuals(j, n, n - 1, precision="double").values())
            ext = max(mb.series_residuals(j, n, n - 1).values())
            print(f"{j},{n},{dbl:.3e},{ext:.3e}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--orders", type=int, nargs="+", default=ScanConfig().orders)
    ap.add_argument("--cutoffs", type=int, nargs="+", default=ScanConfig().cutoffs)
    a = ap.parse_args()
    scan(ScanConfig(a.orders, a.cutoffs))
