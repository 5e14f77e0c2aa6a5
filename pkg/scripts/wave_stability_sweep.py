"""Classify the discretized wave equation over a range of CFL numbers.

For each lambda the cleared symbol is run through the two-condition test;
the table shows the verdict, the number of unit-circle and interior
witnesses and, beyond the CFL limit, the interior root at theta1 = pi.
"""
import argparse
import math
from dataclasses import dataclass, field

import numpy as np

from sttf.stability import clear_negative_exponents, huang_test, wave_q0


@dataclass
class SweepConfig:
    lams: list = field(default_factory=lambda: [0.1, 0.25, 0.5, 0.75, 1.0, 1.1, 1.5, 2.0, 4.0])
    resolution: int = 1024


def inside_root_at_pi(lam: float) -> float:
    # z2^2 + (4 lam - 2) z2 + 1 = 0; real roots only when lam > 1
    b = 4 * lam - 2
    disc = b * b - 4
    return (-b + math.sqrt(disc)) / 2 if disc > 0 else math.nan


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--resolution", type=int, default=SweepConfig.resolution)
    ap.add_argument("--lam", type=float, nargs="*")
    args = ap.parse_args()
    cfg = SweepConfig(resolution=args.resolution)
    if args.lam:
        cfg.lams = args.lam
    print(f"{'lambda':>7} {'verdict':>9} {'circle':>7} {'inside':>7} {'root@pi':>12}")
    for lam in cfg.lams:
        r = huang_test(clear_negative_exponents(wave_q0(lam)), cfg.resolution)
        root = inside_root_at_pi(lam)
        root_txt = "-" if np.isnan(root) else f"{root:.6f}"
        print(f"{lam:7.3f} {r.verdict.value:>9} {len(r.circle_witnesses):7d} "
              f"{len(r.inside_witnesses):7d} {root_txt:>12}")


if __name__ == "__main__":
    main()
