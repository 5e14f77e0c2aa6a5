"""Refinement study of the leapfrog scheme against d'Alembert, plus dispersion.

Halves h and k together at fixed lambda and prints the max-norm error and
observed order, then compares the measured phase speed of a wave packet with
the continuous and discrete dispersion relations.
"""
import argparse
from dataclasses import dataclass

from sttf.oracles import (
    convergence_orders,
    discrete_wave_frequency,
    gaussian_data,
    leapfrog_error,
    measured_dispersion,
    wave_leapfrog,
)


@dataclass
class StudyConfig:
    alpha: float = 1.0
    lam: float = 0.25
    h0: float = 0.1
    levels: int = 5
    t_end: float = 1.0
    kappa: float = 3.0


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", type=float, default=StudyConfig.alpha)
    ap.add_argument("--lam", type=float, default=StudyConfig.lam)
    ap.add_argument("--levels", type=int, default=StudyConfig.levels)
    args = ap.parse_args()
    cfg = StudyConfig(alpha=args.alpha, lam=args.lam, levels=args.levels)

    ratio = cfg.lam ** 0.5 / cfg.alpha  # k = ratio * h
    data = gaussian_data(cfg.alpha)
    hs = [cfg.h0 / 2**i for i in range(cfg.levels)]
    errs = [leapfrog_error(data, h, ratio * h, 4.0 + cfg.alpha * cfg.t_end, cfg.t_end) for h in hs]
    orders = [float("nan")] + convergence_orders(errs)
    print(f"{'h':>10} {'error':>12} {'order':>7}")
    for h, e, p in zip(hs, errs, orders):
        print(f"{h:10.5f} {e:12.4e} {p:7.3f}")

    h = 0.05
    k = ratio * h
    packet = gaussian_data(cfg.alpha, width=1.0, kappa=cfg.kappa, travelling=True)
    steps = 400
    sim = wave_leapfrog(packet, h, k, 13.0 + cfg.alpha * k * steps, steps)
    kap, w = measured_dispersion(sim, cfg.kappa)
    print(f"\nkappa={kap:.4f}: measured omega {w:.6f}, "
          f"continuous {cfg.alpha * kap:.6f}, scheme {discrete_wave_frequency(cfg.alpha, h, k, kap):.6f}")


if __name__ == "__main__":
    main()
