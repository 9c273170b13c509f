"""Age-of-information violation probability, three ways.

Evaluates the closed-form series, adaptive quadrature, and a renewal
Monte Carlo estimate over a grid of age targets for one operating
point, and prints the three columns side by side.
"""

from hlf_aoi.aoi import (AoiQuery, model_for_stp, violation_probability,
                         violation_probability_mc)
from hlf_aoi.config import load_config
from hlf_aoi.uplink import NetworkConfig


def main() -> None:
    config = load_config()
    zeta = 0.5
    model = model_for_stp(NetworkConfig(target_stp=zeta),
                          config.require_fits()[zeta], zeta)
    print(f"target STP {zeta}: transmission latency {model.tx_latency:.3f} s, "
          f"effective update rate {model.effective_rate:.2f} /s")
    print()
    print(f"{'v [s]':>6} {'analytic':>12} {'method':>10} "
          f"{'monte carlo':>12} {'3 SE':>10}")
    for i, v in enumerate((1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0)):
        query = AoiQuery(v)
        analytic, method = violation_probability(model, query)
        mc = violation_probability_mc(model, query, cycles=200_000, seed=i)
        print(f"{v:6.1f} {analytic:12.6f} {method:>10} "
              f"{mc.violation_fraction:12.6f} {3 * mc.std_error:10.6f}")


if __name__ == "__main__":
    main()
