"""Reliability versus freshness trade-off.

Sweeps the target success probability and reports the violation
probability of a fixed age target.  A higher target makes each update
more likely to arrive but slows transmission and thins the effective
update stream, so an interior optimum can appear when updates are
scarce.
"""

from hlf_aoi.aoi import sweep_target_stp
from hlf_aoi.config import load_config
from hlf_aoi.uplink import NetworkConfig


def main() -> None:
    config = load_config()
    # an update-scarce regime: slow sources, dense deployment
    net = NetworkConfig(gen_rate=2.0, bs_density=3e-5, source_density=3e-5)
    v = 4.0
    rows, zeta_star = sweep_target_stp(net, config.require_fits(), v)
    print(f"violation probability of age target {v} s per target STP")
    print(f"{'STP':>5} {'tx latency [s]':>15} {'probability':>12} {'method':>11}")
    for zeta, latency, prob, method in rows:
        marker = "  <- optimum" if zeta == zeta_star else ""
        lat = f"{latency:15.3f}" if latency != float("inf") else f"{'inf':>15}"
        print(f"{zeta:5.1f} {lat} {prob:12.6f} {method:>11}{marker}")
    print()
    print(f"best target STP: {zeta_star}")


if __name__ == "__main__":
    main()
