"""Uplink coverage walkthrough.

Derives the rate-control constant for a target success probability,
verifies that the rate rule inverts back to the target at any distance,
and compares the closed-form mean-rate expressions against adaptive
quadrature.
"""

import numpy as np

from hlf_aoi.uplink import (CLOSED_FORM_VARIANTS, NetworkConfig,
                            closed_form_mean_rate, composite_m,
                            mean_target_rate, select_closed_form_variant,
                            stp_at_distance, target_rate_at_distance,
                            transmission_latency)


def main() -> None:
    cfg = NetworkConfig()
    print(f"target STP          : {cfg.target_stp}")
    print(f"rate-control constant m = {composite_m(cfg):.6g}")
    print()

    print("distance-adaptive rate and its inversion")
    print(f"{'r [m]':>8} {'rate [bit/s]':>14} {'STP at rate':>12}")
    for r in (25.0, 50.0, 100.0, 200.0, 400.0):
        rate = target_rate_at_distance(r, cfg)
        back = stp_at_distance(r, rate, cfg)
        print(f"{r:8.0f} {rate:14.1f} {back:12.10f}")
    print()

    print("mean target rate over the source distribution")
    quad = mean_target_rate(cfg)
    print(f"  quadrature reference : {quad:.6f} bit/s")
    for variant in CLOSED_FORM_VARIANTS:
        value = closed_form_mean_rate(cfg, variant)
        rel = abs(value / quad - 1.0)
        print(f"  {variant:<18} : {value:14.6f}  (rel dev {rel:.3e})")
    selected, _ = select_closed_form_variant(cfg)
    print(f"  selected variant     : {selected}")
    print()

    print("transmission latency per target STP")
    for zeta in np.arange(0.3, 1.0, 0.1):
        lat = transmission_latency(NetworkConfig(target_stp=round(zeta, 1)))
        print(f"  STP {zeta:.1f} -> {lat:.3f} s")


if __name__ == "__main__":
    main()
