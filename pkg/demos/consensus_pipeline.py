"""Ledger commit pipeline simulation and latency fitting.

Runs the discrete-event commit pipeline, extracts consensus latencies
for the monitored key, fits a Gamma distribution by maximum
likelihood, and shows how write contention drives the invalid
fraction up.
"""

from hlf_aoi.latency import (TARGET_KEY, LatencyDist, PipelineConfig,
                             consensus_latency_samples, fit_gamma_mle,
                             ks_distance, run_pipeline)


def main() -> None:
    cfg = PipelineConfig()
    records = run_pipeline(cfg, duration=2000.0, seed=0)
    committed = [tx for tx in records if tx.verdict != "pending"]
    invalid = sum(1 for tx in committed if tx.verdict == "mvcc_invalid")
    print(f"transactions submitted : {len(records)}")
    print(f"transactions committed : {len(committed)}")
    print(f"invalid fraction       : {invalid / len(committed):.4f}")

    samples = consensus_latency_samples(records, key=TARGET_KEY)
    fit = fit_gamma_mle(samples)
    print()
    print(f"consensus latency on key {TARGET_KEY} ({len(samples)} samples)")
    print(f"  fitted shape : {fit.shape:.3f}")
    print(f"  fitted rate  : {fit.rate:.3f}")
    print(f"  mean         : {fit.mean:.3f} s")
    print(f"  KS distance  : {ks_distance(samples, fit):.4f}")

    print()
    print("write contention on a single key (common random numbers)")
    print(f"{'tx rate [/s]':>13} {'invalid fraction':>17}")
    for rate in (0.5, 1.0, 2.0, 4.0, 8.0):
        single = PipelineConfig(key_count=1, target_key_fraction=1.0,
                                tx_rate=rate,
                                endorse_latency=LatencyDist.gamma(2.0, 4.0),
                                validate_latency=LatencyDist.gamma(2.0, 8.0))
        rows = [tx for tx in run_pipeline(single, 400.0, seed=1)
                if tx.verdict != "pending"]
        frac = sum(1 for tx in rows if tx.verdict == "mvcc_invalid") / len(rows)
        print(f"{rate:13.1f} {frac:17.4f}")


if __name__ == "__main__":
    main()
