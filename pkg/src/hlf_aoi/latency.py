"""Consensus-latency modeling.

Two halves: (1) Gamma-distribution machinery (maximum-likelihood fitting
with Thom's starting value, exact sampling) for the measured consensus
latency of a permissioned ledger, and (2) a discrete-event simulator of
the endorse / order / validate pipeline with MVCC invalidation, which
stands in for a physical testbed as the source of latency samples.
"""

from __future__ import annotations

import csv
import heapq
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import specfun
from .specfun import DomainError

__all__ = [
    "GammaParams",
    "LatencyDist",
    "PipelineConfig",
    "TxRecord",
    "run_pipeline",
    "consensus_latency_samples",
    "fit_gamma_mle",
    "sample_gamma",
    "ks_distance",
    "write_latency_csv",
    "read_latency_samples",
]


@dataclass(frozen=True)
class GammaParams:
    """Shape/rate pair for a Gamma-distributed consensus latency."""

    shape: float
    rate: float

    def __post_init__(self):
        if self.shape <= 0.0 or self.rate <= 0.0:
            raise DomainError(
                f"GammaParams requires positive shape and rate, got {self}")

    @property
    def mean(self) -> float:
        return self.shape / self.rate

    @property
    def variance(self) -> float:
        return self.shape / self.rate**2

    def pdf(self, x: float) -> float:
        return specfun.gamma_pdf(x, self.shape, self.rate)

    def cdf(self, x: float) -> float:
        return specfun.gamma_cdf(x, self.shape, self.rate)


# ---------------------------------------------------------------------------
# Gamma fitting and sampling
# ---------------------------------------------------------------------------

def fit_gamma_mle(samples: Sequence[float]) -> GammaParams:
    """Maximum-likelihood Gamma fit (Thom's start + Newton refinement).

    Solves ln(a) - psi(a) = ln(mean) - mean(ln) for the shape a, then sets
    rate = a / mean.  Requires at least 30 strictly positive samples.
    """
    x = np.asarray(samples, dtype=np.float64)
    if x.size < 30:
        raise DomainError(f"need at least 30 samples to fit, got {x.size}")
    if np.any(x <= 0.0):
        raise DomainError("all samples must be strictly positive")
    mean = float(x.mean())
    s = math.log(mean) - float(np.log(x).mean())
    if s <= 0.0:
        raise DomainError("degenerate sample: zero log-moment spread (all values equal?)")

    # Thom's closed-form approximation as the Newton starting point.
    shape = (3.0 - s + math.sqrt((s - 3.0) ** 2 + 24.0 * s)) / (12.0 * s)
    for _ in range(100):
        f = math.log(shape) - specfun.digamma(shape) - s
        fprime = 1.0 / shape - specfun.trigamma(shape)
        step = f / fprime
        shape -= step
        if abs(step) < 1e-10:
            break
    return GammaParams(shape=shape, rate=shape / mean)


def thom_initial_shape(samples: Sequence[float]) -> float:
    """Thom's approximation alone, without the Newton refinement."""
    x = np.asarray(samples, dtype=np.float64)
    if np.any(x <= 0.0):
        raise DomainError("all samples must be strictly positive")
    s = math.log(float(x.mean())) - float(np.log(x).mean())
    if s <= 0.0:
        raise DomainError("degenerate sample: zero log-moment spread")
    return (3.0 - s + math.sqrt((s - 3.0) ** 2 + 24.0 * s)) / (12.0 * s)


def sample_gamma(params: GammaParams, count: int, seed: int) -> np.ndarray:
    """Exact i.i.d. Gamma draws (rejection sampling), deterministic by seed."""
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    rng = np.random.default_rng(seed)
    return rng.gamma(shape=params.shape, scale=1.0 / params.rate, size=count)


def ks_distance(samples: Sequence[float], params: GammaParams) -> float:
    """Kolmogorov-Smirnov distance between samples and the Gamma cdf."""
    x = np.sort(np.asarray(samples, dtype=np.float64))
    n = x.size
    cdf = np.array([params.cdf(v) for v in x])
    upper = np.abs(np.arange(1, n + 1) / n - cdf).max()
    lower = np.abs(cdf - np.arange(0, n) / n).max()
    return float(max(upper, lower))


# ---------------------------------------------------------------------------
# Pipeline configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LatencyDist:
    """Latency distribution descriptor: constant, exponential, or gamma."""

    kind: str
    value: float = 0.0        # constant: the value; exponential: the mean
    shape: float = 1.0        # gamma only
    rate: float = 1.0         # gamma only

    def __post_init__(self):
        if self.kind not in ("constant", "exponential", "gamma"):
            raise DomainError(f"unknown latency distribution kind {self.kind!r}")
        if self.kind in ("constant", "exponential") and self.value < 0.0:
            raise DomainError(f"latency value must be nonnegative, got {self.value}")
        if self.kind == "gamma" and (self.shape <= 0.0 or self.rate <= 0.0):
            raise DomainError("gamma latency requires positive shape and rate")

    @classmethod
    def constant(cls, value: float) -> "LatencyDist":
        return cls(kind="constant", value=value)

    @classmethod
    def exponential(cls, mean: float) -> "LatencyDist":
        return cls(kind="exponential", value=mean)

    @classmethod
    def gamma(cls, shape: float, rate: float) -> "LatencyDist":
        return cls(kind="gamma", shape=shape, rate=rate)

    @property
    def minimum(self) -> float:
        return self.value if self.kind == "constant" else 0.0

    def sample(self, rng: np.random.Generator) -> float:
        if self.kind == "constant":
            return self.value
        if self.kind == "exponential":
            return float(rng.exponential(self.value))
        return float(rng.gamma(self.shape, 1.0 / self.rate))


@dataclass(frozen=True)
class PipelineConfig:
    """Endorse/order/validate pipeline parameters for the simulator."""

    endorse_latency: LatencyDist = LatencyDist.gamma(2.0, 1.6)
    order_overhead: float = 0.05          # per-block processing time, s
    validate_latency: LatencyDist = LatencyDist.gamma(2.5, 5.0)
    block_size: int = 10                  # max transactions per block
    block_timeout: float = 0.5            # s
    key_count: int = 20
    target_key_fraction: float = 0.3
    tx_rate: float = 5.0                  # transactions per second

    def __post_init__(self):
        if self.block_size < 1:
            raise DomainError(f"block_size must be >= 1, got {self.block_size}")
        if self.block_timeout <= 0.0:
            raise DomainError(f"block_timeout must be positive, got {self.block_timeout}")
        if self.key_count < 1:
            raise DomainError(f"key_count must be >= 1, got {self.key_count}")
        if not (0.0 < self.target_key_fraction <= 1.0):
            raise DomainError(
                f"target_key_fraction must be in (0, 1], got {self.target_key_fraction}")
        if self.key_count == 1 and self.target_key_fraction != 1.0:
            raise DomainError("with a single key the target fraction must be 1")
        if self.tx_rate <= 0.0:
            raise DomainError(f"tx_rate must be positive, got {self.tx_rate}")
        if self.order_overhead < 0.0:
            raise DomainError(f"order_overhead must be nonnegative, got {self.order_overhead}")


TARGET_KEY = 0


@dataclass
class TxRecord:
    """One transaction's trip through the pipeline."""

    tx_id: int
    key: int
    submit_time: float
    endorse_done: float = math.nan
    block_id: int = -1
    commit_time: float = math.nan
    read_version: int = -1
    verdict: str = "pending"   # "valid" | "mvcc_invalid"


# ---------------------------------------------------------------------------
# Discrete-event pipeline simulator
# ---------------------------------------------------------------------------

_ARRIVAL, _ENDORSED, _TIMEOUT = 0, 1, 2


def run_pipeline(cfg: PipelineConfig, duration: float, seed: int) -> list[TxRecord]:
    """Simulate the three-phase pipeline over [0, duration).

    Transactions arrive as a Poisson process; each snapshots the committed
    version of its key at submission, endorses after a random latency, and
    enters the open block.  A block closes at block_size transactions or
    block_timeout seconds after its first transaction, incurs the ordering
    overhead, and is validated FIFO; within a block, a transaction is valid
    iff its read version still matches, and a valid commit bumps the key
    version.  Deterministic given (cfg, duration, seed).
    """
    if duration <= 0.0:
        raise DomainError(f"duration must be positive, got {duration}")
    rng = np.random.default_rng(seed)

    committed_version: dict[int, int] = {k: 0 for k in range(cfg.key_count)}
    records: list[TxRecord] = []

    open_block: list[TxRecord] = []
    block_id = 0
    validator_free = 0.0
    next_tx_id = 0

    events: list[tuple[float, int, int, object]] = []
    seq = 0

    def push(t: float, kind: int, payload: object) -> None:
        nonlocal seq
        heapq.heappush(events, (t, kind, seq, payload))
        seq += 1

    def draw_key() -> int:
        if cfg.key_count == 1 or rng.random() < cfg.target_key_fraction:
            return TARGET_KEY
        return 1 + int(rng.integers(cfg.key_count - 1))

    # Blocks close strictly in order and the validator is FIFO, so block
    # commit times can be computed eagerly at close time.  Verdicts cannot:
    # a transaction submitted after a block closes but before it commits
    # must still read the pre-commit key version, so version bumps are
    # deferred until simulated time reaches each block's commit instant.
    pending: list[tuple[float, int, TxRecord]] = []
    pending_seq = 0

    def close_block(now: float) -> None:
        nonlocal open_block, block_id, validator_free, pending_seq
        block = open_block
        open_block = []
        start = max(now + cfg.order_overhead, validator_free)
        done = start + cfg.validate_latency.sample(rng)
        validator_free = done
        for tx in block:
            tx.commit_time = done
            heapq.heappush(pending, (done, pending_seq, tx))
            pending_seq += 1
        block_id += 1

    def apply_commits(now: float) -> None:
        # Sequential MVCC verification within and across blocks.
        while pending and pending[0][0] <= now:
            _, _, tx = heapq.heappop(pending)
            if tx.read_version == committed_version[tx.key]:
                tx.verdict = "valid"
                committed_version[tx.key] += 1
            else:
                tx.verdict = "mvcc_invalid"

    push(float(rng.exponential(1.0 / cfg.tx_rate)), _ARRIVAL, None)

    while events:
        t, kind, _, payload = heapq.heappop(events)
        apply_commits(t)
        if kind == _ARRIVAL:
            if t >= duration:
                continue
            tx = TxRecord(tx_id=next_tx_id, key=draw_key(), submit_time=t)
            next_tx_id += 1
            tx.read_version = committed_version[tx.key]
            records.append(tx)
            tx.endorse_done = t + cfg.endorse_latency.sample(rng)
            push(tx.endorse_done, _ENDORSED, tx)
            push(t + float(rng.exponential(1.0 / cfg.tx_rate)), _ARRIVAL, None)
        elif kind == _ENDORSED:
            tx = payload
            if not open_block:
                # Timeout clock starts when the first transaction enters
                # an empty block.
                push(t + cfg.block_timeout, _TIMEOUT, block_id)
            open_block.append(tx)
            tx.block_id = block_id
            if len(open_block) >= cfg.block_size:
                close_block(t)
        else:  # _TIMEOUT
            if payload == block_id and open_block:
                close_block(t)

    apply_commits(math.inf)
    return records


def consensus_latency_samples(records: Iterable[TxRecord], key: int = TARGET_KEY
                              ) -> list[float]:
    """Commit-minus-submit latencies of valid transactions on one key."""
    valid = [tx for tx in records if tx.key == key and tx.verdict == "valid"]
    valid.sort(key=lambda tx: tx.commit_time)
    return [tx.commit_time - tx.submit_time for tx in valid]


# ---------------------------------------------------------------------------
# CSV exchange format
# ---------------------------------------------------------------------------

_CSV_HEADER = ["submit_time", "commit_time", "key", "verdict"]


def write_latency_csv(records: Iterable[TxRecord], path: str | Path) -> None:
    """Write the four-column latency exchange CSV."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_CSV_HEADER)
        for tx in records:
            writer.writerow([repr(tx.submit_time), repr(tx.commit_time),
                             tx.key, tx.verdict])


def read_latency_samples(path: str | Path, key: int | None = None) -> list[float]:
    """Read latencies from a single-column or four-column CSV.

    Four-column files contribute commit - submit for valid rows (optionally
    restricted to one key); single-column files are raw latency values.
    Raises DomainError naming the offending line on bad input.
    """
    path = Path(path)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise DomainError(f"{path}: empty file")

    start = 0
    four_col = False
    first = [c.strip() for c in rows[0]]
    if first == _CSV_HEADER:
        four_col, start = True, 1
    elif len(first) == 4:
        four_col = True
    elif len(first) == 1:
        try:
            float(first[0])
        except ValueError:
            start = 1  # single-column header
    else:
        raise DomainError(f"{path}: line 1: expected 1 or 4 columns, got {len(first)}")

    samples: list[float] = []
    for lineno, row in enumerate(rows[start:], start=start + 1):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        try:
            if four_col:
                submit, commit = float(row[0]), float(row[1])
                if row[3].strip() != "valid":
                    continue
                if key is not None and int(row[2]) != key:
                    continue
                value = commit - submit
            else:
                value = float(row[0])
        except (ValueError, IndexError) as exc:
            raise DomainError(f"{path}: line {lineno}: {exc}") from exc
        if value <= 0.0:
            raise DomainError(f"{path}: line {lineno}: nonpositive latency {value}")
        samples.append(value)
    return samples
