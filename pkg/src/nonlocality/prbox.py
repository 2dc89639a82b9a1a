"""The no-signaling box saturating the algebraic CHSH maximum, with a seeded sampler."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .behavior import BehaviorTable

BIT_GENERATOR = "PCG64"


def pr_box_behavior() -> BehaviorTable:
    """P(a,b|x,y) = 1/2 when a xor b = x and y, else 0."""
    probs = np.zeros((2, 2, 2, 2))
    for x in range(2):
        for y in range(2):
            for a in range(2):
                for b in range(2):
                    if (a ^ b) == (x & y):
                        probs[x, y, a, b] = 0.5
    return BehaviorTable(probs)


def chsh_of_behavior(table: BehaviorTable) -> float:
    """CHSH combination of any binary behavior; outcome index 0 counts as +1."""
    if table.shape != (2, 2, 2, 2):
        raise ValueError(f"expected a (2, 2, 2, 2) table, got {table.shape}")
    signs = np.array([[1.0, -1.0], [-1.0, 1.0]])
    e = np.einsum("xyab,ab->xy", table.probs, signs)
    return float(e[0, 0] + e[0, 1] + e[1, 0] - e[1, 1])


@dataclass(frozen=True)
class SampleLog:
    """Counts of (x, y, a, b) events from a sampling run, with its reproducibility data."""

    n_samples: int
    seed: int
    shards: int
    counts: np.ndarray = field(repr=False)
    bit_generator: str = BIT_GENERATOR

    def to_json_dict(self) -> dict:
        return {
            "n_samples": self.n_samples,
            "seed": self.seed,
            "shards": self.shards,
            "bit_generator": self.bit_generator,
            "counts": self.counts.tolist(),
        }


def sample_pr_box(n_samples: int, seed: int, shards: int = 1) -> SampleLog:
    """Draw uniform settings and box outcomes: a is a fair coin, b = a xor (x and y).

    Reproducibility: a SeedSequence is spawned into independent child streams,
    one per shard, so shard counts are independent of scheduling and a given
    (seed, n_samples, shards) triple always yields the same log.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    if shards < 1 or shards > n_samples:
        raise ValueError("shards must be in [1, n_samples]")
    children = np.random.SeedSequence(seed).spawn(shards)
    per_shard = [n_samples // shards] * shards
    per_shard[-1] += n_samples - sum(per_shard)
    counts = np.zeros(16, dtype=np.int64)
    for child, m in zip(children, per_shard):
        rng = np.random.Generator(np.random.PCG64(child))
        bits = rng.integers(0, 2, size=(m, 3))
        x, y, a = bits[:, 0], bits[:, 1], bits[:, 2]
        b = a ^ (x & y)
        idx = ((x * 2 + y) * 2 + a) * 2 + b
        counts += np.bincount(idx, minlength=16)
    return SampleLog(
        n_samples=n_samples, seed=seed, shards=shards, counts=counts.reshape(2, 2, 2, 2)
    )


def empirical_behavior(log: SampleLog) -> BehaviorTable:
    """Conditional frequencies from a sample log; every setting pair must occur."""
    counts = log.counts.astype(float)
    totals = counts.sum(axis=(2, 3), keepdims=True)
    if np.any(totals == 0):
        raise ValueError("some setting pair was never sampled")
    return BehaviorTable(counts / totals)
