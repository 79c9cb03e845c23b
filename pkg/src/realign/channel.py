"""Constant real MIMO interference channels and additive noise.

A (K, M, N) channel connects K transmitter/receiver pairs, each transmitter
with M antennas and each receiver with N antennas.  The channel is a K x K
grid of real N x M blocks, constant over the whole simulation.  Receiver j
observes

    y_j = sum_k H[j, k] @ x_k + noise_j

with unit-variance white Gaussian noise per receive antenna component.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

PROFILES = ("bounded-uniform", "standard-normal")


@dataclass(frozen=True)
class ChannelConfig:
    """Parameters of a channel draw.

    Args:
        K: number of transmitter/receiver pairs (>= 2).
        M: transmit antennas per user (>= 1).
        N: receive antennas per user (>= 1).
        seed: 64-bit seed; same seed reproduces the same coefficients.
        profile: "bounded-uniform" draws |h| uniform on [0.5, 2] with a
            random sign (keeps monomial products of many coefficients well
            inside double range); "standard-normal" draws h ~ N(0, 1).
    """

    K: int
    M: int
    N: int
    seed: int
    profile: str = "bounded-uniform"

    def __post_init__(self):
        if self.K < 2:
            raise ValueError(f"K must be >= 2, got {self.K}")
        if self.M < 1 or self.N < 1:
            raise ValueError(f"M and N must be >= 1, got M={self.M}, N={self.N}")
        if self.profile not in PROFILES:
            raise ValueError(f"unknown profile {self.profile!r}, expected one of {PROFILES}")


@dataclass(frozen=True)
class ChannelMatrix:
    """All K*K channel blocks of one constant channel realization.

    ``blocks[j, k]`` is the N x M real matrix from transmitter k to
    receiver j; entry (r, t) couples transmit antenna t to receive
    antenna r.  Immutable after creation, safe to share across workers.
    """

    K: int
    M: int
    N: int
    seed: int
    profile: str
    blocks: np.ndarray = field(repr=False)  # shape (K, K, N, M)

    def __post_init__(self):
        b = self.blocks
        if b.shape != (self.K, self.K, self.N, self.M):
            raise ValueError(f"blocks shape {b.shape} != {(self.K, self.K, self.N, self.M)}")
        if not np.all(np.isfinite(b)) or np.any(b == 0.0):
            raise ValueError("channel coefficients must be finite and nonzero")
        b.setflags(write=False)

    def block(self, j: int, k: int) -> np.ndarray:
        """N x M block from transmitter k to receiver j (0-based)."""
        return self.blocks[j, k]

    def coeff(self, j: int, k: int, r: int, t: int) -> float:
        return float(self.blocks[j, k, r, t])


@dataclass
class NoiseModel:
    """Unit-variance white Gaussian receiver noise.

    Holds its own generator so a fresh per-trial model gives independent
    yet reproducible draws.
    """

    rng: np.random.Generator
    variance: float = 1.0

    def __post_init__(self):
        if self.variance <= 0:
            raise ValueError(f"noise variance must be positive, got {self.variance}")

    @classmethod
    def from_seed(cls, seed, variance: float = 1.0) -> "NoiseModel":
        return cls(rng=np.random.default_rng(seed), variance=variance)

    def draw(self, shape) -> np.ndarray:
        return np.sqrt(self.variance) * self.rng.standard_normal(shape)


def generate_channel(cfg: ChannelConfig) -> ChannelMatrix:
    """Draw a channel realization; deterministic for a given config.

    Bounded-uniform entries have magnitude uniform on [0.5, 2] and an
    equiprobable sign.  Standard-normal entries are N(0, 1) with exact
    zeros redrawn (measure-zero event, but the nonzero invariant is hard).
    """
    rng = np.random.default_rng(cfg.seed)
    shape = (cfg.K, cfg.K, cfg.N, cfg.M)
    if cfg.profile == "bounded-uniform":
        mag = rng.uniform(0.5, 2.0, size=shape)
        sign = rng.integers(0, 2, size=shape) * 2 - 1
        blocks = mag * sign
    else:
        blocks = rng.standard_normal(shape)
        while np.any(blocks == 0.0):
            zeros = blocks == 0.0
            blocks[zeros] = rng.standard_normal(int(zeros.sum()))
    return ChannelMatrix(cfg.K, cfg.M, cfg.N, cfg.seed, cfg.profile, blocks)


def apply_channel(H: ChannelMatrix, x, noise: NoiseModel | None = None) -> np.ndarray:
    """Propagate per-user transmit vectors through the channel.

    Args:
        H: channel realization.
        x: array-like of shape (K, M), one transmit vector per user.
        noise: optional noise model; None means noiseless.  When present,
            one (K, N) block of noise is drawn in a single call so the
            consumed stream does not depend on evaluation order.

    Returns:
        (K, N) array, row j = received vector at receiver j.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (H.K, H.M):
        raise ValueError(f"transmit array shape {x.shape} != {(H.K, H.M)}")
    y = np.einsum("jknm,km->jn", H.blocks, x)
    if noise is not None:
        y = y + noise.draw((H.K, H.N))
    return y


def save_channel(H: ChannelMatrix, path) -> None:
    """Write the channel to JSON; floats keep full round-trip precision."""
    doc = {
        "K": H.K,
        "M": H.M,
        "N": H.N,
        "profile": H.profile,
        "seed": H.seed,
        "blocks": [
            [[float(v) for v in H.blocks[j, k].ravel()] for k in range(H.K)]
            for j in range(H.K)
        ],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh)


def load_channel(path) -> ChannelMatrix:
    """Read a channel written by save_channel; round-trip is bit-exact."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        raise ValueError(f"channel file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed channel file {path}: {exc}") from exc
    try:
        K, M, N = int(doc["K"]), int(doc["M"]), int(doc["N"])
        profile, seed = doc["profile"], int(doc["seed"])
        rows = doc["blocks"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed channel file {path}: missing field {exc}") from exc
    blocks = np.empty((K, K, N, M))
    if len(rows) != K or any(len(row) != K for row in rows):
        raise ValueError(f"channel file {path}: block grid is not {K}x{K}")
    for j in range(K):
        for k in range(K):
            flat = np.asarray(rows[j][k], dtype=float)
            if flat.size != N * M:
                raise ValueError(
                    f"channel file {path}: block ({j},{k}) has {flat.size} entries, expected {N * M}"
                )
            blocks[j, k] = flat.reshape(N, M)
    return ChannelMatrix(K, M, N, seed, profile, blocks)
