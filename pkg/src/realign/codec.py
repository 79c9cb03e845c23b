"""Constellation design, encoding, structured receive model, ML decoding.

Each user sends integer symbols u in [-Q, Q], one per (transmit antenna,
stream, direction), scaled by a common lattice spacing lambda.  The
per-antenna signal is

    x[t] = lam * sum_l delta_l * sum_i T_l[i] * u[t, l, i]

where T_l is the stream-l transmit direction table.  At receiver j the
noiseless observation is an integer combination of the receiver's own
signal directions and, thanks to the alignment closure, of the shared
interference directions: a lattice point.  Decoding is exact
maximum-likelihood over the full joint symbol hypothesis space, using
all N receive antennas at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelMatrix
from .directions import (
    ClosureMap,
    DirectionTable,
    coord_index,
    scale_by_delta,
)
from .errors import SizeLimitError

DEFAULT_HYPOTHESIS_CAP = 10**7
_DECODE_CHUNK = 1 << 16


@dataclass(frozen=True)
class ModulationParams:
    """Constellation design for one operating power.

    In coupled mode the symbol bound grows with power as
    Q = max(1, floor(P ** ((1 - eps) / (2 * (D + Dp + 1 + eps))))) and the
    spacing follows as lam = zeta * sqrt(P) / Q; zeta normalizes the
    worst-case per-antenna amplitude so the power constraint holds for
    every admissible symbol vector, deterministically.
    """

    P: float
    eps: float
    Q: int
    lam: float
    zeta: float
    coupled: bool

    def __post_init__(self):
        if self.Q < 1:
            raise ValueError(f"symbol bound Q must be >= 1, got {self.Q}")
        if self.lam <= 0 or self.zeta <= 0:
            raise ValueError("lambda and zeta must be positive")


def symbol_bound(P: float, eps: float, D: int, Dp: int) -> int:
    """Power-coupled symbol bound, clamped below at 1.

    The exponent (1 - eps) / (2 * (D + Dp + 1 + eps)) is tiny for large
    direction sets, so moderate powers give Q < 1; the clamp keeps the
    constellation non-degenerate at desk scale.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    if P <= 1.0:
        raise ValueError(f"power must exceed 1, got {P}")
    exponent = (1.0 - eps) / (2.0 * (D + Dp + 1 + eps))
    return max(1, math.floor(P ** exponent))


def worst_case_signal_scale(stream_tables: list[DirectionTable],
                            dbar: tuple[int, ...] | list[int]) -> float:
    """Deterministic bound used to normalize transmit power.

    Returns max_k dbar_k * max_l sum_i |T_l[i]|: with spacing
    lam = zeta * sqrt(P) / Q and zeta = 1 / (sqrt(M) * scale), every
    per-antenna amplitude stays below sqrt(P / M) for worst-case symbols.
    """
    if not stream_tables:
        raise ValueError("need at least one stream table")
    per_stream = [float(np.abs(t.require_values()).sum()) for t in stream_tables]
    scale = max(dbar) * max(per_stream)
    if scale <= 0:
        raise ValueError("degenerate signal scale")
    return scale


def design_modulation(P: float, eps: float, D: int, Dp: int,
                      mode: str = "coupled", Q: int | None = None,
                      M: int = 1, signal_scale: float = 1.0) -> ModulationParams:
    """Pick (Q, lambda, zeta) for power P.

    Args:
        P: transmit power budget (> 1).
        eps: design exponent in (0, 1).
        D, Dp: transmit / interference direction counts.
        mode: "coupled" derives Q from P; "fixed" uses the given Q.
        M: transmit antennas (enters the power normalization).
        signal_scale: worst_case_signal_scale of the transmit tables.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    if P <= 1.0:
        raise ValueError(f"power must exceed 1, got {P}")
    if signal_scale <= 0:
        raise ValueError("degenerate signal scale")
    zeta = 1.0 / (math.sqrt(M) * signal_scale)
    if mode == "coupled":
        q = symbol_bound(P, eps, D, Dp)
        coupled = True
    elif mode == "fixed":
        if Q is None or Q < 1:
            raise ValueError("fixed mode needs an explicit Q >= 1")
        q = Q
        coupled = False
    else:
        raise ValueError(f"unknown mode {mode!r}")
    lam = zeta * math.sqrt(P) / q
    return ModulationParams(P=P, eps=eps, Q=q, lam=lam, zeta=zeta, coupled=coupled)


def sample_weight_matrix(N: int, seed) -> np.ndarray:
    """Receive weighting matrix: unit diagonal, off-diagonals uniform [0.5, 1].

    Used by the analysis checks (it fills the structured model's zero
    blocks with nonzero entries); decoding itself runs on the unweighted
    model.  Redrawn in the measure-zero event of numerical singularity.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    rng = np.random.default_rng(seed)
    while True:
        W = rng.uniform(0.5, 1.0, size=(N, N))
        np.fill_diagonal(W, 1.0)
        if N == 1 or np.linalg.cond(W) < 1e12:
            return W


def draw_symbols(rng: np.random.Generator, M: int, dbar_k: int, D: int, Q: int) -> np.ndarray:
    """Uniform integer symbols in [-Q, Q], shape (M, dbar_k, D)."""
    return rng.integers(-Q, Q + 1, size=(M, dbar_k, D))


def encode_symbols(u: np.ndarray, stream_tables: list[DirectionTable],
                   deltas, lam: float, Q: int | None = None) -> np.ndarray:
    """Map one user's integer symbols to its M-antenna transmit vector.

    Args:
        u: integer array (M, dbar_k, D); dbar_k may be 0 for a silent user.
        stream_tables: transmit tables T_1..T_L (dbar_k <= L).
        deltas: stream constants, deltas[l] multiplies stream l.
        lam: lattice spacing.
        Q: optional symbol bound; violations raise.
    """
    u = np.asarray(u)
    if u.ndim != 3:
        raise ValueError(f"symbols must have shape (M, streams, D), got {u.shape}")
    M, dbar_k, D = u.shape
    if dbar_k > len(stream_tables):
        raise ValueError(f"{dbar_k} streams but only {len(stream_tables)} stream tables")
    if Q is not None and np.any(np.abs(u) > Q):
        raise ValueError(f"symbol outside [-{Q}, {Q}]")
    x = np.zeros(M)
    for l in range(dbar_k):
        vals = stream_tables[l].require_values()
        if vals.shape[0] != D:
            raise ValueError(f"stream table {l} has {vals.shape[0]} directions, symbols have {D}")
        x += deltas[l] * (u[:, l, :] @ vals)
    return lam * x


@dataclass(frozen=True)
class DecodeResult:
    """Hard-decision outcome for one receiver.

    ``u_hat`` is the receiver's own recovered symbol block (M, dbar_j, D);
    ``u_joint`` the full argmin joint hypothesis as a flat vector in user-
    major, then antenna, stream, direction order; ``distance`` the
    Euclidean distance at the argmin.  ``success`` is filled by the
    experiment harness, not by the decoder.
    """

    u_hat: np.ndarray
    u_joint: np.ndarray
    distance: float
    success: bool | None = None


@dataclass(frozen=True)
class ReceiveModel:
    """Structured signal model of one receiver, immutable after build.

    The joint hypothesis vector stacks every user's symbols in user-major
    order, each user contributing M * dbar_k * D integers laid out as
    (antenna, stream, direction) in C order.

    ``hyp_matrix`` (N x total_symbols) maps a joint hypothesis to the
    noiseless receive point (before the lam scaling): the receiver's own
    columns carry h[j, j, r, t] * delta_l * T_l[i]; interfering columns
    carry the interference-direction value selected by the closure map,
    which is exactly the same real number as h * delta_l * T_l[i] because
    bumping the exponent at the cross-link coordinate absorbs both the
    coefficient and one power of delta.

    ``block_matrix`` is the equivalent block form (own rows | per-antenna
    interference rows) acting on (own symbols, stacked per-antenna
    integer interference coefficients); ``weighted_matrix`` is W times
    it.  All three agree on every hypothesis up to rounding.
    """

    j: int
    K: int
    M: int
    N: int
    n: int
    D: int
    Dp: int
    dbar: tuple[int, ...]
    deltas: tuple[float, ...]
    params: ModulationParams
    W: np.ndarray = field(repr=False)
    hyp_matrix: np.ndarray = field(repr=False)
    block_matrix: np.ndarray = field(repr=False)
    weighted_matrix: np.ndarray = field(repr=False)
    sigma: np.ndarray = field(repr=False)
    user_offsets: tuple[int, ...] = ()

    @property
    def total_symbols(self) -> int:
        return self.hyp_matrix.shape[1]

    @property
    def own_symbols(self) -> int:
        return self.M * self.dbar[self.j] * self.D

    def hypothesis_count(self) -> int:
        return (2 * self.params.Q + 1) ** self.total_symbols

    def user_slice(self, k: int) -> slice:
        start = self.user_offsets[k]
        return slice(start, start + self.M * self.dbar[k] * self.D)

    def flatten_symbols(self, symbols: list[np.ndarray]) -> np.ndarray:
        """Stack per-user (M, dbar_k, D) blocks into one joint vector."""
        if len(symbols) != self.K:
            raise ValueError(f"need {self.K} user blocks, got {len(symbols)}")
        return np.concatenate([np.asarray(u).reshape(-1) for u in symbols])

    def split_user(self, u_joint: np.ndarray, k: int) -> np.ndarray:
        return np.asarray(u_joint)[self.user_slice(k)].reshape(self.M, self.dbar[k], self.D)

    def point(self, u_joint) -> np.ndarray:
        """Noiseless receive point of a joint hypothesis (lam excluded)."""
        return self.hyp_matrix @ np.asarray(u_joint, dtype=float)

    def weighted_point(self, u_joint) -> np.ndarray:
        return self.W @ self.point(u_joint)

    def interference_coefficients(self, u_joint) -> np.ndarray:
        """Integer interference coefficients (N, L, Dp) implied by a hypothesis.

        Entry (r, l, i') accumulates, over interfering users and transmit
        antennas, the symbols whose direction lands on interference entry
        i' of stream l at receive antenna r.  Magnitudes never exceed
        (K - 1) * M * Q.
        """
        u_joint = np.asarray(u_joint)
        L = len(self.deltas)
        out = np.zeros((self.N, L, self.Dp), dtype=np.int64)
        for k in range(self.K):
            if k == self.j or self.dbar[k] == 0:
                continue
            u_k = self.split_user(u_joint, k)
            for r in range(self.N):
                for t in range(self.M):
                    c = coord_index(self.K, self.M, self.N, self.j, k, r, t)
                    for l in range(self.dbar[k]):
                        np.add.at(out[r, l], self.sigma[c], u_k[t, l])
        return out

    def block_vector(self, u_joint) -> np.ndarray:
        """(own symbols, stacked interference coefficients) for block_matrix."""
        own = np.asarray(u_joint)[self.user_slice(self.j)]
        uprime = self.interference_coefficients(u_joint)
        return np.concatenate([own, uprime.reshape(-1)])


def build_receive_model(j: int, H: ChannelMatrix, T: DirectionTable,
                        Tp: DirectionTable, closure: ClosureMap, W: np.ndarray,
                        params: ModulationParams, dbar, deltas,
                        cap: int = DEFAULT_HYPOTHESIS_CAP) -> ReceiveModel:
    """Assemble the structured model for receiver j.

    Args:
        j: receiver index (0-based).
        H: channel realization.
        T, Tp: transmit and interference direction tables (values bound).
        closure: closure map for (T, Tp).
        W: receive weighting matrix (N x N).
        params: constellation parameters.
        dbar: per-user stream counts; length K.
        deltas: stream constants, len(deltas) >= max(dbar).

    Raises SizeLimitError when the joint hypothesis space would exceed
    ``cap`` points, naming the exact size.
    """
    K, M, N = H.K, H.M, H.N
    dbar = tuple(int(d) for d in dbar)
    deltas = tuple(float(d) for d in deltas)
    if len(dbar) != K:
        raise ValueError(f"dbar must have one entry per user, got {len(dbar)} for K={K}")
    if max(dbar) > len(deltas):
        raise ValueError(f"need {max(dbar)} stream constants, got {len(deltas)}")
    if W.shape != (N, N):
        raise ValueError(f"weight matrix shape {W.shape} != {(N, N)}")
    D, Dp = len(T), len(Tp)
    L = len(deltas)
    total = sum(M * d * D for d in dbar)
    hyp_count = (2 * params.Q + 1) ** total
    if hyp_count > cap:
        raise SizeLimitError("joint hypothesis space", hyp_count, cap)

    stream_t = [scale_by_delta(T, deltas[l], stream=l) for l in range(L)]
    stream_tp = [scale_by_delta(Tp, deltas[l], stream=l) for l in range(L)]

    offsets = []
    pos = 0
    for k in range(K):
        offsets.append(pos)
        pos += M * dbar[k] * D

    # Hypothesis-parameterized matrix: one column per transmitted symbol.
    G = np.zeros((N, total))
    for k in range(K):
        cols = np.zeros((N, M, dbar[k], D))
        for t in range(M):
            for l in range(dbar[k]):
                if k == j:
                    for r in range(N):
                        cols[r, t, l] = H.blocks[j, j, r, t] * deltas[l] * stream_t[l].values
                else:
                    for r in range(N):
                        c = coord_index(K, M, N, j, k, r, t)
                        cols[r, t, l] = stream_tp[l].values[closure.sigma[c]]
        G[:, offsets[k]:offsets[k] + M * dbar[k] * D] = cols.reshape(N, -1)

    # Equivalent block form: own rows, then a per-antenna diagonal of the
    # stacked interference direction rows.
    own = G[:, offsets[j]:offsets[j] + M * dbar[j] * D]
    tp_row = np.concatenate([stream_tp[l].values for l in range(L)]) if L else np.zeros(0)
    block = np.zeros((N, own.shape[1] + N * L * Dp))
    block[:, :own.shape[1]] = own
    for r in range(N):
        start = own.shape[1] + r * L * Dp
        block[r, start:start + L * Dp] = tp_row

    return ReceiveModel(
        j=j, K=K, M=M, N=N, n=T.n, D=D, Dp=Dp, dbar=dbar, deltas=deltas,
        params=params, W=W, hyp_matrix=G, block_matrix=block,
        weighted_matrix=W @ block, sigma=closure.sigma,
        user_offsets=tuple(offsets),
    )


def _whitened_metric(W: np.ndarray) -> np.ndarray:
    """W' (W W')^-1 W; mathematically the identity for invertible W."""
    return W.T @ np.linalg.inv(W @ W.T) @ W


def ml_decode(y: np.ndarray, model: ReceiveModel, metric: str = "euclidean",
              cap: int = DEFAULT_HYPOTHESIS_CAP) -> DecodeResult:
    """Exact joint maximum-likelihood hard decision.

    Enumerates every joint symbol hypothesis in lexicographic order
    (user-major layout, symbols ascending from -Q) and returns the one
    minimizing the Euclidean distance between y and lam times its
    noiseless point; ties go to the lexicographically smallest
    hypothesis.  ``metric="whitened"`` instead scores the W-transformed
    residual under the (W W')^-1 norm, which selects the same argmin up
    to rounding and exists to cross-check that the weighting matrix is
    analysis machinery, not decoder input.
    """
    y = np.asarray(y, dtype=float)
    if y.shape != (model.N,):
        raise ValueError(f"received vector shape {y.shape} != {(model.N,)}")
    total = model.total_symbols
    Q = model.params.Q
    lam = model.params.lam
    base = 2 * Q + 1
    count = base ** total
    if count > cap:
        raise SizeLimitError("joint hypothesis space", count, cap)
    if metric == "euclidean":
        quad = None
    elif metric == "whitened":
        quad = _whitened_metric(model.W)
    else:
        raise ValueError(f"unknown metric {metric!r}")

    Gt = model.hyp_matrix.T
    best = np.inf
    best_idx = -1
    for start in range(0, count, _DECODE_CHUNK):
        idx = np.arange(start, min(start + _DECODE_CHUNK, count), dtype=np.int64)
        u = np.empty((idx.size, total), dtype=np.int64)
        rem = idx.copy()
        for pos in range(total - 1, -1, -1):
            u[:, pos] = rem % base - Q
            rem //= base
        resid = y[None, :] - lam * (u @ Gt)
        if quad is None:
            d2 = np.einsum("ij,ij->i", resid, resid)
        else:
            d2 = np.einsum("ij,jk,ik->i", resid, quad, resid)
        local = int(np.argmin(d2))
        if d2[local] < best:
            best = float(d2[local])
            best_idx = start + local
    u_joint = np.empty(total, dtype=np.int64)
    rem = best_idx
    for pos in range(total - 1, -1, -1):
        u_joint[pos] = rem % base - Q
        rem //= base
    return DecodeResult(
        u_hat=model.split_user(u_joint, model.j),
        u_joint=u_joint,
        distance=math.sqrt(max(best, 0.0)),
    )
