"""Minimum-distance probes for structured direction matrices.

For a real matrix A with dim columns, the quantity of interest is

    d_min(A, Q) = min over nonzero integer q in [-Q, Q]^dim of max|A q|

(infinity norms on both sides).  For almost every channel realization
the theory lower-bounds this by a constant times Q to a fixed negative
power; the probes here measure it: exhaustively (exact), by a
meet-in-the-middle split (exact, single-row matrices, much larger Q),
or by random sampling (upper bound only).  A log-log fit across Q
values estimates the decay exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SizeLimitError

DEFAULT_BOX_CAP = 10**8
_SIDE_CAP = 10**7
_CHUNK = 1 << 16

MODE_EXHAUSTIVE = "exhaustive"
MODE_MEET = "meet-in-middle"
MODE_SAMPLE = "random-sample"
MODES = (MODE_EXHAUSTIVE, MODE_MEET, MODE_SAMPLE)


@dataclass(frozen=True)
class ProbeConfig:
    """Sweep settings for a minimum-distance probe.

    Args:
        q_values: symbol bounds to sweep, strictly increasing, each >= 1.
        eps: exponent slack used when quoting the theoretical reference
            slope (the probe itself never consumes it).
        mode: one of "exhaustive", "meet-in-middle", "random-sample".
        budget: sample count for random-sample mode.
    """

    q_values: tuple[int, ...]
    eps: float = 0.1
    mode: str = MODE_EXHAUSTIVE
    budget: int = 100_000

    def __post_init__(self):
        qs = tuple(int(q) for q in self.q_values)
        object.__setattr__(self, "q_values", qs)
        if not qs or any(q < 1 for q in qs):
            raise ValueError("Q values must all be >= 1")
        if any(b >= a for a, b in zip(qs[1:], qs)):
            raise ValueError("Q values must be strictly increasing")
        if self.mode not in MODES:
            raise ValueError(f"unknown search mode {self.mode!r}")
        if self.budget <= 0:
            raise ValueError(f"sample budget must be positive, got {self.budget}")
        if not 0.0 < self.eps:
            raise ValueError(f"eps must be positive, got {self.eps}")


@dataclass(frozen=True)
class DistanceRecord:
    """Outcome of one minimum-distance search.

    ``exact`` distinguishes a certified global minimum from a sampled
    upper bound; ``degenerate`` flags an exact zero, which only happens
    when the matrix columns carry an integer dependency within the box.
    """

    Q: int
    d_min: float
    q_min: tuple[int, ...]
    exact: bool
    degenerate: bool

    def __post_init__(self):
        if self.Q < 1:
            raise ValueError(f"Q must be >= 1, got {self.Q}")
        if any(abs(c) > self.Q for c in self.q_min):
            raise ValueError("argmin escaped the search box")


def _as_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim == 1:
        A = A[None, :]
    if A.ndim != 2 or A.shape[1] < 1:
        raise ValueError(f"need a matrix with at least one column, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix entries must be finite")
    return A


def _decode_digits(indices: np.ndarray, base: int, dim: int, Q: int) -> np.ndarray:
    """Mixed-radix digits of each index, most-significant first, shifted to [-Q, Q]."""
    out = np.empty((indices.size, dim), dtype=np.int64)
    rem = indices.copy()
    for pos in range(dim - 1, -1, -1):
        out[:, pos] = rem % base - Q
        rem //= base
    return out


def min_distance_exact(A, Q: int, half_space: bool = True,
                       cap: int = DEFAULT_BOX_CAP) -> DistanceRecord:
    """Certified minimum of max|A q| over nonzero integer boxes.

    Enumerates the box exhaustively.  Negating q leaves the norm
    unchanged, so by default only the half with a positive leading
    nonzero coordinate is visited; ``half_space=False`` walks the whole
    box (the result is identical and exists for cross-checks).  Ties
    resolve to the lexicographically smallest visited q.

    Raises SizeLimitError when (2Q+1)**dim exceeds ``cap``.
    """
    A = _as_matrix(A)
    if Q < 1:
        raise ValueError(f"Q must be >= 1, got {Q}")
    dim = A.shape[1]
    base = 2 * Q + 1
    count = base ** dim
    if count > cap:
        raise SizeLimitError("integer search box", count, cap)
    center = (count - 1) // 2  # index of q = 0
    start, stop = (center + 1, count) if half_space else (0, count)
    best = math.inf
    best_q = None
    for lo in range(start, stop, _CHUNK):
        idx = np.arange(lo, min(lo + _CHUNK, stop), dtype=np.int64)
        q = _decode_digits(idx, base, dim, Q)
        norms = np.abs(q @ A.T).max(axis=1)
        if not half_space:
            norms[idx == center] = np.inf  # exclude q = 0
        local = int(np.argmin(norms))
        if norms[local] < best:
            best = float(norms[local])
            best_q = tuple(int(v) for v in q[local])
    return DistanceRecord(Q=Q, d_min=best, q_min=best_q, exact=True,
                          degenerate=(best == 0.0))


def min_distance_meet(A, Q: int, side_cap: int = _SIDE_CAP) -> DistanceRecord:
    """Exact minimum via a meet-in-the-middle split, single-row matrices only.

    Writing q = (u, v), min |A q| = min over u of the nearest value to
    -A1 u among the sorted A2 v.  Memory goes as (2Q+1)**ceil(dim/2)
    instead of the full box, which extends the reachable Q well past the
    exhaustive cap.  Values match min_distance_exact up to float
    summation order.
    """
    A = _as_matrix(A)
    if A.shape[0] != 1:
        raise ValueError("meet-in-the-middle search supports single-row matrices only")
    if Q < 1:
        raise ValueError(f"Q must be >= 1, got {Q}")
    row = A[0]
    dim = row.size
    if dim == 1:
        return min_distance_exact(A, Q)
    split = (dim + 1) // 2
    base = 2 * Q + 1
    n1, n2 = base ** split, base ** (dim - split)
    if max(n1, n2) > side_cap:
        raise SizeLimitError("meet-in-the-middle side", max(n1, n2), side_cap)

    q1 = _decode_digits(np.arange(n1, dtype=np.int64), base, split, Q)
    q2 = _decode_digits(np.arange(n2, dtype=np.int64), base, dim - split, Q)
    s1 = q1 @ row[:split]
    s2 = q2 @ row[split:]
    order = np.argsort(s2, kind="stable")
    s2_sorted = s2[order]
    zero1, zero2 = (n1 - 1) // 2, (n2 - 1) // 2

    pos = np.searchsorted(s2_sorted, -s1)
    best = math.inf
    best_pair = None
    for off in range(-3, 4):
        cand = pos + off
        ok = (cand >= 0) & (cand < n2)
        i1 = np.nonzero(ok)[0]
        if i1.size == 0:
            continue
        i2 = order[cand[ok]]
        vals = np.abs(s1[i1] + s2[i2])
        vals[(i1 == zero1) & (i2 == zero2)] = np.inf  # exclude q = 0
        local = int(np.argmin(vals))
        if vals[local] < best:
            best = float(vals[local])
            best_pair = (int(i1[local]), int(i2[local]))
    u = _decode_digits(np.array([best_pair[0]], dtype=np.int64), base, split, Q)[0]
    v = _decode_digits(np.array([best_pair[1]], dtype=np.int64), base, dim - split, Q)[0]
    q = np.concatenate([u, v])
    nz = np.nonzero(q)[0]
    if nz.size and q[nz[0]] < 0:
        q = -q
    return DistanceRecord(Q=Q, d_min=best, q_min=tuple(int(c) for c in q),
                          exact=True, degenerate=(best == 0.0))


def min_distance_sample(A, Q: int, budget: int, seed=0) -> DistanceRecord:
    """Best-found upper bound from ``budget`` uniform draws in the box.

    Never reports below the exact minimum on the same instance; the
    record is marked inexact.  Deterministic for a given seed.
    """
    A = _as_matrix(A)
    if Q < 1:
        raise ValueError(f"Q must be >= 1, got {Q}")
    if budget <= 0:
        raise ValueError(f"sample budget must be positive, got {budget}")
    dim = A.shape[1]
    rng = np.random.default_rng(seed)
    best = math.inf
    best_q = None
    remaining = budget
    while remaining > 0:
        take = min(remaining, _CHUNK)
        remaining -= take
        q = rng.integers(-Q, Q + 1, size=(take, dim))
        zero = ~q.any(axis=1)
        q[zero, 0] = 1  # nudge the all-zero draw to a unit vector
        norms = np.abs(q @ A.T).max(axis=1)
        local = int(np.argmin(norms))
        if norms[local] < best:
            best = float(norms[local])
            best_q = tuple(int(v) for v in q[local])
    return DistanceRecord(Q=Q, d_min=best, q_min=best_q, exact=False,
                          degenerate=(best == 0.0))


def min_distance(A, Q: int, mode: str = MODE_EXHAUSTIVE, budget: int = 100_000,
                 seed=0) -> DistanceRecord:
    """Mode dispatcher used by the sweep harness and the CLI."""
    if mode == MODE_EXHAUSTIVE:
        return min_distance_exact(A, Q)
    if mode == MODE_MEET:
        return min_distance_meet(A, Q)
    if mode == MODE_SAMPLE:
        return min_distance_sample(A, Q, budget, seed)
    raise ValueError(f"unknown search mode {mode!r}")


@dataclass(frozen=True)
class ExponentFit:
    """Log-log decay fit across a Q sweep.

    ``slope`` is the least-squares slope of log d_min against log Q;
    ``beta_hat`` the smallest constant making d_min >= beta * Q**slope
    hold on every record.  When a reference exponent is supplied,
    ``reference_slope`` carries -(reference) - 1 and ``above_reference``
    says whether the fit respects it.
    """

    slope: float
    beta_hat: float
    reference_slope: float | None = None
    above_reference: bool | None = None


def fit_distance_exponent(records, lambdas=None,
                          direction_total: int | None = None) -> ExponentFit:
    """Least-squares decay exponent of d_min over a Q sweep.

    Args:
        records: DistanceRecords at three or more distinct Q values; all
            must be exact (upper bounds would bias the slope) and none
            degenerate.
        lambdas: optional per-record spacing schedule; distances are
            normalized to d_min / lambda before fitting.
        direction_total: optional direction count D + Dp; when given the
            fit is compared against the reference slope -(D + Dp) - 1.
    """
    records = list(records)
    if lambdas is not None and len(lambdas) != len(records):
        raise ValueError("lambda schedule length must match record count")
    inexact = [r.Q for r in records if not r.exact]
    if inexact:
        raise ValueError(f"fit requires exact records; sampled at Q={inexact}")
    degenerate = [r.Q for r in records if r.degenerate]
    if degenerate:
        raise ValueError(
            f"degenerate records (d_min = 0) at Q={degenerate}: "
            "matrix columns carry an integer dependency, no decay exponent exists")
    if len({r.Q for r in records}) < 3:
        raise ValueError("need exact records at three or more distinct Q values")
    qs = np.array([r.Q for r in records], dtype=float)
    ds = np.array([r.d_min for r in records], dtype=float)
    if lambdas is not None:
        lams = np.asarray(lambdas, dtype=float)
        if np.any(lams <= 0):
            raise ValueError("lambda schedule must be positive")
        ds = ds / lams
    slope = float(np.polyfit(np.log(qs), np.log(ds), 1)[0])
    beta_hat = float(np.min(ds / qs ** slope))
    if direction_total is None:
        return ExponentFit(slope=slope, beta_hat=beta_hat)
    ref = -float(direction_total) - 1.0
    return ExponentFit(slope=slope, beta_hat=beta_hat, reference_slope=ref,
                       above_reference=slope >= ref)
