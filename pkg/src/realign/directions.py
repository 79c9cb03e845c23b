"""Monomial transmit-direction sets and the alignment closure map.

Every transmit direction is a monomial in the cross-link channel
coefficients h[j, k, r, t] (k != j): the product over all cross-link
coordinates of h**alpha with integer exponents alpha.  The transmit set
uses exponents 0..n-1 per coordinate, the interference set 0..n.
Multiplying a transmit direction by any single cross-link coefficient
bumps one exponent by one and therefore lands inside the interference
set; that closure, checked in exact integer arithmetic, is what makes
all interference at a receive antenna collapse onto one shared set.

Exponent vectors are ordered lexicographically over coordinates
(j, k, r, t), themselves in lexicographic order, so table indices and
the closure map are deterministic and computable arithmetically.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelMatrix
from .errors import NumericRangeError, SizeLimitError

DEFAULT_TABLE_CAP = 10**6

TRANSMIT = "transmit"
INTERFERENCE = "interference"
STREAM = "stream"


def cross_link_coords(K: int, M: int, N: int) -> list[tuple[int, int, int, int]]:
    """All (j, k, r, t) with k != j, 0-based, lexicographic; K(K-1)NM of them."""
    return [
        (j, k, r, t)
        for j in range(K)
        for k in range(K)
        if k != j
        for r in range(N)
        for t in range(M)
    ]


def coord_index(K: int, M: int, N: int, j: int, k: int, r: int, t: int) -> int:
    """Position of (j, k, r, t) in cross_link_coords(K, M, N)."""
    if k == j:
        raise ValueError(f"({j},{k}) is a direct link, not a cross link")
    k_off = k if k < j else k - 1
    return ((j * (K - 1) + k_off) * N + r) * M + t


def cross_link_values(H: ChannelMatrix) -> np.ndarray:
    """Cross-link coefficients in cross_link_coords order."""
    coords = cross_link_coords(H.K, H.M, H.N)
    return np.array([H.blocks[c] for c in coords])


def _balanced_product(factors: np.ndarray) -> np.ndarray:
    """Multiply along the last axis pairwise (tree order) to limit rounding."""
    f = factors
    while f.shape[-1] > 1:
        w = f.shape[-1]
        half = w // 2
        head = f[..., : 2 * half : 2] * f[..., 1 : 2 * half : 2]
        if w % 2:
            head = np.concatenate([head, f[..., -1:]], axis=-1)
        f = head
    return f[..., 0]


def evaluate_monomial(exponents, coeffs) -> float:
    """Evaluate one monomial prod(coeffs**exponents) by balanced products.

    Raises NumericRangeError if the result underflows to 0 or leaves
    double range.
    """
    exponents = np.asarray(exponents)
    coeffs = np.asarray(coeffs, dtype=float)
    if exponents.shape != coeffs.shape:
        raise ValueError(f"exponent shape {exponents.shape} != coefficient shape {coeffs.shape}")
    with np.errstate(over="ignore", under="ignore"):
        value = float(_balanced_product(coeffs ** exponents.astype(float)))
    if value == 0.0 or not np.isfinite(value):
        raise NumericRangeError(f"monomial evaluated to {value}, outside double range")
    return value


def evaluate_table_values(exponents: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    """Vectorized evaluate_monomial over the rows of an exponent array."""
    with np.errstate(over="ignore", under="ignore"):
        values = _balanced_product(coeffs[None, :] ** exponents.astype(float))
    bad = (values == 0.0) | ~np.isfinite(values)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise NumericRangeError(
            f"direction {i} evaluated to {values[i]}, outside double range"
        )
    return values


@dataclass(frozen=True)
class DirectionTable:
    """Ordered monomial direction set for one (K, M, N, n).

    ``exponents`` holds one exponent vector per row in lexicographic
    order; ``values`` holds the matching reals for a bound channel (None
    for a purely combinatorial table).  ``kind`` is "transmit" (bound
    n-1), "interference" (bound n) or "stream" (a transmit set with every
    coefficient scaled by a per-stream constant delta before being raised
    to its exponent).
    """

    kind: str
    K: int
    M: int
    N: int
    n: int
    exponents: np.ndarray = field(repr=False)
    values: np.ndarray | None = field(repr=False, default=None)
    delta: float | None = None
    stream: int | None = None

    def __post_init__(self):
        self.exponents.setflags(write=False)
        if self.values is not None:
            self.values.setflags(write=False)

    def __len__(self) -> int:
        return self.exponents.shape[0]

    @property
    def dim(self) -> int:
        """Number of cross-link coordinates, K(K-1)NM."""
        return self.exponents.shape[1]

    @property
    def base(self) -> int:
        """Per-coordinate choices: n for transmit/stream, n+1 for interference."""
        return self.n + 1 if self.kind == INTERFERENCE else self.n

    def coords(self) -> list[tuple[int, int, int, int]]:
        return cross_link_coords(self.K, self.M, self.N)

    def require_values(self) -> np.ndarray:
        if self.values is None:
            raise ValueError("table has no channel-bound values; enumerate with H")
        return self.values


def table_size(K: int, M: int, N: int, n: int, interference: bool = False) -> int:
    """Exact table cardinality: (n or n+1) ** (K(K-1)NM)."""
    base = n + 1 if interference else n
    return base ** (K * (K - 1) * N * M)


def _lex_exponents(base: int, dim: int, count: int) -> np.ndarray:
    """All vectors in [0, base)^dim as rows, lexicographic (first coord slowest)."""
    idx = np.arange(count, dtype=np.int64)
    out = np.empty((count, dim), dtype=np.int32)
    for pos in range(dim - 1, -1, -1):
        out[:, pos] = idx % base
        idx //= base
    return out


def _enumerate(kind: str, K: int, M: int, N: int, n: int,
               H: ChannelMatrix | None, cap: int) -> DirectionTable:
    if n < 1:
        raise ValueError(f"exponent bound n must be >= 1, got {n}")
    if H is not None and (H.K, H.M, H.N) != (K, M, N):
        raise ValueError(
            f"channel is ({H.K},{H.M},{H.N}), table requested for ({K},{M},{N})"
        )
    dim = K * (K - 1) * N * M
    count = table_size(K, M, N, n, interference=(kind == INTERFERENCE))
    if count > cap:
        raise SizeLimitError(f"{kind} direction table", count, cap)
    base = n + 1 if kind == INTERFERENCE else n
    exponents = _lex_exponents(base, dim, count)
    values = None
    if H is not None:
        values = evaluate_table_values(exponents, cross_link_values(H))
    return DirectionTable(kind, K, M, N, n, exponents, values)


def enumerate_transmit_directions(K: int, M: int, N: int, n: int,
                                  H: ChannelMatrix | None = None,
                                  cap: int = DEFAULT_TABLE_CAP) -> DirectionTable:
    """The transmit direction set: exponents 0..n-1, n**(K(K-1)NM) entries.

    The first entry is always the all-zero exponent vector (value 1).
    Pass H to bind real direction values; raises SizeLimitError naming
    the exact count when the table would exceed ``cap``.
    """
    return _enumerate(TRANSMIT, K, M, N, n, H, cap)


def enumerate_interference_directions(K: int, M: int, N: int, n: int,
                                      H: ChannelMatrix | None = None,
                                      cap: int = DEFAULT_TABLE_CAP) -> DirectionTable:
    """The interference direction set: exponents 0..n, (n+1)**(K(K-1)NM) entries."""
    return _enumerate(INTERFERENCE, K, M, N, n, H, cap)


def scale_by_delta(table: DirectionTable, delta: float, stream: int | None = None) -> DirectionTable:
    """Scale every coefficient by delta before exponentiation.

    The resulting value of a row with exponent vector e is
    value(e) * delta**sum(e): the monomial in (h * delta) instead of h.
    """
    values = table.require_values() * delta ** table.exponents.sum(axis=1, dtype=np.int64)
    kind = STREAM if table.kind == TRANSMIT else table.kind
    return DirectionTable(kind, table.K, table.M, table.N, table.n,
                          table.exponents, values, delta=delta, stream=stream)


def stream_directions(l: int, delta_l: float, K: int, M: int, N: int, n: int,
                      H: ChannelMatrix, cap: int = DEFAULT_TABLE_CAP) -> DirectionTable:
    """Per-stream transmit set: monomials in (h * delta_l), exponents 0..n-1."""
    if not 0.5 <= delta_l <= 1.0:
        raise ValueError(f"stream constant must lie in [0.5, 1], got {delta_l}")
    base = enumerate_transmit_directions(K, M, N, n, H, cap)
    return scale_by_delta(base, delta_l, stream=l)


def sample_stream_deltas(count: int, seed) -> np.ndarray:
    """Draw pairwise-distinct stream constants uniform on [0.5, 1]."""
    rng = np.random.default_rng(seed)
    deltas = rng.uniform(0.5, 1.0, size=count)
    while len(np.unique(deltas)) < count:  # ties have probability ~0
        deltas = rng.uniform(0.5, 1.0, size=count)
    return deltas


@dataclass(frozen=True)
class ClosureMap:
    """sigma[c, i] = interference-table index of transmit entry i bumped at coordinate c.

    Built and verified in pure integer arithmetic: the exponent vector at
    sigma[c, i] equals the transmit exponent vector i plus one at c.
    """

    K: int
    M: int
    N: int
    n: int
    sigma: np.ndarray = field(repr=False)  # (dim, |transmit|) int64

    def __call__(self, c: int, i: int) -> int:
        return int(self.sigma[c, i])


def build_closure_map(T: DirectionTable, Tp: DirectionTable) -> ClosureMap:
    """Map (cross-link coordinate, transmit index) -> interference index.

    Requires tables for the same (K, M, N, n) with bounds n-1 and n.  The
    target index is computed arithmetically from the lexicographic layout
    and then re-verified entry by entry against the stored exponent
    vectors, so a malformed table cannot produce a silently wrong map.
    """
    if T.kind not in (TRANSMIT, STREAM) or Tp.kind != INTERFERENCE:
        raise ValueError(f"need a transmit and an interference table, got {T.kind}/{Tp.kind}")
    if (T.K, T.M, T.N, T.n) != (Tp.K, Tp.M, Tp.N, Tp.n):
        raise ValueError("tables disagree on (K, M, N, n)")
    dim = T.dim
    base = Tp.base
    weights = base ** np.arange(dim - 1, -1, -1, dtype=np.int64)
    base_index = T.exponents.astype(np.int64) @ weights  # index of unbumped vector in Tp
    sigma = base_index[None, :] + weights[:, None]
    # Exact integer re-verification of the bump-one-exponent invariant,
    # one coordinate at a time to keep memory linear in |T|.
    for c in range(dim):
        expected = T.exponents.astype(np.int64)
        expected[:, c] += 1
        if not np.array_equal(Tp.exponents[sigma[c]].astype(np.int64), expected):
            raise ValueError("closure map construction failed: exponent mismatch")
    return ClosureMap(T.K, T.M, T.N, T.n, sigma)


@dataclass
class AlignmentReport:
    """Outcome of checking that every bumped transmit direction aligns.

    ``exact_failures`` counts exponent-vector mismatches (must be 0 by
    construction), ``float_failures`` counts value products outside the
    relative tolerance, ``max_rel_dev`` is the worst observed relative
    deviation.  ``direct_products_in_interference`` is only filled when
    the direct-link spot check is requested; for generic channels it
    should be 0 because direct-link products leave the interference set.
    """

    pairs_checked: int
    exact_failures: int
    float_failures: int
    max_rel_dev: float
    tol: float
    direct_products_in_interference: int | None = None
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        aligned = self.exact_failures == 0 and self.float_failures == 0
        if self.direct_products_in_interference is not None:
            aligned = aligned and self.direct_products_in_interference == 0
        return aligned


def verify_alignment(T: DirectionTable, Tp: DirectionTable, H: ChannelMatrix,
                     tol: float = 1e-10, check_direct: bool = False) -> AlignmentReport:
    """Check the alignment closure on a bound channel.

    For every cross-link coordinate c and transmit entry i, the product
    h_c * T[i] must equal the interference entry named by the closure map:
    exactly in exponents (integer check inside build_closure_map) and
    within ``tol`` relative in floating point.

    With ``check_direct``, also verify the converse for direct links:
    products h[j, j, r, t] * T[i] are searched for in the interference
    values and counted if any match within ``tol``; generic channels
    give zero hits.
    """
    closure = build_closure_map(T, Tp)
    h = cross_link_values(H)
    t_vals = T.require_values()
    tp_vals = Tp.require_values()
    products = h[:, None] * t_vals[None, :]
    mapped = tp_vals[closure.sigma]
    rel = np.abs(mapped - products) / np.maximum(np.abs(products), np.finfo(float).tiny)
    float_bad = rel > tol
    failures = [
        (int(c), int(i), float(rel[c, i]))
        for c, i in zip(*np.nonzero(float_bad))
    ][:20]
    direct_hits = None
    if check_direct:
        direct = np.array([
            H.blocks[j, j, r, t]
            for j in range(H.K) for r in range(H.N) for t in range(H.M)
        ])
        direct_hits = 0
        for d in direct:
            prods = d * t_vals
            gap = np.abs(prods[:, None] - tp_vals[None, :])
            close = gap <= tol * np.maximum(np.abs(prods[:, None]), np.finfo(float).tiny)
            direct_hits += int(close.any(axis=1).sum())
    return AlignmentReport(
        pairs_checked=int(products.size),
        exact_failures=0,  # build_closure_map would have raised otherwise
        float_failures=int(float_bad.sum()),
        max_rel_dev=float(rel.max()) if rel.size else 0.0,
        tol=tol,
        direct_products_in_interference=direct_hits,
        failures=failures,
    )


def closure_image_exponents(T: DirectionTable, Tp: DirectionTable) -> np.ndarray:
    """Distinct interference indices reachable by bumping transmit entries."""
    closure = build_closure_map(T, Tp)
    return np.unique(closure.sigma)
