"""Degrees-of-freedom region arithmetic, exact over the rationals.

The achievable region for K users with M transmit and N receive antennas
(N >= M) is the set of nonnegative rate tuples (d_1, ..., d_K) with

    M * d_k + N * max_{k' != k} d_k' <= M * N      for every k.

For M = N this reduces to d_k + max_{k' != k} d_k' <= N.  Everything
here runs on fractions.Fraction so boundary cases (equality) never
depend on float rounding; floats are converted exactly via
Fraction(value).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, float, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def _point(point) -> tuple[Fraction, ...]:
    pt = tuple(_as_fraction(d) for d in point)
    if len(pt) < 2:
        raise ValueError("need at least two users")
    if any(d < 0 for d in pt):
        raise ValueError("DoF values must be nonnegative")
    return pt


def in_region(point, M: int, N: int) -> bool:
    """Exact membership test for the general-antenna region.

    Args:
        point: per-user DoF values (ints, Fractions, floats, or strings).
        M, N: transmit / receive antennas, N >= M >= 1.

    Raises ValueError on negative entries or fewer than two users.
    """
    if not 1 <= M <= N:
        raise ValueError(f"need N >= M >= 1, got M={M}, N={N}")
    pt = _point(point)
    for k, d_k in enumerate(pt):
        others = max(d for i, d in enumerate(pt) if i != k)
        if M * d_k + N * others > M * N:
            return False
    return True


def in_region_equal_antennas(point, N: int) -> bool:
    """Membership for M = N: d_k + max_{k' != k} d_k' <= N, all k."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    pt = _point(point)
    for k, d_k in enumerate(pt):
        others = max(d for i, d in enumerate(pt) if i != k)
        if d_k + others > N:
            return False
    return True


def region_constraints(point, M: int, N: int) -> list[tuple[int, Fraction, Fraction]]:
    """Per-user constraint rows (k, lhs, rhs); satisfied iff lhs <= rhs."""
    if not 1 <= M <= N:
        raise ValueError(f"need N >= M >= 1, got M={M}, N={N}")
    pt = _point(point)
    rhs = Fraction(M * N)
    rows = []
    for k, d_k in enumerate(pt):
        others = max(d for i, d in enumerate(pt) if i != k)
        rows.append((k, M * d_k + N * others, rhs))
    return rows


def region_report(point, M: int, N: int) -> dict:
    """Machine-readable membership report used by the CLI."""
    pt = _point(point)
    rows = region_constraints(pt, M, N)
    ok = all(lhs <= rhs for _, lhs, rhs in rows)
    return {
        "point": [str(d) for d in pt],
        "M": M,
        "N": N,
        "member": ok,
        "constraints": [
            {
                "user": k,
                "lhs": str(lhs),
                "rhs": str(rhs),
                "satisfied": lhs <= rhs,
                "binding": lhs == rhs,
            }
            for k, lhs, rhs in rows
        ],
    }


def symmetric_point(K: int, M: int, N: int) -> tuple[tuple[Fraction, ...], Fraction]:
    """Equal-rate corner: d_k = M*N/(M+N) each, with the total K*M*N/(M+N).

    The point sits on the region boundary with every constraint tight:
    M*d + N*d = (M+N) * MN/(M+N) = M*N exactly.
    """
    if K < 2:
        raise ValueError(f"need at least two users, got K={K}")
    if not 1 <= M <= N:
        raise ValueError(f"need N >= M >= 1, got M={M}, N={N}")
    d = Fraction(M * N, M + N)
    return (d,) * K, K * d


@dataclass(frozen=True)
class StreamPlan:
    """Integer stream allocation realizing a rational DoF point.

    Over a block of ``rho`` symbol extensions, user k runs ``dbar[k]``
    streams on each of its M transmit antennas, for a share of
    M * dbar[k] / rho DoF (times the per-direction factor that tends
    to one).
    """

    rho: int
    dbar: tuple[int, ...]

    def __post_init__(self):
        if self.rho < 1:
            raise ValueError(f"rho must be a positive integer, got {self.rho}")
        if any(d < 0 for d in self.dbar):
            raise ValueError("stream counts must be nonnegative")

    def dof_point(self, M: int) -> tuple[Fraction, ...]:
        """The DoF point this plan realizes: exact round-trip of stream_plan."""
        return tuple(Fraction(M * d, self.rho) for d in self.dbar)


def stream_plan(point, M: int) -> StreamPlan:
    """Smallest integer realization of a rational DoF point.

    rho is the lcm of the denominators of d_k / M in lowest terms and
    dbar_k = rho * d_k / M, so plan.dof_point(M) reproduces the input
    exactly.
    """
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    pt = _point(point)
    shares = [d / M for d in pt]
    rho = 1
    for s in shares:
        rho = math.lcm(rho, s.denominator)
    dbar = tuple(int(s * rho) for s in shares)
    return StreamPlan(rho=rho, dbar=dbar)


def direction_counts(K: int, M: int, N: int, n: int) -> tuple[int, int]:
    """(transmit, interference) direction counts at level n, exact ints."""
    if K < 2 or M < 1 or N < 1 or n < 1:
        raise ValueError("need K >= 2, M >= 1, N >= 1, n >= 1")
    dim = K * (K - 1) * N * M
    return n ** dim, (n + 1) ** dim


def direction_budget(plan: StreamPlan, D: int, Dp: int, M: int, N: int) -> dict:
    """Receiver-side dimension accounting for a stream plan.

    Receiver j must resolve M * dbar_j * D desired directions plus at
    most N * Dp * max_{k != j} dbar_k aligned interference directions:

        G_j = M * D * dbar_j + N * Dp * max_{k != j} dbar_k
            <= (M * dbar_j + N * max_{k != j} dbar_k) * Dp
            <= rho * N * Dp

    where the last step holds exactly when the realized DoF point lies
    in the region.  Returns the three quantities per user plus whether
    the chain holds.
    """
    if D < 1 or Dp < D:
        raise ValueError("need interference count >= transmit count >= 1")
    K = len(plan.dbar)
    if K < 2:
        raise ValueError("need at least two users")
    budget = plan.rho * N * Dp
    per_user = []
    for j, dbar_j in enumerate(plan.dbar):
        other_max = max(d for i, d in enumerate(plan.dbar) if i != j)
        g = M * D * dbar_j + N * Dp * other_max
        middle = (M * dbar_j + N * other_max) * Dp
        per_user.append({
            "user": j,
            "G": g,
            "middle_bound": middle,
            "budget": budget,
            "within_budget": g <= middle <= budget,
        })
    return {
        "rho": plan.rho,
        "budget": budget,
        "per_user": per_user,
        "all_within": all(row["within_budget"] for row in per_user),
    }


def stream_dof_limit(plan: StreamPlan, M: int) -> tuple[Fraction, ...]:
    """Per-user DoF ceiling (M / rho) * dbar_j implied by the plan."""
    return tuple(Fraction(M * d, plan.rho) for d in plan.dbar)


def total_dof(K: int, N: int, n: int, M: int | None = None) -> Fraction:
    """Exact total DoF of the equal-share scheme at direction level n.

    Each of the K users contributes N * D / (D + Dp + 1); the value is
    increasing in n and approaches N * K / 2 from below.  M defaults
    to N.
    """
    if M is None:
        M = N
    D, Dp = direction_counts(K, M, N, n)
    return Fraction(K * N * D, D + Dp + 1)


def dof_gap(K: int, N: int, n: int, M: int | None = None) -> Fraction:
    """Shortfall of total_dof from the N * K / 2 limit (always positive)."""
    return Fraction(K * N, 2) - total_dof(K, N, n, M)


def region_vertices_2d(M: int, N: int) -> list[tuple[Fraction, Fraction]]:
    """Corner points of the two-user region, counterclockwise from origin.

    For M = N the two cross constraints coincide with d_1 + d_2 <= N and
    the region is the triangle (0,0), (N,0), (0,N); the symmetric corner
    (N/2, N/2) is interior to an edge and dropped.  For M < N the axis
    intercepts shrink to M and the region is the quadrilateral
    (0,0), (M,0), (MN/(M+N), MN/(M+N)), (0,M).
    """
    if not 1 <= M <= N:
        raise ValueError(f"need N >= M >= 1, got M={M}, N={N}")
    if M == N:
        return [
            (Fraction(0), Fraction(0)),
            (Fraction(N), Fraction(0)),
            (Fraction(0), Fraction(N)),
        ]
    corner = Fraction(M * N, M + N)
    return [
        (Fraction(0), Fraction(0)),
        (Fraction(M), Fraction(0)),
        (corner, corner),
        (Fraction(0), Fraction(M)),
    ]
