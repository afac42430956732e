"""Elevation-based greedy user grouping, max-min sub-array partitioning, and row assignment."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import mean_elevation
from .geometry import PropagationAngles, UserPlacement


class InfeasibleGroupingError(ValueError):
    """No threshold produces few enough groups for the available rows."""


class InfeasiblePartitionError(ValueError):
    """Row partition constraints cannot be met (n_groups^2 > m_v)."""


@dataclass(frozen=True)
class Grouping:
    """User groups plus the vertical sub-array serving each group.

    ``mean_elevation[i, j]`` is the mean elevation of group j's users taken
    over sub-array i's rows (first averaged per user over the sub-array, then
    over the group).
    """

    members: list[np.ndarray]      # 0-based user indices, one array per group
    row_counts: np.ndarray         # (n_groups,) rows per sub-array
    row_sets: list[np.ndarray]     # 0-based consecutive row indices per group
    mean_elevation: np.ndarray     # (n_groups, n_groups)
    final_threshold: float         # threshold used by the accepted grouping pass

    @property
    def n_groups(self) -> int:
        return len(self.members)

    @property
    def sizes(self) -> np.ndarray:
        return np.array([g.size for g in self.members])


def _grouping_pass(theta: np.ndarray, threshold: float, m_h: int) -> list[np.ndarray]:
    """One greedy sweep: repeatedly seed on the user closest to its sorted
    neighbors and absorb up to m_h - 1 neighbors within the threshold."""
    remaining = list(np.argsort(theta, kind="stable"))
    groups: list[np.ndarray] = []
    while remaining:
        th = theta[remaining]
        if len(remaining) == 1:
            seed_pos = 0
        else:
            gaps = np.diff(th)
            left = np.concatenate([[np.inf], gaps])
            right = np.concatenate([gaps, [np.inf]])
            seed_pos = int(np.argmin(np.minimum(left, right)))
        dist = np.abs(th - th[seed_pos])
        order = np.argsort(dist, kind="stable")
        near = [pos for pos in order if pos != seed_pos and dist[pos] < threshold]
        chosen = sorted([seed_pos] + near[: m_h - 1])
        groups.append(np.sort(np.asarray([remaining[pos] for pos in chosen])))
        remaining = [user for pos, user in enumerate(remaining) if pos not in set(chosen)]
    return groups


def greedy_grouping(
    theta: np.ndarray, theta_t0: float, m_h: int, m_v: int
) -> tuple[list[np.ndarray], float]:
    """Group users by elevation, doubling the distance threshold until the
    group count n_g satisfies n_g < m_v / n_g.

    Returns (groups, threshold used by the accepted pass). Raises
    InfeasibleGroupingError once the threshold reaches pi with the condition
    still failing (the m_h size cap then pins the group count forever).
    """
    theta = np.asarray(theta, dtype=float)
    if theta.ndim != 1 or theta.size == 0:
        raise ValueError("theta must be a nonempty 1-D array")
    if not theta_t0 > 0:
        raise ValueError("theta_t0 must be positive")
    threshold = float(theta_t0)
    while True:
        groups = _grouping_pass(theta, threshold, m_h)
        n_g = len(groups)
        if n_g * n_g < m_v:
            return groups, threshold
        if threshold >= math.pi:
            raise InfeasibleGroupingError(
                f"{n_g} groups of at most {m_h} users cannot satisfy"
                f" n_g^2 < m_v = {m_v} at any threshold"
            )
        threshold *= 2.0


def partition_rows(group_sizes, m_v: int) -> np.ndarray:
    """Max-min integer row allocation: maximize min_i rows_i / size_i subject
    to rows_i >= n_groups and sum rows_i <= m_v.

    Water-filling with unit increments: start every group at n_groups rows and
    repeatedly hand one row to the group with the smallest rows/size ratio
    (ties to the lowest index). Distributes all m_v rows.
    """
    sizes = np.asarray(group_sizes, dtype=float)
    if sizes.ndim != 1 or sizes.size == 0:
        raise ValueError("group_sizes must be a nonempty 1-D sequence")
    if np.any(sizes < 1):
        raise ValueError("group sizes must be positive")
    n_g = sizes.size
    if n_g * n_g > m_v:
        raise InfeasiblePartitionError(
            f"{n_g} groups need at least {n_g * n_g} rows, only {m_v} available"
        )
    counts = np.full(n_g, n_g, dtype=int)
    for _ in range(m_v - n_g * n_g):
        counts[int(np.argmin(counts / sizes))] += 1
    return counts


def assign_row_blocks(row_counts, order, m_v: int) -> list[np.ndarray]:
    """Allocate contiguous row blocks bottom-to-top in the given placement
    order; leftover rows (m_v - sum counts) go to the last placed block."""
    counts = np.asarray(row_counts, dtype=int)
    order = np.asarray(order, dtype=int)
    if sorted(order.tolist()) != list(range(counts.size)):
        raise ValueError("order must be a permutation of the group indices")
    total = int(counts.sum())
    if total > m_v:
        raise ValueError(f"row counts sum to {total} > m_v = {m_v}")
    sets: list[np.ndarray] = [np.empty(0, dtype=int)] * counts.size
    start = 0
    for pos, group in enumerate(order):
        count = int(counts[group])
        if pos == order.size - 1:
            count += m_v - total
        sets[group] = np.arange(start, start + count)
        start += count
    return sets


def group_mean_elevations(
    angles: PropagationAngles, members: list[np.ndarray], row_sets: list[np.ndarray]
) -> np.ndarray:
    """Matrix of group-mean elevations: entry (i, j) averages, over group j's
    users, each user's mean exact elevation across sub-array i's rows."""
    n_g = len(members)
    out = np.zeros((n_g, n_g))
    for i, rows in enumerate(row_sets):
        for j, users in enumerate(members):
            out[i, j] = np.mean([mean_elevation(angles, int(u), rows) for u in users])
    return out


def build_grouping(
    placement: UserPlacement,
    angles: PropagationAngles,
    theta_t0: float,
    m_h: int,
    m_v: int,
) -> Grouping:
    """Full pipeline: greedy groups, max-min row counts, block assignment in
    ascending order of group mean centroid elevation, then the mean-elevation
    matrix over the assigned blocks."""
    members, threshold = greedy_grouping(placement.theta, theta_t0, m_h, m_v)
    row_counts = partition_rows([g.size for g in members], m_v)
    centroid = np.array([placement.theta[g].mean() for g in members])
    order = np.argsort(centroid, kind="stable")
    row_sets = assign_row_blocks(row_counts, order, m_v)
    return Grouping(
        members=members,
        row_counts=row_counts,
        row_sets=row_sets,
        mean_elevation=group_mean_elevations(angles, members, row_sets),
        final_threshold=threshold,
    )


def grouping_report(grouping: Grouping) -> str:
    """Human-readable grouping summary for debugging dumps."""
    lines = [
        f"groups={grouping.n_groups} threshold_deg={math.degrees(grouping.final_threshold):.4g}"
    ]
    for i, (users, rows) in enumerate(zip(grouping.members, grouping.row_sets)):
        mean_deg = ", ".join(
            f"{math.degrees(grouping.mean_elevation[i, j]):.3f}" for j in range(grouping.n_groups)
        )
        lines.append(
            f"  group {i}: users={users.tolist()} rows={rows[0]}..{rows[-1]}"
            f" mean_elev_deg=[{mean_deg}]"
        )
    return "\n".join(lines)
