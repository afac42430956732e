"""ZF, MZF, TZF, and MRT precoding vector sets under a scheduling mode and power policy."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelSet, mean_horizontal_channel, steering_vertical
from .grouping import Grouping
from .numerics import DEFAULT_TOL, ToleranceParams, nullspace_project

SIMULTANEOUS = "simultaneous"
ORTHOGONAL = "orthogonal"


class DegenerateUserError(RuntimeError):
    """A user's projected precoding direction collapsed to (numerically) zero."""

    def __init__(self, users):
        self.users = tuple(int(u) for u in users)
        super().__init__(f"zero precoding direction for user(s) {list(self.users)}")


class InfeasibleScheduleError(ValueError):
    """A slot violates the scheme's feasibility bound on scheduled users."""


@dataclass(frozen=True)
class PowerPolicy:
    """Total transmit power with an equal split over the users active in a slot."""

    total_power: float = 1.0

    def split(self, n_active: int) -> np.ndarray:
        if n_active < 1:
            raise ValueError("need at least one active user")
        return np.full(n_active, self.total_power / n_active)


@dataclass(frozen=True)
class PrecodeResult:
    """Per-user precoding vectors (columns of an (M, U) matrix) plus scheduling
    metadata. Degenerate users keep an all-zero column."""

    vectors: np.ndarray
    scheme: str
    schedule: str
    slots: list[np.ndarray]
    degenerate: tuple[int, ...] = field(default=())


def _resolve_slots(slots, u: int) -> tuple[list[np.ndarray], str]:
    if slots is None:
        return [np.arange(u)], SIMULTANEOUS
    resolved = [np.asarray(s, dtype=int) for s in slots]
    combined = np.concatenate(resolved) if resolved else np.empty(0, dtype=int)
    if sorted(combined.tolist()) != list(range(u)):
        raise ValueError("slots must partition the full user set")
    return resolved, ORTHOGONAL


def _finish(direction: np.ndarray, power: float, reference: float, user: int,
            tol: ToleranceParams, on_degenerate: str, degenerate: list[int]) -> np.ndarray:
    """Scale a projected direction to the allotted power, or flag it degenerate."""
    norm = np.linalg.norm(direction)
    if norm <= tol.residual_tol * reference:
        if on_degenerate == "raise":
            raise DegenerateUserError([user])
        degenerate.append(int(user))
        return np.zeros_like(direction)
    return direction * (np.sqrt(power) / norm)


def zf(
    channels: np.ndarray,
    power: PowerPolicy,
    tol: ToleranceParams = DEFAULT_TOL,
    *,
    slots=None,
    on_degenerate: str = "raise",
) -> PrecodeResult:
    """Classical zero-forcing: each user's channel projected onto the null
    space of the other scheduled users' channels, scaled to its power share.

    ``channels`` is (M, U) with one column per user. ``slots`` partitions the
    users into orthogonal resources (None = all users simultaneous); the
    feasibility bound is |slot| <= M.
    """
    channels = np.asarray(channels)
    m, u = channels.shape
    slot_list, schedule = _resolve_slots(slots, u)
    vectors = np.zeros((m, u), dtype=complex)
    degenerate: list[int] = []
    for slot in slot_list:
        if slot.size > m:
            raise InfeasibleScheduleError(
                f"{slot.size} users exceed {m} antennas in one slot"
            )
        shares = power.split(slot.size)
        for k, user in enumerate(slot):
            others = slot[slot != user]
            h_tilde = channels[:, others].conj().T
            direction = nullspace_project(h_tilde, channels[:, user], tol)
            vectors[:, user] = _finish(
                direction, shares[k], np.linalg.norm(channels[:, user]), user,
                tol, on_degenerate, degenerate,
            )
    return PrecodeResult(vectors, "ZF", schedule, slot_list, tuple(degenerate))


def mrt(
    channels: np.ndarray,
    power: PowerPolicy,
    *,
    slots=None,
    on_degenerate: str = "raise",
) -> PrecodeResult:
    """Matched-filter precoding: each vector proportional to the user's channel."""
    channels = np.asarray(channels)
    m, u = channels.shape
    slot_list, schedule = _resolve_slots(slots, u)
    vectors = np.zeros((m, u), dtype=complex)
    degenerate: list[int] = []
    for slot in slot_list:
        shares = power.split(slot.size)
        for k, user in enumerate(slot):
            h = channels[:, user]
            norm = np.linalg.norm(h)
            if norm == 0.0:
                if on_degenerate == "raise":
                    raise DegenerateUserError([user])
                degenerate.append(int(user))
                continue
            vectors[:, user] = h * (np.sqrt(shares[k]) / norm)
    return PrecodeResult(vectors, "MRT", schedule, slot_list, tuple(degenerate))


def mzf(
    channel_set: ChannelSet,
    grouping: Grouping,
    power: PowerPolicy,
    tol: ToleranceParams = DEFAULT_TOL,
    *,
    on_degenerate: str = "raise",
) -> PrecodeResult:
    """Mean-angle zero-forcing over vertical sub-arrays.

    Per group: azimuth beamformers null the row-averaged horizontal channels of
    the other group members; a shared elevation beamformer (on the group's row
    block) nulls the steering vectors at the other groups' mean elevations.
    Each user's vector is the Kronecker product of the two, embedded with zeros
    outside the group's rows, with all users served simultaneously.
    """
    geom = channel_set.geometry
    m_h, m_v, m = geom.m_h, geom.m_v, geom.m
    u = channel_set.exact.shape[1]
    n_g = grouping.n_groups
    for i, members in enumerate(grouping.members):
        if members.size > m_h:
            raise ValueError(f"group {i} has {members.size} users > m_h = {m_h}")
        if grouping.row_sets[i].size < n_g:
            raise ValueError(
                f"sub-array {i} has {grouping.row_sets[i].size} rows < n_groups = {n_g}"
            )
    shares = power.split(u)
    vectors = np.zeros((m, u), dtype=complex)
    degenerate: list[int] = []
    for i, members in enumerate(grouping.members):
        rows = grouping.row_sets[i]
        m_vi = rows.size
        own_steer = steering_vertical(grouping.mean_elevation[i, i], m_vi)
        inter = [
            steering_vertical(grouping.mean_elevation[i, j], m_vi)
            for j in range(n_g)
            if j != i
        ]
        h_tilde_v = np.stack(inter).conj() if inter else np.zeros((0, m_vi), dtype=complex)
        f_v = nullspace_project(h_tilde_v, own_steer, tol)
        if np.linalg.norm(f_v) <= tol.residual_tol * np.sqrt(m_vi):
            if on_degenerate == "raise":
                raise DegenerateUserError(members)
            degenerate.extend(int(x) for x in members)
            continue
        means = {
            int(user): mean_horizontal_channel(channel_set.exact[:, user], rows, m_h)
            for user in members
        }
        for user in members:
            user = int(user)
            others = [means[int(j)] for j in members if int(j) != user]
            h_tilde_h = (
                np.stack(others).conj() if others else np.zeros((0, m_h), dtype=complex)
            )
            f_h = nullspace_project(h_tilde_h, means[user], tol)
            plane = np.zeros((m_v, m_h), dtype=complex)
            plane[rows] = np.outer(f_v, f_h)
            vectors[:, user] = _finish(
                plane.ravel(), shares[user], np.linalg.norm(means[user]) * np.sqrt(m_vi),
                user, tol, on_degenerate, degenerate,
            )
    slot_list, schedule = _resolve_slots(None, u)
    return PrecodeResult(vectors, "MZF", schedule, slot_list, tuple(degenerate))


def tzf(
    planewave_h: np.ndarray,
    planewave_v: np.ndarray,
    power: PowerPolicy,
    tol: ToleranceParams = DEFAULT_TOL,
    *,
    slots=None,
    on_degenerate: str = "raise",
) -> PrecodeResult:
    """Tensor zero-forcing: horizontal-domain nulling Kronecker a vertical
    matched filter, built from the plane-wave factors of the scheduled users.

    Feasibility bound: at most m_h users per slot (the nulling happens in the
    horizontal domain only).
    """
    planewave_h = np.asarray(planewave_h)
    planewave_v = np.asarray(planewave_v)
    u, m_h = planewave_h.shape
    m_v = planewave_v.shape[1]
    slot_list, schedule = _resolve_slots(slots, u)
    vectors = np.zeros((m_h * m_v, u), dtype=complex)
    degenerate: list[int] = []
    for slot in slot_list:
        if slot.size > m_h:
            raise InfeasibleScheduleError(
                f"{slot.size} users exceed the horizontal bound m_h = {m_h} in one slot"
            )
        shares = power.split(slot.size)
        for k, user in enumerate(slot):
            others = slot[slot != user]
            h_tilde = planewave_h[others].conj()
            f_h = nullspace_project(h_tilde, planewave_h[user], tol)
            direction = np.kron(planewave_v[user], f_h)
            vectors[:, user] = _finish(
                direction, shares[k], np.sqrt(m_h * m_v), user,
                tol, on_degenerate, degenerate,
            )
    return PrecodeResult(vectors, "TZF", schedule, slot_list, tuple(degenerate))


def tzf_direction_general(
    h_v: np.ndarray, h_h: np.ndarray, proj_v: np.ndarray, proj_h: np.ndarray
) -> np.ndarray:
    """Unsimplified two-domain direction: apply I - (P_v kron P_h) to the
    Kronecker channel, materializing the full (M, M) projector. Kept as the
    reference form for validating the horizontal-only fast path."""
    hk = np.kron(h_v, h_h)
    return hk - np.kron(proj_v, proj_h) @ hk


def schedule_orthogonal(grouping: Grouping) -> list[np.ndarray]:
    """One time-frequency slot per user group."""
    return [g.copy() for g in grouping.members]
