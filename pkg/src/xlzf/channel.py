"""Exact spherical-wave LOS channels and their plane-wave Kronecker factorizations.

Phase convention: channel entries are exp(+j 2pi r / lambda) with r the exact
user-to-element distance, so that in the far field the channel factorizes
exactly (up to a global phase) into the vertical x horizontal steering factors
below. Every downstream metric depends on |.|^2 only and is invariant to this
global conjugation.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .geometry import ArrayGeometry, PropagationAngles, UserPlacement, propagation_angles

GainPolicy = Callable[[PropagationAngles], np.ndarray]


def unit_gain(angles: PropagationAngles) -> np.ndarray:
    """Unit gain for every (user, element) pair; the only shipped policy."""
    return np.ones_like(angles.distance)


@dataclass(frozen=True)
class ChannelSet:
    """Per-trial channel state: exact vectors plus derived plane-wave views.

    ``exact`` stores the per-user channels as columns of an (M, U) matrix; the
    plane-wave factors are unit-modulus steering vectors built from each user's
    centroid angles.
    """

    geometry: ArrayGeometry
    angles: PropagationAngles
    exact: np.ndarray          # (M, U) complex
    gains: np.ndarray          # (U, M) nonnegative, flat index matches exact
    planewave_h: np.ndarray    # (U, m_h) complex
    planewave_v: np.ndarray    # (U, m_v) complex
    planewave_gain: np.ndarray  # (U,)


def planewave_factors(
    placement: UserPlacement, geometry: ArrayGeometry
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Horizontal/vertical steering factors from the users' centroid angles.

    Returns (h_h, h_v, gain) with shapes (U, m_h), (U, m_v), (U,). Entry m of
    h_h is exp(-j pi (m - (m_h-1)/2) cos(theta) sin(phi)); entry n of h_v is
    exp(-j pi (n - (m_v-1)/2) sin(theta)).
    """
    mm = np.arange(geometry.m_h) - (geometry.m_h - 1) / 2
    nn = np.arange(geometry.m_v) - (geometry.m_v - 1) / 2
    az = np.cos(placement.theta) * np.sin(placement.phi)
    h_h = np.exp(-1j * np.pi * np.outer(az, mm))
    h_v = np.exp(-1j * np.pi * np.outer(np.sin(placement.theta), nn))
    return h_h, h_v, np.ones(placement.count)


def exact_channel(
    placement: UserPlacement,
    geometry: ArrayGeometry,
    gain_policy: GainPolicy = unit_gain,
) -> ChannelSet:
    """Synthesize the exact spherical-wave channels and plane-wave views."""
    angles = propagation_angles(placement, geometry)
    gains = gain_policy(angles).reshape(placement.count, geometry.m)
    dist = angles.distance.reshape(placement.count, geometry.m)
    per_user = np.sqrt(gains) * np.exp(2j * np.pi * dist / geometry.wavelength)
    h_h, h_v, pw_gain = planewave_factors(placement, geometry)
    return ChannelSet(
        geometry=geometry,
        angles=angles,
        exact=np.ascontiguousarray(per_user.T),
        gains=gains,
        planewave_h=h_h,
        planewave_v=h_v,
        planewave_gain=pw_gain,
    )


def subarray_channel(h: np.ndarray, kind: str, index: int, m_h: int) -> np.ndarray:
    """Extract one horizontal row (length m_h) or vertical column (length m_v).

    ``index`` is 0-based: a row index in range(m_v) for kind="horizontal", a
    column index in range(m_h) for kind="vertical".
    """
    h = np.asarray(h)
    if h.ndim != 1 or h.size % m_h != 0:
        raise ValueError("channel length must be a multiple of m_h")
    m_v = h.size // m_h
    if kind == "horizontal":
        if not 0 <= index < m_v:
            raise ValueError(f"row index {index} out of range for m_v={m_v}")
        return h[index * m_h : (index + 1) * m_h].copy()
    if kind == "vertical":
        if not 0 <= index < m_h:
            raise ValueError(f"column index {index} out of range for m_h={m_h}")
        return h[index::m_h].copy()
    raise ValueError(f"kind must be 'horizontal' or 'vertical', got {kind!r}")


def mean_horizontal_channel(h: np.ndarray, rows, m_h: int) -> np.ndarray:
    """Arithmetic mean of the selected horizontal row sub-channels."""
    rows = np.asarray(rows, dtype=int)
    if rows.size == 0:
        raise ValueError("row set must be nonempty")
    h = np.asarray(h)
    if h.size % m_h != 0:
        raise ValueError("channel length must be a multiple of m_h")
    grid = h.reshape(-1, m_h)
    if rows.min() < 0 or rows.max() >= grid.shape[0]:
        raise ValueError("row index out of range")
    return grid[rows].mean(axis=0)


def mean_elevation(angles: PropagationAngles, user: int, rows) -> float:
    """Mean exact elevation of one user over the selected rows (all columns)."""
    rows = np.asarray(rows, dtype=int)
    if rows.size == 0:
        raise ValueError("row set must be nonempty")
    return float(angles.elevation[user, rows, :].mean())


def steering_vertical(theta: float, length: int) -> np.ndarray:
    """Centered vertical steering vector of the given length for elevation theta."""
    if length < 1:
        raise ValueError("length must be positive")
    nn = np.arange(length) - (length - 1) / 2
    return np.exp(-1j * np.pi * nn * np.sin(theta))


def write_channel_dump(channels: ChannelSet, path: str | Path) -> None:
    """Textual channel dump for cross-implementation comparison.

    Line 1: ``m_h m_v u wavelength``. Then one line per antenna index with
    alternating real/imag parts of each user's entry, full float precision.
    """
    geom = channels.geometry
    exact = channels.exact
    lines = [f"{geom.m_h} {geom.m_v} {exact.shape[1]} {float(geom.wavelength)!r}"]
    for i in range(exact.shape[0]):
        parts = []
        for u in range(exact.shape[1]):
            parts.append(repr(float(exact[i, u].real)))
            parts.append(repr(float(exact[i, u].imag)))
        lines.append(" ".join(parts))
    Path(path).write_text("\n".join(lines) + "\n")


def read_channel_dump(path: str | Path) -> tuple[int, int, float, np.ndarray]:
    """Parse a channel dump; returns (m_h, m_v, wavelength, exact (M, U))."""
    lines = Path(path).read_text().splitlines()
    header = lines[0].split()
    m_h, m_v, u = int(header[0]), int(header[1]), int(header[2])
    wavelength = float(header[3])
    m = m_h * m_v
    if len(lines) != m + 1:
        raise ValueError(f"expected {m} matrix rows, found {len(lines) - 1}")
    exact = np.zeros((m, u), dtype=complex)
    for i, line in enumerate(lines[1:]):
        vals = [float(tok) for tok in line.split()]
        if len(vals) != 2 * u:
            raise ValueError(f"row {i}: expected {2 * u} values, found {len(vals)}")
        exact[i] = np.asarray(vals[0::2]) + 1j * np.asarray(vals[1::2])
    return m_h, m_v, wavelength, exact
