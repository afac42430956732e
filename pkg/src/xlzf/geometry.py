"""Uniform rectangular array layout, user placement, and per-element propagation geometry.

Coordinate convention: the array lies in the y-z plane with boresight along +x.
Azimuth is the quadrant-aware angle in the x-y plane (atan2(y, x), with
atan2(0, 0) = 0) and elevation is measured from the x-y plane via the
z-component (asin(z / r)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import ScenarioParams

ELEVATION_CLIP = np.pi / 2 - 1e-6


class DegenerateGeometryError(ValueError):
    """A user position coincides with an antenna element."""


@dataclass(frozen=True)
class ArrayGeometry:
    """Half-wavelength-spaced URA centered on the origin.

    Element (column m, row n), both 0-based, sits at linear index
    ``n * m_h + m``; the same stacking is used by all channel vectors.
    """

    m_h: int
    m_v: int
    wavelength: float
    positions: np.ndarray  # (m_h * m_v, 3) meters

    @property
    def m(self) -> int:
        return self.m_h * self.m_v


@dataclass(frozen=True)
class UserPlacement:
    """Per-user positions in both spherical and Cartesian form."""

    r: np.ndarray          # (U,) meters
    phi: np.ndarray        # (U,) radians, azimuth
    theta: np.ndarray      # (U,) radians, elevation
    cartesian: np.ndarray  # (U, 3) meters
    cluster_of: np.ndarray  # (U,) 0-based elevation-cluster index

    @property
    def count(self) -> int:
        return self.r.size


@dataclass(frozen=True)
class PropagationAngles:
    """Exact distance/azimuth/elevation from every user to every element.

    Arrays have shape (U, m_v, m_h); flattening the last two axes (C order)
    matches the channel stacking ``n * m_h + m``.
    """

    distance: np.ndarray
    azimuth: np.ndarray
    elevation: np.ndarray


def build_array(m_h: int, m_v: int, wavelength: float) -> ArrayGeometry:
    """Build the URA element coordinates on a half-wavelength grid."""
    if m_h < 1 or m_v < 1:
        raise ValueError("array dimensions must be positive integers")
    if not wavelength > 0:
        raise ValueError("wavelength must be positive")
    y = (np.arange(m_h) - (m_h - 1) / 2) * (wavelength / 2)
    z = (np.arange(m_v) - (m_v - 1) / 2) * (wavelength / 2)
    positions = np.zeros((m_h * m_v, 3))
    positions[:, 1] = np.tile(y, m_v)
    positions[:, 2] = np.repeat(z, m_h)
    return ArrayGeometry(m_h=m_h, m_v=m_v, wavelength=float(wavelength), positions=positions)


def spherical_to_cartesian(r, phi, theta) -> np.ndarray:
    """(r, azimuth, elevation) -> stacked (..., 3) Cartesian coordinates."""
    r = np.asarray(r, dtype=float)
    phi = np.asarray(phi, dtype=float)
    theta = np.asarray(theta, dtype=float)
    return np.stack(
        [r * np.cos(theta) * np.cos(phi), r * np.cos(theta) * np.sin(phi), r * np.sin(theta)],
        axis=-1,
    )


def cartesian_to_spherical(xyz) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Inverse of spherical_to_cartesian; returns (r, azimuth, elevation)."""
    xyz = np.asarray(xyz, dtype=float)
    r = np.linalg.norm(xyz, axis=-1)
    phi = np.arctan2(xyz[..., 1], xyz[..., 0])
    with np.errstate(invalid="ignore"):
        sin_el = np.where(r > 0, xyz[..., 2] / np.where(r > 0, r, 1.0), 0.0)
    theta = np.arcsin(np.clip(sin_el, -1.0, 1.0))
    return r, phi, theta


def propagation_angles(placement: UserPlacement, geometry: ArrayGeometry) -> PropagationAngles:
    """Exact spherical decomposition of every user-to-element offset."""
    delta = placement.cartesian[:, None, :] - geometry.positions[None, :, :]
    dist = np.linalg.norm(delta, axis=-1)
    if np.any(dist == 0.0):
        users = np.unique(np.nonzero(dist == 0.0)[0])
        raise DegenerateGeometryError(
            f"user(s) {users.tolist()} coincide with an antenna element"
        )
    azimuth = np.arctan2(delta[..., 1], delta[..., 0])
    azimuth = np.where(azimuth == -np.pi, np.pi, azimuth)  # keep range (-pi, pi]
    elevation = np.arcsin(np.clip(delta[..., 2] / dist, -1.0, 1.0))
    shape = (placement.count, geometry.m_v, geometry.m_h)
    return PropagationAngles(
        distance=dist.reshape(shape),
        azimuth=azimuth.reshape(shape),
        elevation=elevation.reshape(shape),
    )


def placement_from_cartesian(points, cluster_of=None) -> UserPlacement:
    """UserPlacement from explicit Cartesian positions (single cluster by default)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    r, phi, theta = cartesian_to_spherical(pts)
    if cluster_of is None:
        cluster_of = np.zeros(pts.shape[0], dtype=int)
    return UserPlacement(
        r=r, phi=phi, theta=theta, cartesian=pts,
        cluster_of=np.asarray(cluster_of, dtype=int),
    )


def cluster_sizes(u: int, n_c: int) -> list[int]:
    """ceil(u/n_c)-rule split: the first u % n_c clusters get the extra user."""
    base, extra = divmod(u, n_c)
    return [base + 1 if g < extra else base for g in range(n_c)]


def sample_placement(params: ScenarioParams, rng: np.random.Generator) -> UserPlacement:
    """Draw one trial's user positions.

    Radial coordinates are uniform in [d, 2d] half-wavelengths (converted to
    meters), azimuths uniform in +/- s_az. Users are split into n_c elevation
    clusters; cluster means are uniform in +/- s_el and per-user elevations are
    Gaussian around their cluster mean, clipped away from the poles.

    Draw order (fixed for reproducibility): radii, azimuths, cluster means,
    per-user elevations.
    """
    if params.u < params.n_c:
        raise ValueError("u must be at least n_c (empty clusters otherwise)")
    half_wl = params.wavelength / 2
    r = rng.uniform(params.d, 2 * params.d, size=params.u) * half_wl
    phi = rng.uniform(-params.s_az, params.s_az, size=params.u)
    mu = rng.uniform(-params.s_el, params.s_el, size=params.n_c)
    cluster_of = np.repeat(np.arange(params.n_c), cluster_sizes(params.u, params.n_c))
    theta = rng.normal(mu[cluster_of], params.sigma_g)
    theta = np.clip(theta, -ELEVATION_CLIP, ELEVATION_CLIP)
    return UserPlacement(
        r=r,
        phi=phi,
        theta=theta,
        cartesian=spherical_to_cartesian(r, phi, theta),
        cluster_of=cluster_of,
    )
