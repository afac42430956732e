"""Per-user SINR, sum rates, time-sharing normalization, and figure statistics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .precoders import PrecodeResult


@dataclass(frozen=True)
class MetricsRecord:
    """One scheme's metrics for one trial; SINRs are linear scale."""

    per_user_sinr: np.ndarray
    sum_rate: float
    normalized_sum_rate: float
    scheme: str
    trial_seed: int


def sinr(channels: np.ndarray, precode: PrecodeResult, noise_var: float) -> np.ndarray:
    """Per-user linear SINR against the exact channels.

    Only users sharing a slot interfere; under orthogonal scheduling the
    cross-slot terms are zero by construction. A zero precoding vector
    (degenerate user) yields SINR 0.
    """
    if not noise_var > 0:
        raise ValueError("noise_var must be positive")
    channels = np.asarray(channels)
    u = channels.shape[1]
    gram = channels.conj().T @ precode.vectors  # gram[j, p] = h_j^H f_p
    out = np.zeros(u)
    for slot in precode.slots:
        sub = np.abs(gram[np.ix_(slot, slot)]) ** 2
        signal = np.diag(sub)
        interference = sub.sum(axis=1) - signal
        out[slot] = signal / (interference + noise_var)
    return out


def sum_rate(sinrs: np.ndarray) -> float:
    """Shannon sum rate in bits/s/Hz over all users."""
    sinrs = np.asarray(sinrs, dtype=float)
    if np.any(sinrs < 0):
        raise ValueError("SINRs must be nonnegative")
    return float(np.log2(1.0 + sinrs).sum())


def normalize_rate(sr: float, n_slots: int) -> float:
    """Divide by the slot count to account for time sharing."""
    if n_slots < 1:
        raise ValueError("n_slots must be at least 1")
    return sr / n_slots


def median(samples) -> float:
    """Midpoint-of-two-central-order-statistics median."""
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise ValueError("median of empty sample set")
    return float(np.median(samples))


def ecdf(samples) -> tuple[np.ndarray, np.ndarray]:
    """Empirical CDF step points: sorted values with probabilities k/N."""
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise ValueError("ecdf of empty sample set")
    values = np.sort(samples)
    return values, np.arange(1, values.size + 1) / values.size


def to_db(linear) -> np.ndarray:
    """10 log10, with 0 mapping to -inf."""
    linear = np.asarray(linear, dtype=float)
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(linear)
