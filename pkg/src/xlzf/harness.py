"""Monte Carlo experiment runner: per-trial orchestration, presets, and CSV emission."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .channel import ChannelSet, exact_channel
from .config import ScenarioParams
from .geometry import build_array, sample_placement
from .grouping import Grouping, InfeasibleGroupingError, build_grouping, grouping_report
from .metrics import MetricsRecord, median, normalize_rate, sinr, sum_rate, to_db
from .numerics import DEFAULT_TOL
from .precoders import (
    InfeasibleScheduleError,
    PowerPolicy,
    PrecodeResult,
    mzf,
    schedule_orthogonal,
    tzf,
    zf,
)

EXP1_HEADER = "d_half_wl,scheme,median_sinr_db"
EXP2_HEADER = "sigma_deg,scheme,median_sinr_db"
EXP3_HEADER = "n_clusters,scheme,trial,sum_rate_bps_hz"
RUN_HEADER = "scheme,metric,value,trial"

EXP2_SIGMA_DEG = (0.25, 0.5, 1.0, 2.0, 4.0, 8.0)
EXP3_N_C = (2, 3, 4)


@dataclass(frozen=True)
class TrialRecord:
    """Everything one trial produced; identical across runs and worker counts
    for the same (params, grid_index, trial index)."""

    index: int
    seed: int
    metrics: dict[str, MetricsRecord]
    infeasible: tuple[str, ...]
    n_groups: int
    group_sizes: tuple[int, ...]
    degenerate_users: int
    grouping_dump: str | None = None


@dataclass(frozen=True)
class GridPoint:
    """One sweep point: the swept value plus the full parameter set."""

    index: int
    value: float
    params: ScenarioParams


def trial_seed_sequence(params: ScenarioParams, grid_index: int, trial_index: int):
    return np.random.SeedSequence([params.master_seed, grid_index, trial_index])


def _precode_scheme(
    scheme: str, chans: ChannelSet, grouping: Grouping | None, power: PowerPolicy
) -> PrecodeResult:
    if scheme == "ZF":
        return zf(chans.exact, power, DEFAULT_TOL, on_degenerate="zero")
    if grouping is None:
        raise InfeasibleScheduleError(f"{scheme} needs a feasible user grouping")
    if scheme == "ZF-ortho":
        return zf(
            chans.exact, power, DEFAULT_TOL,
            slots=schedule_orthogonal(grouping), on_degenerate="zero",
        )
    if scheme == "MZF":
        return mzf(chans, grouping, power, DEFAULT_TOL, on_degenerate="zero")
    if scheme == "TZF-ortho":
        return tzf(
            chans.planewave_h, chans.planewave_v, power, DEFAULT_TOL,
            slots=schedule_orthogonal(grouping), on_degenerate="zero",
        )
    raise ValueError(f"unknown scheme {scheme!r}")


def run_trial(
    params: ScenarioParams,
    trial_index: int,
    grid_index: int = 0,
    dump_grouping: bool = False,
) -> TrialRecord:
    """Place users, build channels, group, precode every requested scheme, and
    measure. Infeasible schemes and degenerate users are recorded, never raised."""
    ss = trial_seed_sequence(params, grid_index, trial_index)
    seed = int(ss.generate_state(1, np.uint64)[0])
    rng = np.random.default_rng(ss)
    geometry = build_array(params.m_h, params.m_v, params.wavelength)
    placement = sample_placement(params, rng)
    chans = exact_channel(placement, geometry)
    try:
        grouping = build_grouping(
            placement, chans.angles, params.theta_t0, params.m_h, params.m_v
        )
    except InfeasibleGroupingError:
        grouping = None
    power = PowerPolicy(1.0)
    metrics: dict[str, MetricsRecord] = {}
    infeasible: list[str] = []
    degenerate_total = 0
    for scheme in params.schemes:
        try:
            result = _precode_scheme(scheme, chans, grouping, power)
        except InfeasibleScheduleError:
            infeasible.append(scheme)
            continue
        sinrs = sinr(chans.exact, result, params.noise_var)
        rate = sum_rate(sinrs)
        metrics[scheme] = MetricsRecord(
            per_user_sinr=sinrs,
            sum_rate=rate,
            normalized_sum_rate=normalize_rate(rate, len(result.slots)),
            scheme=scheme,
            trial_seed=seed,
        )
        degenerate_total += len(result.degenerate)
    return TrialRecord(
        index=trial_index,
        seed=seed,
        metrics=metrics,
        infeasible=tuple(infeasible),
        n_groups=grouping.n_groups if grouping is not None else 0,
        group_sizes=tuple(int(s) for s in grouping.sizes) if grouping is not None else (),
        degenerate_users=degenerate_total,
        grouping_dump=grouping_report(grouping) if dump_grouping and grouping else None,
    )


def _run_trial_args(args) -> TrialRecord:
    return run_trial(*args)


def run_trials(
    params: ScenarioParams,
    grid_index: int = 0,
    workers: int = 1,
    dump_grouping: bool = False,
) -> list[TrialRecord]:
    """Run all trials of one configuration, optionally across processes.

    Trials are independent and merged by index, so the records do not depend
    on the worker count.
    """
    arglist = [
        (params, t, grid_index, dump_grouping) for t in range(params.trials)
    ]
    if workers <= 1:
        return [_run_trial_args(a) for a in arglist]
    chunksize = max(1, params.trials // (workers * 4))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_trial_args, arglist, chunksize=chunksize))


def run_grid(
    points: list[GridPoint], workers: int = 1, dump_grouping: bool = False
) -> list[list[TrialRecord]]:
    """Run every grid point; seeding keys on each point's own index, so results
    at one point never depend on which other points are present."""
    return [
        run_trials(p.params, grid_index=p.index, workers=workers, dump_grouping=dump_grouping)
        for p in points
    ]


def far_field_distance(params: ScenarioParams, meters: float = 750.0) -> float:
    """The d (half-wavelength units) placing users at the given metric range."""
    return meters / (params.wavelength / 2)


def exp1_points(base: ScenarioParams) -> list[GridPoint]:
    """Distance sweep: log-spaced d over 10^1..10^4 half-wavelengths, 8 points."""
    grid = np.logspace(1.0, 4.0, 8)
    return [
        GridPoint(index=i, value=float(d), params=replace(base, d=float(d), n_c=2))
        for i, d in enumerate(grid)
    ]


def exp2_points(base: ScenarioParams) -> list[GridPoint]:
    """Intra-cluster elevation-spread sweep at a fixed 750 m range."""
    d = far_field_distance(base)
    return [
        GridPoint(
            index=i,
            value=s,
            params=replace(base, sigma_g=math.radians(s), d=d),
        )
        for i, s in enumerate(EXP2_SIGMA_DEG)
    ]


def exp3_points(base: ScenarioParams) -> list[GridPoint]:
    """Cluster-count sweep at a fixed 750 m range."""
    d = far_field_distance(base)
    return [
        GridPoint(index=i, value=float(n), params=replace(base, n_c=n, d=d))
        for i, n in enumerate(EXP3_N_C)
    ]


def pooled_sinr_db(records: list[TrialRecord], scheme: str) -> np.ndarray:
    """All per-user SINRs (dB) of one scheme pooled across trials, trial order."""
    chunks = [
        to_db(r.metrics[scheme].per_user_sinr) for r in records if scheme in r.metrics
    ]
    if not chunks:
        return np.empty(0)
    return np.concatenate(chunks)


def median_sinr_db(records: list[TrialRecord], scheme: str) -> float:
    """Median of the pooled per-user dB SINRs (nan if the scheme never ran)."""
    pool = pooled_sinr_db(records, scheme)
    if pool.size == 0:
        return float("nan")
    return median(pool)


def _fmt(x) -> str:
    return repr(float(x))


def _write_lines(path: str | Path, header: str, rows: list[str]) -> None:
    Path(path).write_text("\n".join([header, *rows]) + "\n")


def write_sweep_csv(
    path: str | Path,
    header: str,
    points: list[GridPoint],
    results: list[list[TrialRecord]],
) -> None:
    """Aggregate CSV for the median-SINR sweeps (one row per point and scheme)."""
    rows = []
    for point, records in zip(points, results):
        for scheme in point.params.schemes:
            rows.append(f"{_fmt(point.value)},{scheme},{_fmt(median_sinr_db(records, scheme))}")
    _write_lines(path, header, rows)


def write_exp3_csv(
    path: str | Path, points: list[GridPoint], results: list[list[TrialRecord]]
) -> None:
    """Per-trial normalized sum rates for ECDF plotting; infeasible trials emit
    no row for the affected scheme."""
    rows = []
    for point, records in zip(points, results):
        for scheme in point.params.schemes:
            for record in records:
                if scheme in record.metrics:
                    rows.append(
                        f"{int(point.value)},{scheme},{record.index},"
                        f"{_fmt(record.metrics[scheme].normalized_sum_rate)}"
                    )
    _write_lines(path, EXP3_HEADER, rows)


def write_per_trial_csv(
    path: str | Path,
    label: str,
    points: list[GridPoint],
    results: list[list[TrialRecord]],
) -> None:
    """Per-user dump behind the sweep aggregates, for exact recomputation."""
    rows = []
    for point, records in zip(points, results):
        for scheme in point.params.schemes:
            for record in records:
                if scheme not in record.metrics:
                    continue
                for user, value in enumerate(to_db(record.metrics[scheme].per_user_sinr)):
                    rows.append(
                        f"{_fmt(point.value)},{scheme},{record.index},{user},{_fmt(value)}"
                    )
    _write_lines(path, f"{label},scheme,trial,user,sinr_db", rows)


def write_run_csv(path: str | Path, params: ScenarioParams, records: list[TrialRecord]) -> None:
    """Long-format per-trial dump for a single configuration.

    Per (trial, scheme): a feasible flag row, then (when feasible) sum rate,
    normalized sum rate, per-user SINRs in dB, and the degenerate-user count.
    """
    rows = []
    for record in records:
        for scheme in params.schemes:
            feasible = scheme in record.metrics
            rows.append(f"{scheme},feasible,{int(feasible)},{record.index}")
            if not feasible:
                continue
            rec = record.metrics[scheme]
            rows.append(f"{scheme},sum_rate_bps_hz,{_fmt(rec.sum_rate)},{record.index}")
            rows.append(
                f"{scheme},normalized_sum_rate_bps_hz,"
                f"{_fmt(rec.normalized_sum_rate)},{record.index}"
            )
            for value in to_db(rec.per_user_sinr):
                rows.append(f"{scheme},sinr_db,{_fmt(value)},{record.index}")
        rows.append(f"_trial,degenerate_users,{record.degenerate_users},{record.index}")
        rows.append(f"_trial,n_groups,{record.n_groups},{record.index}")
    _write_lines(path, RUN_HEADER, rows)
