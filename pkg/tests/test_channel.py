import numpy as np
import pytest
from dataclasses import replace
from hypothesis import given, settings
from hypothesis import strategies as st

from xlzf.channel import (
    exact_channel,
    mean_elevation,
    mean_horizontal_channel,
    planewave_factors,
    read_channel_dump,
    steering_vertical,
    subarray_channel,
    write_channel_dump,
)
from xlzf.config import ScenarioParams, desk_params
from xlzf.geometry import (
    PropagationAngles,
    build_array,
    placement_from_cartesian,
    sample_placement,
)
from xlzf.numerics import kron

LAM = ScenarioParams().wavelength


def desk_channels(seed=0, d=1e4, **overrides):
    params = replace(desk_params(ScenarioParams()), d=d, **overrides)
    placement = sample_placement(params, np.random.default_rng(seed))
    geom = build_array(params.m_h, params.m_v, params.wavelength)
    return exact_channel(placement, geom)


def aligned_error(h_exact, h_kron):
    """Norm error after the optimal global phase alignment, both sides unit-scaled."""
    z = np.vdot(h_kron, h_exact)
    psi = z / abs(z)
    m = h_exact.size
    return np.linalg.norm(h_exact / np.sqrt(m) - psi * h_kron / np.sqrt(m))


def test_single_element_phase():
    geom = build_array(1, 1, LAM)
    r = 123.456
    placement = placement_from_cartesian([[r, 0, 0]])
    chans = exact_channel(placement, geom)
    assert chans.exact.shape == (1, 1)
    assert chans.exact[0, 0] == pytest.approx(np.exp(2j * np.pi * r / LAM), abs=1e-12)


def test_integer_wavelength_distance_gives_unit_phase():
    geom = build_array(1, 1, LAM)
    placement = placement_from_cartesian([[7 * LAM, 0, 0]])
    chans = exact_channel(placement, geom)
    assert chans.exact[0, 0] == pytest.approx(1.0 + 0j, abs=1e-9)


def test_boresight_user_sees_symmetric_elements():
    geom = build_array(2, 1, LAM)
    placement = placement_from_cartesian([[5.0, 0, 0]])
    chans = exact_channel(placement, geom)
    assert chans.exact[0, 0] == pytest.approx(chans.exact[1, 0], abs=1e-12)


def test_exact_entries_unit_modulus_under_unit_gain():
    chans = desk_channels(seed=3)
    np.testing.assert_allclose(np.abs(chans.exact), 1.0, atol=1e-12)
    np.testing.assert_array_equal(chans.gains, np.ones_like(chans.gains))


def test_planewave_broadside_is_all_ones():
    geom = build_array(4, 3, LAM)
    placement = placement_from_cartesian([[10.0, 0, 0]])
    h_h, h_v, gain = planewave_factors(placement, geom)
    np.testing.assert_allclose(h_h, 1.0, atol=1e-15)
    np.testing.assert_allclose(h_v, 1.0, atol=1e-15)
    np.testing.assert_array_equal(gain, [1.0])


def test_planewave_zenith_vertical_phases():
    geom = build_array(2, 4, LAM)
    placement = placement_from_cartesian([[0, 0, 10.0]])  # theta = pi/2
    _, h_v, _ = planewave_factors(placement, geom)
    nn = np.arange(4) - 1.5
    np.testing.assert_allclose(h_v[0], np.exp(-1j * np.pi * nn), atol=1e-12)


def test_planewave_factors_unit_modulus_and_kron_norm():
    chans = desk_channels(seed=5)
    np.testing.assert_allclose(np.abs(chans.planewave_h), 1.0, atol=1e-12)
    np.testing.assert_allclose(np.abs(chans.planewave_v), 1.0, atol=1e-12)
    m = chans.geometry.m
    for u in range(chans.exact.shape[1]):
        hk = kron(chans.planewave_v[u], chans.planewave_h[u])
        assert np.linalg.norm(hk) ** 2 == pytest.approx(m, rel=1e-12)


def test_far_field_kron_matches_exact():
    chans = desk_channels(seed=9, d=1e6, u=4, n_c=1)
    for u in range(4):
        hk = kron(chans.planewave_v[u], chans.planewave_h[u])
        assert aligned_error(chans.exact[:, u], hk) <= 1e-3


def test_far_field_per_entry_phase_consistency():
    # 50 random directions at d >= 1e5 half-wavelengths, desk-size array
    worst = 0.0
    rng = np.random.default_rng(7)
    geom = build_array(16, 12, LAM)
    for _ in range(50):
        params = replace(
            desk_params(ScenarioParams()), u=1, n_c=1, d=1e5,
            s_az=np.radians(80), s_el=np.radians(80),
        )
        placement = sample_placement(params, rng)
        chans = exact_channel(placement, geom)
        hk = kron(chans.planewave_v[0], chans.planewave_h[0])
        z = np.vdot(hk, chans.exact[:, 0])
        psi = z / abs(z)
        phase = np.abs(np.angle(chans.exact[:, 0] * np.conj(psi * hk)))
        worst = max(worst, phase.max())
    assert worst <= 1e-2


def test_subarray_examples():
    h = np.array([1 + 1j, 2.0, 3.0, 4 - 2j])
    np.testing.assert_array_equal(subarray_channel(h, "horizontal", 0, m_h=2), h[:2])
    np.testing.assert_array_equal(subarray_channel(h, "horizontal", 1, m_h=2), h[2:])
    np.testing.assert_array_equal(subarray_channel(h, "vertical", 0, m_h=2), h[[0, 2]])
    np.testing.assert_array_equal(subarray_channel(h, "vertical", 1, m_h=2), h[[1, 3]])


def test_subarray_bad_arguments():
    h = np.arange(4.0)
    with pytest.raises(ValueError):
        subarray_channel(h, "horizontal", 2, m_h=2)
    with pytest.raises(ValueError):
        subarray_channel(h, "vertical", -1, m_h=2)
    with pytest.raises(ValueError):
        subarray_channel(h, "diagonal", 0, m_h=2)


@given(m_h=st.integers(1, 8), m_v=st.integers(1, 8), seed=st.integers(0, 2**31))
@settings(max_examples=60)
def test_subarray_index_sets_partition_channel(m_h, m_v, seed):
    rng = np.random.default_rng(seed)
    h = rng.standard_normal(m_h * m_v) + 1j * rng.standard_normal(m_h * m_v)
    horizontal = np.concatenate(
        [subarray_channel(h, "horizontal", p, m_h) for p in range(m_v)]
    )
    np.testing.assert_array_equal(horizontal, h)
    vertical = np.concatenate([subarray_channel(h, "vertical", q, m_h) for q in range(m_h)])
    assert sorted(vertical.tolist(), key=lambda z: (z.real, z.imag)) == sorted(
        h.tolist(), key=lambda z: (z.real, z.imag)
    )


def test_mean_horizontal_channel_cases():
    h = np.array([1.0, 1.0, -1.0, -1.0, 5.0, 7.0])
    np.testing.assert_allclose(mean_horizontal_channel(h, [0, 1], m_h=2), [0.0, 0.0])
    np.testing.assert_array_equal(
        mean_horizontal_channel(h, [2], m_h=2), subarray_channel(h, "horizontal", 2, 2)
    )
    same = np.tile([2.0, 3.0], 3)
    np.testing.assert_allclose(mean_horizontal_channel(same, [0, 1, 2], m_h=2), [2.0, 3.0])
    with pytest.raises(ValueError):
        mean_horizontal_channel(h, [], m_h=2)


def test_mean_elevation_arithmetic():
    elev = np.array([[[0.1], [0.3]]])  # one user, two rows, one column
    angles = PropagationAngles(
        distance=np.ones_like(elev), azimuth=np.zeros_like(elev), elevation=elev
    )
    assert mean_elevation(angles, 0, [0, 1]) == pytest.approx(0.2)
    assert mean_elevation(angles, 0, [1]) == pytest.approx(0.3)
    with pytest.raises(ValueError):
        mean_elevation(angles, 0, [])


def test_mean_elevation_constant_field():
    elev = np.full((2, 3, 4), 0.7)
    angles = PropagationAngles(
        distance=np.ones_like(elev), azimuth=np.zeros_like(elev), elevation=elev
    )
    assert mean_elevation(angles, 1, [0, 1, 2]) == pytest.approx(0.7)


def test_mean_elevation_far_field_approaches_centroid_angle():
    params = replace(desk_params(ScenarioParams()), d=1e4, u=3, n_c=1)
    placement = sample_placement(params, np.random.default_rng(21))
    geom = build_array(params.m_h, params.m_v, params.wavelength)
    chans = exact_channel(placement, geom)
    all_rows = np.arange(geom.m_v)
    for u in range(3):
        assert abs(mean_elevation(chans.angles, u, all_rows) - placement.theta[u]) <= 1e-3


def test_steering_vertical_cases():
    np.testing.assert_allclose(steering_vertical(0.0, 5), np.ones(5), atol=1e-15)
    np.testing.assert_allclose(steering_vertical(0.9, 1), [1.0], atol=1e-15)
    np.testing.assert_allclose(steering_vertical(np.pi / 2, 2), [1j, -1j], atol=1e-12)
    with pytest.raises(ValueError):
        steering_vertical(0.0, 0)


def test_channel_dump_round_trip(tmp_path):
    chans = desk_channels(seed=2, u=3)
    path = tmp_path / "dump.txt"
    write_channel_dump(chans, path)
    m_h, m_v, wavelength, exact = read_channel_dump(path)
    assert (m_h, m_v) == (chans.geometry.m_h, chans.geometry.m_v)
    assert wavelength == chans.geometry.wavelength
    np.testing.assert_array_equal(exact, chans.exact)
