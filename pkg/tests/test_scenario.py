import dataclasses

import pytest

from loramab.scenario import (
    DEFAULT_CHANNELS,
    Scenario,
    ScenarioError,
    arm_costs,
    build_arms,
    bundled_scenario_path,
    load_scenario,
    save_scenario,
)


def test_defaults_match_reference_experiment():
    sc = Scenario()
    assert sc.num_devices == 30
    assert sc.transmission_interval == 15.0
    assert sc.horizon == 1000
    assert sc.tx_powers == (-3, 1, 5, 9, 13)
    assert sc.spreading_factor == 7
    assert sc.preamble_symbols == 8
    assert sc.payload_bytes == 50
    assert sc.window_length == 10
    assert sc.shift_step == 5
    assert sc.theta == 20.0
    assert sc.replications == 10
    assert sc.arm_mode == "channel_bound_bw"
    assert not sc.variance_padding
    assert [c.bandwidth for c in sc.channels] == [250e3, 250e3, 125e3, 125e3, 125e3]
    assert [c.center_frequency for c in sc.channels] == [
        920.7e6, 921.1e6, 921.4e6, 921.6e6, 921.8e6,
    ]
    disabled = [p.disabled for p in sc.phases]
    assert disabled == [
        frozenset(), frozenset({0, 1}), frozenset(), frozenset({2, 3}), frozenset(),
    ]
    assert [(p.start, p.end) for p in sc.phases] == [
        (1, 200), (201, 400), (401, 600), (601, 800), (801, 1000),
    ]
    sc.validate()


def test_build_arms_channel_bound_order():
    arms = build_arms(Scenario())
    assert len(arms) == 25
    # channel-major, power-minor
    assert [a.channel_id for a in arms[:6]] == [0, 0, 0, 0, 0, 1]
    assert [a.tx_power for a in arms[:5]] == [-3, 1, 5, 9, 13]
    assert arms[0].bandwidth == 250e3
    assert arms[10].bandwidth == 125e3
    assert arms[0].label == "920.7MHz/250kHz/-3dBm"
    assert arms[24].label == "921.8MHz/125kHz/+13dBm"


def test_build_arms_cross_product():
    sc = dataclasses.replace(Scenario(), arm_mode="cross_product")
    arms = build_arms(sc)
    assert len(arms) == 50
    assert {a.bandwidth for a in arms} == {125e3, 250e3}
    assert len({(a.channel_id, a.tx_power, a.bandwidth) for a in arms}) == 50


def test_arm_costs_follow_channel_bandwidth():
    sc = Scenario()
    costs = arm_costs(sc)
    assert len(costs) == 25
    # the 250 kHz channels transmit twice as fast
    assert costs[0].t_toa == pytest.approx(costs[10].t_toa / 2, rel=1e-12)
    # same channel: airtime identical across powers, energy grows
    assert costs[0].t_toa == costs[4].t_toa
    assert costs[4].e_toa > costs[0].e_toa


def test_bundled_scenario_is_the_default():
    path = bundled_scenario_path()
    assert path.is_file()
    assert load_scenario(path) == Scenario()


def test_empty_file_yields_defaults(tmp_path):
    path = tmp_path / "empty.scenario"
    path.write_text("")
    assert load_scenario(path) == Scenario()


def test_round_trip(tmp_path):
    sc = dataclasses.replace(
        Scenario(),
        num_devices=7,
        theta=12.5,
        tx_powers=(1, 5),
        variance_padding=True,
        horizon=500,
        phases=(
            type(Scenario().phases[0])(1, 250, frozenset()),
            type(Scenario().phases[0])(251, 500, frozenset({4})),
        ),
    ).validate()
    path = tmp_path / "custom.scenario"
    save_scenario(sc, path)
    assert load_scenario(path) == sc


def test_overrides_parse(tmp_path):
    path = tmp_path / "o.scenario"
    path.write_text(
        "[network]\nnum_devices = 5\nhorizon = 100\n"
        "[arms]\ntx_powers_dbm = -3, 13\n"
        "[phases]\n1-100 = none\n"
        "[detector]\ntheta = 30\n"
    )
    sc = load_scenario(path)
    assert sc.num_devices == 5
    assert sc.horizon == 100
    assert sc.tx_powers == (-3, 13)
    assert sc.theta == 30.0
    assert len(sc.phases) == 1


def test_unknown_section_rejected(tmp_path):
    path = tmp_path / "bad.scenario"
    path.write_text("[jammer]\nx = 1\n")
    with pytest.raises(ScenarioError, match="unknown sections"):
        load_scenario(path)


def test_unknown_key_rejected(tmp_path):
    path = tmp_path / "bad.scenario"
    path.write_text("[network]\nnum_device = 5\n")
    with pytest.raises(ScenarioError, match="unknown keys"):
        load_scenario(path)


def test_bad_value_types_name_the_key(tmp_path):
    path = tmp_path / "bad.scenario"
    path.write_text("[network]\nnum_devices = lots\n")
    with pytest.raises(ScenarioError, match="num_devices"):
        load_scenario(path)
    path.write_text("[bandit]\nvariance_padding = maybe\n")
    with pytest.raises(ScenarioError, match="variance_padding"):
        load_scenario(path)


def test_missing_file_raises(tmp_path):
    with pytest.raises(ScenarioError, match="cannot read"):
        load_scenario(tmp_path / "nope.scenario")


def test_validate_horizon_must_fit_sweep():
    sc = dataclasses.replace(
        Scenario(),
        horizon=20,
        phases=(type(Scenario().phases[0])(1, 20, frozenset()),),
    )
    with pytest.raises(ScenarioError, match="initial sweep"):
        sc.validate()


def test_validate_duplicate_powers():
    sc = dataclasses.replace(Scenario(), tx_powers=(1, 1, 5))
    with pytest.raises(ScenarioError, match="duplicates"):
        sc.validate()


def test_validate_power_draw_coverage():
    sc = dataclasses.replace(Scenario(), tx_powers=(-3, 14))
    with pytest.raises(ScenarioError, match="14"):
        sc.validate()


def test_validate_phase_mismatch():
    sc = dataclasses.replace(Scenario(), horizon=900)
    with pytest.raises(ScenarioError, match="horizon"):
        sc.validate()


def test_validate_phase_gap():
    phase = type(Scenario().phases[0])
    sc = dataclasses.replace(
        Scenario(), phases=(phase(1, 500, frozenset()), phase(502, 1000, frozenset()))
    )
    with pytest.raises(ScenarioError, match="contiguous"):
        sc.validate()


def test_validate_stray_disabled_channel():
    phase = type(Scenario().phases[0])
    sc = dataclasses.replace(Scenario(), phases=(phase(1, 1000, frozenset({9})),))
    with pytest.raises(ScenarioError, match="unknown channels"):
        sc.validate()


def test_validate_window_parameters():
    sc = dataclasses.replace(Scenario(), shift_step=11)
    with pytest.raises(ScenarioError, match="shift_step"):
        sc.validate()
    sc = dataclasses.replace(Scenario(), theta=0.0)
    with pytest.raises(ScenarioError, match="theta"):
        sc.validate()


def test_validate_interval_exceeds_airtime():
    sc = dataclasses.replace(Scenario(), transmission_interval=0.05)
    with pytest.raises(ScenarioError, match="airtime"):
        sc.validate()


def test_validate_channel_ids_sequential():
    sc = dataclasses.replace(Scenario(), channels=DEFAULT_CHANNELS[1:])
    with pytest.raises(ScenarioError, match="channel ids"):
        sc.validate()


def test_accessors_build_consistent_objects():
    sc = Scenario()
    params = sc.radio_params(250_000.0)
    assert params.bandwidth == 250_000.0
    assert params.spreading_factor == 7
    profile = sc.energy_profile()
    assert profile.e_wakeup == pytest.approx(0.0561 * 0.010)
    schedule = sc.phase_schedule()
    assert schedule.horizon == 1000
    assert sc.payload_bits == 400
