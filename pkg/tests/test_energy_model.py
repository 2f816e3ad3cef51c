import math

import pytest

from loramab.energy_model import (
    DEFAULT_TX_POWER_DRAW_W,
    EnergyProfile,
    RadioParams,
    energy_efficiency,
    payload_symbol_count,
    preamble_duration,
    reward,
    symbol_duration,
    transmission_cost,
)

# Frozen reference values, computed with an independent script from the
# standard LoRa airtime formulas before the implementation was written.
T_SYM_SF7_125K = 0.001024
T_SYM_SF7_250K = 0.000512
T_SYM_SF12_125K = 0.032768
T_PRE_8_125K = 0.012544
T_TOA_DEFAULT = 0.097536
E_TOA_50MW = 0.0077736192  # (0.0297 + 0.05) W * 0.097536 s


def test_symbol_duration_frozen_values():
    assert symbol_duration(7, 125_000.0) == pytest.approx(T_SYM_SF7_125K, rel=1e-12)
    assert symbol_duration(7, 250_000.0) == pytest.approx(T_SYM_SF7_250K, rel=1e-12)
    assert symbol_duration(12, 125_000.0) == pytest.approx(T_SYM_SF12_125K, rel=1e-12)


def test_symbol_duration_validation():
    with pytest.raises(ValueError):
        symbol_duration(5, 125_000.0)
    with pytest.raises(ValueError):
        symbol_duration(13, 125_000.0)
    with pytest.raises(ValueError):
        symbol_duration(7, 0.0)


def test_preamble_duration_frozen_values():
    assert preamble_duration(8, T_SYM_SF7_125K) == pytest.approx(T_PRE_8_125K, rel=1e-12)
    assert preamble_duration(8, T_SYM_SF7_250K) == pytest.approx(0.006272, rel=1e-12)
    assert preamble_duration(12, T_SYM_SF7_125K) == pytest.approx(0.016640, rel=1e-12)


def test_preamble_duration_validation():
    with pytest.raises(ValueError):
        preamble_duration(0, 0.001)
    with pytest.raises(ValueError):
        preamble_duration(8, 0.0)


def test_payload_symbol_count_default_params():
    # 50-byte payload, SF7, CR index 1, CRC on, explicit header:
    # ceil(416 / 28) * 5 + 8 = 83
    assert payload_symbol_count(RadioParams()) == 83


def test_payload_symbol_count_crc_off_same_ceiling():
    # without the CRC the numerator drops to 400 but the ceiling holds
    assert payload_symbol_count(RadioParams(crc_enabled=False)) == 83


def test_payload_symbol_count_bandwidth_free():
    assert payload_symbol_count(RadioParams(bandwidth=250_000.0)) == 83


def test_payload_symbol_count_negative_numerator_clamps():
    # tiny payload at high SF: the ceil term goes negative and clamps to 0
    params = RadioParams(
        spreading_factor=12,
        payload_bytes=1,
        crc_enabled=False,
        explicit_header=False,
    )
    assert payload_symbol_count(params) == 8


def test_payload_symbol_count_grows_with_payload():
    counts = [
        payload_symbol_count(RadioParams(payload_bytes=pl)) for pl in range(1, 256)
    ]
    assert all(b >= a for a, b in zip(counts, counts[1:]))


def test_radio_params_validation():
    with pytest.raises(ValueError):
        RadioParams(spreading_factor=5)
    with pytest.raises(ValueError):
        RadioParams(bandwidth=-1.0)
    with pytest.raises(ValueError):
        RadioParams(payload_bytes=0)
    with pytest.raises(ValueError):
        RadioParams(preamble_symbols=0)
    with pytest.raises(ValueError):
        RadioParams(coding_rate_index=5)


def test_transmission_cost_airtime_chain():
    cost = transmission_cost(RadioParams(), EnergyProfile(), -3)
    assert cost.t_symbol == pytest.approx(T_SYM_SF7_125K, rel=1e-12)
    assert cost.t_preamble == pytest.approx(T_PRE_8_125K, rel=1e-12)
    assert cost.t_payload == pytest.approx(83 * T_SYM_SF7_125K, rel=1e-12)
    assert cost.t_toa == pytest.approx(T_TOA_DEFAULT, rel=1e-12)


def test_transmission_cost_doubling_bandwidth_halves_airtime():
    narrow = transmission_cost(RadioParams(), EnergyProfile(), -3)
    wide = transmission_cost(RadioParams(bandwidth=250_000.0), EnergyProfile(), -3)
    assert wide.t_toa == pytest.approx(narrow.t_toa / 2, rel=1e-12)
    assert wide.t_toa == pytest.approx(0.048768, rel=1e-12)


def test_transmission_cost_energy_frozen_value():
    # MCU draw plus an explicit 50 mW radio draw over the default airtime
    profile = EnergyProfile(p_mcu=0.0297, tx_power_draw={-3: 0.05})
    cost = transmission_cost(RadioParams(), profile, -3)
    assert cost.e_toa == pytest.approx(E_TOA_50MW, rel=1e-12)
    assert cost.e_active == pytest.approx(profile.e_overhead + E_TOA_50MW, rel=1e-12)


def test_transmission_cost_default_profile():
    profile = EnergyProfile()
    cost = transmission_cost(RadioParams(), profile, -3)
    assert cost.e_toa == pytest.approx((0.0297 + 0.0528) * T_TOA_DEFAULT, rel=1e-12)
    assert cost.e_toa == pytest.approx(0.00804672, rel=1e-12)


def test_transmission_energy_monotone_in_tx_power():
    profile = EnergyProfile()
    costs = [
        transmission_cost(RadioParams(), profile, dbm)
        for dbm in sorted(DEFAULT_TX_POWER_DRAW_W)
    ]
    energies = [c.e_toa for c in costs]
    assert all(b > a for a, b in zip(energies, energies[1:]))
    # airtime does not depend on power
    assert len({c.t_toa for c in costs}) == 1


def test_energy_profile_overhead_sum():
    profile = EnergyProfile()
    expected = profile.e_wakeup + profile.e_processing + profile.e_receive
    assert profile.e_overhead == pytest.approx(expected, rel=1e-12)
    assert profile.e_overhead == pytest.approx(0.008019, rel=1e-9)


def test_energy_profile_validation():
    with pytest.raises(ValueError):
        EnergyProfile(e_wakeup=-1.0)
    with pytest.raises(ValueError):
        EnergyProfile(tx_power_draw={-3: -0.1})


def test_radio_power_unknown_level():
    profile = EnergyProfile()
    with pytest.raises(KeyError) as exc:
        profile.radio_power(14)
    assert "14" in str(exc.value)


def test_transmission_cost_unknown_power_raises():
    with pytest.raises(KeyError):
        transmission_cost(RadioParams(), EnergyProfile(), 14)


def test_energy_efficiency_examples():
    assert energy_efficiency(400.0, 1.0, 2.0) == pytest.approx(200.0)
    assert energy_efficiency(400.0, 0.5, 2.0) == pytest.approx(100.0)
    assert energy_efficiency(400.0, 0.0, 2.0) == 0.0


def test_energy_efficiency_validation():
    with pytest.raises(ValueError):
        energy_efficiency(400.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        energy_efficiency(400.0, 1.5, 2.0)


def test_reward_success_is_bits_per_joule():
    assert reward(True, 400.0, E_TOA_50MW) == pytest.approx(400.0 / E_TOA_50MW, rel=1e-12)
    assert reward(True, 400.0, E_TOA_50MW) == pytest.approx(51456.083673355126, rel=1e-12)


def test_reward_failure_is_zero():
    assert reward(False, 400.0, E_TOA_50MW) == 0.0


def test_reward_validation():
    with pytest.raises(ValueError):
        reward(True, 400.0, 0.0)


def test_wider_bandwidth_improves_reward():
    profile = EnergyProfile()
    narrow = transmission_cost(RadioParams(), profile, -3)
    wide = transmission_cost(RadioParams(bandwidth=250_000.0), profile, -3)
    assert reward(True, 400.0, wide.e_toa) > reward(True, 400.0, narrow.e_toa)
