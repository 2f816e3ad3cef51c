"""LoRa airtime and energy accounting.

Implements the standard LoRa modem airtime chain (symbol duration,
preamble, payload symbol count) and the per-transmission energy model
used for both the reported energy efficiency and the bandit reward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = [
    "RadioParams",
    "EnergyProfile",
    "TransmissionCost",
    "symbol_duration",
    "preamble_duration",
    "payload_symbol_count",
    "transmission_cost",
    "energy_efficiency",
    "reward",
]

# Radio power draw per transmit-power setting, in watts. The simulator
# needs a monotone dBm -> watts table; these defaults follow typical
# sub-GHz transceiver datasheet supply currents at 3.3 V and can be
# overridden in the scenario file.
DEFAULT_TX_POWER_DRAW_W = {
    -3: 0.0528,
    1: 0.0561,
    5: 0.0611,
    9: 0.0726,
    13: 0.0957,
}


@dataclass(frozen=True)
class RadioParams:
    """Modem settings that determine airtime."""

    spreading_factor: int = 7
    bandwidth: float = 125_000.0
    preamble_symbols: int = 8
    payload_bytes: int = 50
    coding_rate_index: int = 1  # CR in {1..4}, rate 4/(4+CR)
    crc_enabled: bool = True
    explicit_header: bool = True
    low_data_rate_optimize: bool = False

    def __post_init__(self) -> None:
        if not 6 <= self.spreading_factor <= 12:
            raise ValueError(f"spreading_factor must be in [6, 12], got {self.spreading_factor}")
        if self.bandwidth <= 0:
            raise ValueError(f"bandwidth must be positive, got {self.bandwidth}")
        if self.payload_bytes < 1:
            raise ValueError(f"payload_bytes must be >= 1, got {self.payload_bytes}")
        if self.preamble_symbols < 1:
            raise ValueError(f"preamble_symbols must be >= 1, got {self.preamble_symbols}")
        if not 1 <= self.coding_rate_index <= 4:
            raise ValueError(f"coding_rate_index must be in [1, 4], got {self.coding_rate_index}")

    @property
    def payload_bits(self) -> int:
        return 8 * self.payload_bytes


@dataclass(frozen=True)
class EnergyProfile:
    """Device energy constants, all in SI units (joules, watts, seconds)."""

    e_wakeup: float = 0.0561 * 0.010  # startup power * startup duration
    e_processing: float = 0.0858 * 0.010
    e_receive: float = 0.066 * 0.100
    p_mcu: float = 0.0297
    tx_power_draw: dict[int, float] = field(
        default_factory=lambda: dict(DEFAULT_TX_POWER_DRAW_W)
    )

    def __post_init__(self) -> None:
        for name in ("e_wakeup", "e_processing", "e_receive", "p_mcu"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        for dbm, watts in self.tx_power_draw.items():
            if watts < 0:
                raise ValueError(f"tx_power_draw[{dbm}] must be >= 0, got {watts}")

    @property
    def e_overhead(self) -> float:
        """Non-radio energy of one transmission cycle."""
        return self.e_wakeup + self.e_processing + self.e_receive

    def radio_power(self, tx_dbm: int) -> float:
        try:
            return self.tx_power_draw[tx_dbm]
        except KeyError:
            known = sorted(self.tx_power_draw)
            raise KeyError(
                f"no radio power draw configured for {tx_dbm} dBm (known: {known})"
            ) from None


@dataclass(frozen=True)
class TransmissionCost:
    """Timing and energy of one transmission at fixed radio settings."""

    t_symbol: float
    t_preamble: float
    t_payload: float
    t_toa: float
    e_toa: float
    e_active: float


def symbol_duration(sf: int, bw: float) -> float:
    """Duration of one chirp symbol, 2^SF / BW, in seconds."""
    if not 6 <= sf <= 12:
        raise ValueError(f"sf must be in [6, 12], got {sf}")
    if bw <= 0:
        raise ValueError(f"bw must be positive, got {bw}")
    return float(2**sf) / bw


def preamble_duration(n_p: int, t_symbol: float) -> float:
    """Preamble airtime: (4.25 + N_P) symbols."""
    if n_p < 1:
        raise ValueError(f"n_p must be >= 1, got {n_p}")
    if t_symbol <= 0:
        raise ValueError(f"t_symbol must be positive, got {t_symbol}")
    return (4.25 + n_p) * t_symbol


def payload_symbol_count(params: RadioParams) -> int:
    """Number of payload symbols per the standard LoRa modem formula."""
    crc = 1 if params.crc_enabled else 0
    ih = 0 if params.explicit_header else 1
    de = 1 if params.low_data_rate_optimize else 0
    denom = 4 * (params.spreading_factor - 2 * de)
    if denom <= 0:
        raise ValueError(
            "spreading_factor too small for low_data_rate_optimize "
            f"(SF={params.spreading_factor}, DE={de})"
        )
    numer = 8 * params.payload_bytes - 4 * params.spreading_factor + 28 + 16 * crc - 20 * ih
    return 8 + max(math.ceil(numer / denom) * (params.coding_rate_index + 4), 0)


def transmission_cost(
    params: RadioParams, profile: EnergyProfile, tx_dbm: int
) -> TransmissionCost:
    """Full airtime/energy chain for one transmission."""
    t_sym = symbol_duration(params.spreading_factor, params.bandwidth)
    t_pre = preamble_duration(params.preamble_symbols, t_sym)
    t_pay = payload_symbol_count(params) * t_sym
    t_toa = t_pre + t_pay
    e_toa = (profile.p_mcu + profile.radio_power(tx_dbm)) * t_toa
    return TransmissionCost(
        t_symbol=t_sym,
        t_preamble=t_pre,
        t_payload=t_pay,
        t_toa=t_toa,
        e_toa=e_toa,
        e_active=profile.e_overhead + e_toa,
    )


def energy_efficiency(payload_bits: float, success_rate: float, e_active: float) -> float:
    """Successfully delivered bits per joule of active energy."""
    if e_active <= 0:
        raise ValueError(f"e_active must be positive, got {e_active}")
    if not 0.0 <= success_rate <= 1.0:
        raise ValueError(f"success_rate must be in [0, 1], got {success_rate}")
    return payload_bits * success_rate / e_active


def reward(success: bool, payload_bits: float, e_toa: float) -> float:
    """Raw learning reward: bits per joule of radio energy on success, 0 on
    failure. Callers normalize by the best achievable raw reward across the
    arm set before feeding the bandit."""
    if e_toa <= 0:
        raise ValueError(f"e_toa must be positive, got {e_toa}")
    return payload_bits / e_toa if success else 0.0
