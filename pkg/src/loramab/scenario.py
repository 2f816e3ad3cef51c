"""Scenario files: experiment description, defaults, validation, arm building.

The format is INI (configparser). Every key is optional; an empty file
yields the default experiment — a 30-device network over five channels
with a five-phase availability schedule. See the bundled
``data/paper.scenario`` for the fully spelled-out default file and the
README for the schema.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from .bandit import ParameterSet
from .energy_model import (
    DEFAULT_TX_POWER_DRAW_W,
    EnergyProfile,
    RadioParams,
    TransmissionCost,
    transmission_cost,
)
from .environment import Channel, Phase, PhaseSchedule

__all__ = ["ScenarioError", "Scenario", "load_scenario", "save_scenario", "bundled_scenario_path", "build_arms", "arm_costs"]

ARM_MODES = ("channel_bound_bw", "cross_product")
METHODS = ("proposed", "baseline")

DEFAULT_CHANNELS = (
    Channel(0, 920_700_000.0, 250_000.0),
    Channel(1, 921_100_000.0, 250_000.0),
    Channel(2, 921_400_000.0, 125_000.0),
    Channel(3, 921_600_000.0, 125_000.0),
    Channel(4, 921_800_000.0, 125_000.0),
)

DEFAULT_PHASES = (
    Phase(1, 200, frozenset()),
    Phase(201, 400, frozenset({0, 1})),
    Phase(401, 600, frozenset()),
    Phase(601, 800, frozenset({2, 3})),
    Phase(801, 1000, frozenset()),
)


class ScenarioError(ValueError):
    """Scenario file failed to parse or validate."""


@dataclass
class Scenario:
    # network
    num_devices: int = 30
    transmission_interval: float = 15.0
    horizon: int = 1000
    # channels and arms
    channels: tuple[Channel, ...] = DEFAULT_CHANNELS
    tx_powers: tuple[int, ...] = (-3, 1, 5, 9, 13)
    arm_mode: str = "channel_bound_bw"
    bandwidths: tuple[float, ...] = (125_000.0, 250_000.0)  # cross_product mode only
    # radio
    spreading_factor: int = 7
    preamble_symbols: int = 8
    payload_bytes: int = 50
    coding_rate_index: int = 1
    crc_enabled: bool = True
    explicit_header: bool = True
    low_data_rate_optimize: bool = False
    # energy (powers in watts, durations in seconds)
    p_mcu: float = 0.0297
    p_wakeup: float = 0.0561
    p_processing: float = 0.0858
    p_receive: float = 0.066
    t_wakeup: float = 0.010
    t_processing: float = 0.010
    t_receive: float = 0.100
    tx_power_draw: dict[int, float] = field(
        default_factory=lambda: dict(DEFAULT_TX_POWER_DRAW_W)
    )
    # detector
    window_length: int = 10
    shift_step: int = 5
    theta: float = 20.0
    # bandit
    variance_padding: bool = False
    # phases
    phases: tuple[Phase, ...] = DEFAULT_PHASES
    # run
    replications: int = 10
    base_seed: int = 12345
    jam_rate: float = 1.0

    def radio_params(self, bandwidth: float) -> RadioParams:
        return RadioParams(
            spreading_factor=self.spreading_factor,
            bandwidth=bandwidth,
            preamble_symbols=self.preamble_symbols,
            payload_bytes=self.payload_bytes,
            coding_rate_index=self.coding_rate_index,
            crc_enabled=self.crc_enabled,
            explicit_header=self.explicit_header,
            low_data_rate_optimize=self.low_data_rate_optimize,
        )

    def energy_profile(self) -> EnergyProfile:
        return EnergyProfile(
            e_wakeup=self.p_wakeup * self.t_wakeup,
            e_processing=self.p_processing * self.t_processing,
            e_receive=self.p_receive * self.t_receive,
            p_mcu=self.p_mcu,
            tx_power_draw=dict(self.tx_power_draw),
        )

    def phase_schedule(self) -> PhaseSchedule:
        return PhaseSchedule(self.phases)

    @property
    def payload_bits(self) -> int:
        return 8 * self.payload_bytes

    def validate(self) -> "Scenario":
        if self.num_devices < 1:
            raise ScenarioError(f"num_devices must be >= 1, got {self.num_devices}")
        if self.transmission_interval <= 0:
            raise ScenarioError(
                f"transmission_interval must be positive, got {self.transmission_interval}"
            )
        if self.replications < 1:
            raise ScenarioError(f"replications must be >= 1, got {self.replications}")
        if self.base_seed < 0:
            raise ScenarioError(f"base_seed must be >= 0, got {self.base_seed}")
        if not 0.0 <= self.jam_rate <= 1.0:
            raise ScenarioError(f"jam_rate must be in [0, 1], got {self.jam_rate}")
        if self.arm_mode not in ARM_MODES:
            raise ScenarioError(
                f"arm_mode must be one of {ARM_MODES}, got {self.arm_mode!r}"
            )
        if len(self.tx_powers) != len(set(self.tx_powers)):
            raise ScenarioError(f"tx_powers contains duplicates: {self.tx_powers}")
        missing = [p for p in self.tx_powers if p not in self.tx_power_draw]
        if missing:
            raise ScenarioError(f"tx_power_draw lacks entries for {missing} dBm")
        ids = [c.id for c in self.channels]
        if ids != list(range(len(self.channels))):
            raise ScenarioError(f"channel ids must be 0..{len(self.channels) - 1}, got {ids}")
        freqs = [c.center_frequency for c in self.channels]
        if len(set(freqs)) != len(freqs):
            raise ScenarioError("channels: center frequencies must be unique")
        try:
            schedule = self.phase_schedule()
        except ValueError as exc:
            raise ScenarioError(f"phases: {exc}") from exc
        if schedule.horizon != self.horizon:
            raise ScenarioError(
                f"phases cover [1, {schedule.horizon}] but horizon is {self.horizon}"
            )
        known = set(range(len(self.channels)))
        for p in self.phases:
            stray = p.disabled - known
            if stray:
                raise ScenarioError(
                    f"phases: [{p.start},{p.end}] disables unknown channels {sorted(stray)}"
                )
        arms = build_arms(self)
        if self.horizon < len(arms):
            raise ScenarioError(
                f"horizon ({self.horizon}) must be >= number of arms ({len(arms)}) "
                "so the initial sweep fits"
            )
        if self.window_length < 1:
            raise ScenarioError(f"window_length must be >= 1, got {self.window_length}")
        if not 1 <= self.shift_step <= self.window_length:
            raise ScenarioError(
                f"shift_step must be in [1, window_length], got {self.shift_step}"
            )
        if self.theta <= 0:
            raise ScenarioError(f"theta must be positive, got {self.theta}")
        max_toa = max(c.t_toa for c in arm_costs(self, arms))
        if self.transmission_interval <= max_toa:
            raise ScenarioError(
                f"transmission_interval ({self.transmission_interval}s) must exceed "
                f"the longest airtime ({max_toa:.6f}s)"
            )
        return self


def build_arms(scenario: Scenario) -> list[ParameterSet]:
    """Arm list in sweep order (channel-major, then power, then bandwidth).

    channel_bound_bw: each channel carries its own bandwidth, giving
    |channels| * |tx_powers| arms. cross_product: every (channel, power,
    bandwidth) triple is its own arm.
    """
    arms: list[ParameterSet] = []
    if scenario.arm_mode == "channel_bound_bw":
        for ch in scenario.channels:
            for p in scenario.tx_powers:
                arms.append(ParameterSet(ch.id, ch.center_frequency, ch.bandwidth, p))
    else:
        for ch in scenario.channels:
            for p in scenario.tx_powers:
                for bw in scenario.bandwidths:
                    arms.append(ParameterSet(ch.id, ch.center_frequency, bw, p))
    return arms


def arm_costs(scenario: Scenario, arms: list[ParameterSet] | None = None) -> list[TransmissionCost]:
    """Per-arm airtime/energy, fixed for the whole scenario."""
    if arms is None:
        arms = build_arms(scenario)
    profile = scenario.energy_profile()
    return [
        transmission_cost(scenario.radio_params(arm.bandwidth), profile, arm.tx_power)
        for arm in arms
    ]


# --- file format ---------------------------------------------------------

_BOOL_KEYS = {
    "crc_enabled",
    "explicit_header",
    "low_data_rate_optimize",
    "variance_padding",
}


def _parse_bool(section: str, key: str, raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ScenarioError(f"[{section}] {key}: expected a boolean, got {raw!r}")


def _parse_num(section: str, key: str, raw: str, kind):
    try:
        return kind(raw.strip())
    except ValueError:
        raise ScenarioError(
            f"[{section}] {key}: expected {kind.__name__}, got {raw!r}"
        ) from None


def _parse_channels(cp: configparser.ConfigParser) -> tuple[Channel, ...]:
    rows = []
    for key, raw in cp["channels"].items():
        cid = _parse_num("channels", key, key, int)
        parts = raw.split()
        if len(parts) != 2:
            raise ScenarioError(
                f"[channels] {key}: expected '<center_hz> <bandwidth_hz>', got {raw!r}"
            )
        rows.append(
            Channel(
                cid,
                _parse_num("channels", key, parts[0], float),
                _parse_num("channels", key, parts[1], float),
            )
        )
    rows.sort(key=lambda c: c.id)
    return tuple(rows)


def _parse_phases(cp: configparser.ConfigParser) -> tuple[Phase, ...]:
    rows = []
    for key, raw in cp["phases"].items():
        try:
            start_s, end_s = key.split("-")
            start, end = int(start_s), int(end_s)
        except ValueError:
            raise ScenarioError(
                f"[phases] {key}: key must look like '<start>-<end>'"
            ) from None
        raw = raw.strip()
        if raw.lower() in ("none", ""):
            disabled: frozenset[int] = frozenset()
        else:
            disabled = frozenset(
                _parse_num("phases", key, tok, int) for tok in raw.replace(",", " ").split()
            )
        rows.append(Phase(start, end, disabled))
    rows.sort(key=lambda p: p.start)
    return tuple(rows)


def _parse_power_draw(raw: str) -> dict[int, float]:
    table: dict[int, float] = {}
    for tok in raw.replace(",", " ").split():
        if ":" not in tok:
            raise ScenarioError(
                f"[energy] tx_power_draw_w: expected '<dbm>:<watts>' entries, got {tok!r}"
            )
        dbm_s, watts_s = tok.split(":", 1)
        table[_parse_num("energy", "tx_power_draw_w", dbm_s, int)] = _parse_num(
            "energy", "tx_power_draw_w", watts_s, float
        )
    return table


_SCALAR_FIELDS = {
    # section, key -> (attribute, type)
    ("network", "num_devices"): ("num_devices", int),
    ("network", "transmission_interval_s"): ("transmission_interval", float),
    ("network", "horizon"): ("horizon", int),
    ("arms", "mode"): ("arm_mode", str),
    ("radio", "spreading_factor"): ("spreading_factor", int),
    ("radio", "preamble_symbols"): ("preamble_symbols", int),
    ("radio", "payload_bytes"): ("payload_bytes", int),
    ("radio", "coding_rate_index"): ("coding_rate_index", int),
    ("radio", "crc_enabled"): ("crc_enabled", bool),
    ("radio", "explicit_header"): ("explicit_header", bool),
    ("radio", "low_data_rate_optimize"): ("low_data_rate_optimize", bool),
    ("energy", "p_mcu_w"): ("p_mcu", float),
    ("energy", "p_wakeup_w"): ("p_wakeup", float),
    ("energy", "p_processing_w"): ("p_processing", float),
    ("energy", "p_receive_w"): ("p_receive", float),
    ("energy", "t_wakeup_s"): ("t_wakeup", float),
    ("energy", "t_processing_s"): ("t_processing", float),
    ("energy", "t_receive_s"): ("t_receive", float),
    ("detector", "window_length"): ("window_length", int),
    ("detector", "shift_step"): ("shift_step", int),
    ("detector", "theta"): ("theta", float),
    ("bandit", "variance_padding"): ("variance_padding", bool),
    ("run", "replications"): ("replications", int),
    ("run", "base_seed"): ("base_seed", int),
    ("run", "jam_rate"): ("jam_rate", float),
}

_KNOWN_SECTIONS = {
    "network",
    "channels",
    "arms",
    "radio",
    "energy",
    "detector",
    "bandit",
    "phases",
    "run",
}


def load_scenario(path: str | Path) -> Scenario:
    """Parse and validate a scenario file; omitted keys take defaults."""
    path = Path(path)
    cp = configparser.ConfigParser()
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file {path}: {exc}") from exc
    try:
        cp.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ScenarioError(f"cannot parse scenario file {path}: {exc}") from exc

    unknown = set(cp.sections()) - _KNOWN_SECTIONS
    if unknown:
        raise ScenarioError(f"unknown sections: {sorted(unknown)}")

    scenario = Scenario()
    overrides = {}
    for (section, key), (attr, kind) in _SCALAR_FIELDS.items():
        if cp.has_option(section, key):
            raw = cp.get(section, key)
            if kind is bool:
                overrides[attr] = _parse_bool(section, key, raw)
            elif kind is str:
                overrides[attr] = raw.strip()
            else:
                overrides[attr] = _parse_num(section, key, raw, kind)

    known_keys: dict[str, set[str]] = {}
    for (section, key) in _SCALAR_FIELDS:
        known_keys.setdefault(section, set()).add(key)
    known_keys.setdefault("arms", set()).add("tx_powers_dbm")
    known_keys.setdefault("arms", set()).add("bandwidths_hz")
    known_keys.setdefault("energy", set()).add("tx_power_draw_w")
    for section in cp.sections():
        if section in ("channels", "phases"):
            continue
        stray = set(cp[section]) - known_keys.get(section, set())
        if stray:
            raise ScenarioError(f"[{section}]: unknown keys {sorted(stray)}")

    if cp.has_option("arms", "tx_powers_dbm"):
        raw = cp.get("arms", "tx_powers_dbm")
        overrides["tx_powers"] = tuple(
            _parse_num("arms", "tx_powers_dbm", tok, int)
            for tok in raw.replace(",", " ").split()
        )
    if cp.has_option("arms", "bandwidths_hz"):
        raw = cp.get("arms", "bandwidths_hz")
        overrides["bandwidths"] = tuple(
            _parse_num("arms", "bandwidths_hz", tok, float)
            for tok in raw.replace(",", " ").split()
        )
    if cp.has_option("energy", "tx_power_draw_w"):
        overrides["tx_power_draw"] = _parse_power_draw(cp.get("energy", "tx_power_draw_w"))
    if cp.has_section("channels") and len(cp["channels"]):
        overrides["channels"] = _parse_channels(cp)
    if cp.has_section("phases") and len(cp["phases"]):
        overrides["phases"] = _parse_phases(cp)

    return replace(scenario, **overrides).validate()


def save_scenario(scenario: Scenario, path: str | Path) -> None:
    """Write a scenario as a file that loads back to an equal Scenario."""
    cp = configparser.ConfigParser()
    cp["network"] = {
        "num_devices": str(scenario.num_devices),
        "transmission_interval_s": repr(scenario.transmission_interval),
        "horizon": str(scenario.horizon),
    }
    cp["channels"] = {
        str(c.id): f"{c.center_frequency!r} {c.bandwidth!r}" for c in scenario.channels
    }
    cp["arms"] = {
        "tx_powers_dbm": " ".join(str(p) for p in scenario.tx_powers),
        "mode": scenario.arm_mode,
        "bandwidths_hz": " ".join(repr(b) for b in scenario.bandwidths),
    }
    cp["radio"] = {
        "spreading_factor": str(scenario.spreading_factor),
        "preamble_symbols": str(scenario.preamble_symbols),
        "payload_bytes": str(scenario.payload_bytes),
        "coding_rate_index": str(scenario.coding_rate_index),
        "crc_enabled": str(scenario.crc_enabled).lower(),
        "explicit_header": str(scenario.explicit_header).lower(),
        "low_data_rate_optimize": str(scenario.low_data_rate_optimize).lower(),
    }
    cp["energy"] = {
        "p_mcu_w": repr(scenario.p_mcu),
        "p_wakeup_w": repr(scenario.p_wakeup),
        "p_processing_w": repr(scenario.p_processing),
        "p_receive_w": repr(scenario.p_receive),
        "t_wakeup_s": repr(scenario.t_wakeup),
        "t_processing_s": repr(scenario.t_processing),
        "t_receive_s": repr(scenario.t_receive),
        "tx_power_draw_w": " ".join(
            f"{dbm}:{watts!r}" for dbm, watts in sorted(scenario.tx_power_draw.items())
        ),
    }
    cp["detector"] = {
        "window_length": str(scenario.window_length),
        "shift_step": str(scenario.shift_step),
        "theta": repr(scenario.theta),
    }
    cp["bandit"] = {"variance_padding": str(scenario.variance_padding).lower()}
    cp["phases"] = {
        f"{p.start}-{p.end}": (" ".join(str(c) for c in sorted(p.disabled)) or "none")
        for p in scenario.phases
    }
    cp["run"] = {
        "replications": str(scenario.replications),
        "base_seed": str(scenario.base_seed),
        "jam_rate": repr(scenario.jam_rate),
    }
    buf = io.StringIO()
    cp.write(buf)
    Path(path).write_text(buf.getvalue())


def bundled_scenario_path() -> Path:
    """Location of the packaged default scenario file."""
    return Path(resources.files("loramab").joinpath("data/paper.scenario"))
