"""Plain-text run configuration: ``key = value`` lines, ``#`` comments,
units encoded in key names.

Unknown keys, malformed lines and out-of-range values raise
:class:`ConfigError` carrying the offending line number.  An empty file
yields the shipped defaults (the reference geometry at the physical-layer
simulation point: 13.56 MHz, permeability 1, 6 cm separation, -105 dBm
noise).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from biomote.link import (
    Coil,
    LinkConfig,
    NoiseModel,
    REFERENCE_MOTE,
    REFERENCE_READER,
    REFERENCE_DRIVE_VOLTAGE,
)

__all__ = ["ConfigError", "RunParameters", "load_config", "default_parameters",
           "packaged_config_path"]


class ConfigError(ValueError):
    """Configuration problem; ``line`` is 1-based when tied to file text."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


def _parse_float(text: str) -> float:
    return float(text)


def _parse_int(text: str) -> int:
    return int(float(text))


def _parse_float_list(text: str) -> list[float]:
    """Comma list, each item a number or an a:b:c inclusive range."""
    out: list[float] = []
    for item in text.split(","):
        item = item.strip()
        if ":" in item:
            a, b, c = (float(x) for x in item.split(":"))
            if c <= 0:
                raise ValueError("range step must be positive")
            v = a
            while v <= b * (1 + 1e-12):
                out.append(round(v, 12))
                v += c
        elif item:
            out.append(float(item))
    if not out:
        raise ValueError("empty list")
    return out


def _parse_int_list(text: str) -> list[int]:
    return [int(round(v)) for v in _parse_float_list(text)]


def _positive(v):
    if v <= 0:
        raise ValueError("must be strictly positive")
    return v


def _at_least_one(v):
    if v < 1:
        raise ValueError("must be >= 1")
    return v


def _any(v):
    return v


def _positive_list(v):
    if any(x <= 0 for x in v):
        raise ValueError("entries must be strictly positive")
    return v


# key -> (parser, range check); units live in the names
_SCHEMA = {
    # link drive and medium
    "resonance_freq_hz": (_parse_float, _positive),
    "subcarrier_divider": (_parse_int, _at_least_one),
    "separation_m": (_parse_float, _positive),
    "drive_voltage_v": (_parse_float, _positive),
    "noise_dbm": (_parse_float, _any),
    "medium_rel_permeability": (_parse_float, _positive),
    "load_ohm": (_parse_float, _positive),
    # reader coil
    "reader_radius_m": (_parse_float, _positive),
    "reader_turns": (_parse_int, _at_least_one),
    "reader_wire_diameter_m": (_parse_float, _positive),
    "reader_height_m": (_parse_float, _positive),
    "reader_resistivity_ohm_m": (_parse_float, _positive),
    "reader_core_rel_permeability": (_parse_float, _positive),
    # mote coil
    "mote_radius_m": (_parse_float, _positive),
    "mote_turns": (_parse_int, _at_least_one),
    "mote_wire_diameter_m": (_parse_float, _positive),
    "mote_height_m": (_parse_float, _positive),
    "mote_resistivity_ohm_m": (_parse_float, _positive),
    "mote_core_rel_permeability": (_parse_float, _positive),
    # sweep grids and Monte Carlo budgets
    "link_distances_m": (_parse_float_list, _positive_list),
    "ber_distances_m": (_parse_float_list, _positive_list),
    "ber_trials": (_parse_int, _at_least_one),
    "ber_min_errors": (_parse_int, _at_least_one),
    "ber_max_bits": (_parse_int, _at_least_one),
    "mac_rate_bps": (_parse_float, _positive),
    "mac_packet_bytes": (_parse_int, _at_least_one),
    "mac_read_times_s": (_parse_float_list, _positive_list),
    "mac_n_motes": (_parse_int_list, _positive_list),
    "mac_trials": (_parse_int, _at_least_one),
    "mac_code_lens": (_parse_int_list, _positive_list),
    "mac_durations_slots": (_parse_int_list, _positive_list),
}


@dataclass
class RunParameters:
    """Parsed configuration; field names match config keys."""

    resonance_freq_hz: float = 13.56e6
    subcarrier_divider: int = 6
    separation_m: float = 0.06
    drive_voltage_v: float = REFERENCE_DRIVE_VOLTAGE
    noise_dbm: float = -105.0
    medium_rel_permeability: float = 1.0
    load_ohm: float | None = None            # None: matched to the mote coil

    reader_radius_m: float = REFERENCE_READER.loop_radius
    reader_turns: int = REFERENCE_READER.turns
    reader_wire_diameter_m: float = REFERENCE_READER.wire_diameter
    reader_height_m: float = REFERENCE_READER.coil_height
    reader_resistivity_ohm_m: float = REFERENCE_READER.resistivity
    reader_core_rel_permeability: float = 1.0

    mote_radius_m: float = REFERENCE_MOTE.loop_radius
    mote_turns: int = REFERENCE_MOTE.turns
    mote_wire_diameter_m: float = REFERENCE_MOTE.wire_diameter
    mote_height_m: float = REFERENCE_MOTE.coil_height
    mote_resistivity_ohm_m: float = REFERENCE_MOTE.resistivity
    mote_core_rel_permeability: float = 1.0

    link_distances_m: list = field(default_factory=lambda: [round(0.01 + 0.005 * k, 4) for k in range(19)])
    ber_distances_m: list = field(default_factory=lambda: [0.045, 0.05, 0.055, 0.06, 0.065, 0.07])
    ber_trials: int = 200_000
    ber_min_errors: int = 100
    ber_max_bits: int = 2_000_000

    mac_rate_bps: float = 200e3
    mac_packet_bytes: int = 64
    mac_read_times_s: list = field(default_factory=lambda: [2.0, 4.0, 6.0, 8.0, 10.0])
    mac_n_motes: list = field(default_factory=lambda: list(range(10, 201, 10)))
    mac_trials: int = 100
    mac_code_lens: list = field(default_factory=lambda: [16, 32, 64, 128, 256])
    mac_durations_slots: list = field(default_factory=lambda: [128, 1280])

    # ------------------------------------------------------------------
    def reader_coil(self, mu: float | None = None) -> Coil:
        return Coil(turns=self.reader_turns, loop_radius=self.reader_radius_m,
                    wire_diameter=self.reader_wire_diameter_m,
                    coil_height=self.reader_height_m,
                    resistivity=self.reader_resistivity_ohm_m,
                    core_rel_permeability=mu if mu is not None
                    else self.reader_core_rel_permeability)

    def mote_coil(self, mu: float | None = None) -> Coil:
        return Coil(turns=self.mote_turns, loop_radius=self.mote_radius_m,
                    wire_diameter=self.mote_wire_diameter_m,
                    coil_height=self.mote_height_m,
                    resistivity=self.mote_resistivity_ohm_m,
                    core_rel_permeability=mu if mu is not None
                    else self.mote_core_rel_permeability, is_mote=True)

    def link_config(self, mu: float | None = None,
                    resonance_freq_hz: float | None = None,
                    subcarrier_divider: int | None = None) -> LinkConfig:
        """Build the coupled-coil configuration; ``mu`` overrides core and
        medium permeability together (ferrite-loaded design point)."""
        return LinkConfig(
            reader=self.reader_coil(mu),
            mote=self.mote_coil(mu),
            separation=self.separation_m,
            drive_voltage=self.drive_voltage_v,
            resonance_freq=resonance_freq_hz or self.resonance_freq_hz,
            subcarrier_divider=subcarrier_divider or self.subcarrier_divider,
            load_impedance=self.load_ohm,
            medium_rel_permeability=mu if mu is not None
            else self.medium_rel_permeability,
        )

    def noise(self) -> NoiseModel:
        return NoiseModel.from_total_dbm(self.noise_dbm)


def default_parameters() -> RunParameters:
    return RunParameters()


def apply_setting(params: RunParameters, key: str, value: str,
                  line: int | None = None) -> None:
    if key not in _SCHEMA:
        raise ConfigError(f"unknown key {key!r}", line)
    parser, check = _SCHEMA[key]
    try:
        parsed = check(parser(value))
    except ConfigError:
        raise
    except Exception as exc:
        raise ConfigError(f"bad value for {key!r}: {exc}", line) from exc
    setattr(params, key, parsed)


def load_config(path: str | Path) -> RunParameters:
    """Parse a config file into :class:`RunParameters`."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    params = default_parameters()
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, _, value = text.partition("=")
        apply_setting(params, key.strip(), value.strip(), lineno)
    return params


def packaged_config_path(name: str = "table3.cfg") -> Path:
    """Path of a config shipped inside the package."""
    return Path(__file__).parent / "configs" / name
