"""Tool configuration: one INI file, every default in one place.

CLI flags override file values, file values override the defaults below.
`DEFAULT_INI` doubles as the documented reference for all available keys.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, fields

from .errors import ConfigError
from .linkbudget import LinkBudgetConfig
from .synth import SynthConfig

__all__ = ["ToolConfig", "DEFAULT_INI", "load_config"]

DEFAULT_INI = """\
# portcanyon configuration file (INI). Every key is optional; the values
# below are the built-in defaults.

[model]
# Maximum azimuthal acceptance angle of the canyon model (rad).
psi_rad = 0.1
# RX antenna height above ground (m).
rx_height_m = 1.5

[angular]
# Histogram bin width for ensemble spectrum statistics (dB).
histogram_bin_db = 1.0

[synth]
# Master seed; a fixed seed makes datasets and reports byte-identical.
seed = 0
# Azimuth samples per rotation.
n_angles = 360
# RX horn half-power beamwidth (deg).
hpbw_deg = 10.0
# Per-bin Rayleigh fading on/off.
fading = true
# Monte Carlo realizations for the full-spread reference distribution.
n_realizations = 10000
# Calibration offset added to the proportional model gain (dB).
gain_offset_db = 0.0
# Vehicle perturbation: Gaussian mean/std of the gain difference (dB).
vehicle_mu_db = 1.13
vehicle_sigma_db = 6.91

[linkbudget]
# Transmit power per polarization (dBm) and antenna gain (dBi).
tx_power_dbm_per_pol = 28.0
tx_antenna_gain_dbi = 23.0
shadow_margin_db = 10.0
bandwidth_hz = 400e6
temperature_k = 300.0
noise_figure_db = 10.0
required_snr_db = 8.0
# Informational only: single-polarization spectral efficiency (bit/s/Hz).
spectral_efficiency_bps_hz = 2.0
"""


@dataclass
class ToolConfig:
    psi_rad: float = 0.1
    rx_height_m: float = 1.5
    histogram_bin_db: float = 1.0
    seed: int = 0
    n_angles: int = 360
    hpbw_deg: float = 10.0
    fading: bool = True
    n_realizations: int = 10_000
    gain_offset_db: float = 0.0
    vehicle_mu_db: float = 1.13
    vehicle_sigma_db: float = 6.91
    tx_power_dbm_per_pol: float = 28.0
    tx_antenna_gain_dbi: float = 23.0
    shadow_margin_db: float = 10.0
    bandwidth_hz: float = 400e6
    temperature_k: float = 300.0
    noise_figure_db: float = 10.0
    required_snr_db: float = 8.0
    spectral_efficiency_bps_hz: float = 2.0

    def synth_config(self) -> SynthConfig:
        return SynthConfig(
            seed=self.seed,
            n_angles=self.n_angles,
            hpbw_deg=self.hpbw_deg,
            psi=self.psi_rad,
            fading=self.fading,
            n_realizations=self.n_realizations,
            gain_offset_db=self.gain_offset_db,
            vehicle_mu_db=self.vehicle_mu_db,
            vehicle_sigma_db=self.vehicle_sigma_db,
        )

    def linkbudget_config(self) -> LinkBudgetConfig:
        return LinkBudgetConfig(
            tx_power_dbm_per_pol=self.tx_power_dbm_per_pol,
            tx_antenna_gain_dbi=self.tx_antenna_gain_dbi,
            shadow_margin_db=self.shadow_margin_db,
            bandwidth_hz=self.bandwidth_hz,
            temperature_k=self.temperature_k,
            noise_figure_db=self.noise_figure_db,
            required_snr_db=self.required_snr_db,
            spectral_efficiency_bps_hz=self.spectral_efficiency_bps_hz,
        )


_SECTIONS = {
    "model": ("psi_rad", "rx_height_m"),
    "angular": ("histogram_bin_db",),
    "synth": (
        "seed", "n_angles", "hpbw_deg", "fading", "n_realizations",
        "gain_offset_db", "vehicle_mu_db", "vehicle_sigma_db",
    ),
    "linkbudget": (
        "tx_power_dbm_per_pol", "tx_antenna_gain_dbi", "shadow_margin_db",
        "bandwidth_hz", "temperature_k", "noise_figure_db", "required_snr_db",
        "spectral_efficiency_bps_hz",
    ),
}


def load_config(path=None) -> ToolConfig:
    """Defaults, overridden by an optional INI file."""
    cfg = ToolConfig()
    if path is None:
        return cfg
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path!r}")
    types = {f.name: f.type for f in fields(ToolConfig)}
    for section, keys in _SECTIONS.items():
        if not parser.has_section(section):
            continue
        for key in parser.options(section):
            if key not in keys:
                raise ConfigError(f"unknown key [{section}] {key}")
            try:
                if types[key] == "bool":
                    value = parser.getboolean(section, key)
                elif types[key] == "int":
                    value = parser.getint(section, key)
                else:
                    value = parser.getfloat(section, key)
            except ValueError as exc:
                raise ConfigError(f"bad value for [{section}] {key}: {exc}") from exc
            setattr(cfg, key, value)
    return cfg
