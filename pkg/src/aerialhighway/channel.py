"""RF link layer: sectorized ground-to-air model, HAPS link, SINR and rates.

Ground-to-air combines a sectorized element pattern (peak 8 dBi, quadratic
azimuth/elevation roll-off capped by the null thresholds), a uniform linear
array factor, a distance/altitude line-of-sight probability, and a
probabilistic mean path loss mixing LoS/NLoS components. The UAV-HAPS uplink
uses free-space loss with Rician small-scale fading and a bandwidth/power
fraction Shannon rate. The weighted rate divides by the per-node user share
(capped at the quota) and applies a multiplicative handover penalty.

All SINR arithmetic is carried out in linear mW; dB/dBm only at the config
surface.
"""

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

SPEED_OF_LIGHT = 299792458.0

HALF_POWER_BEAMWIDTH_RAD = 65.0 * math.pi / 180.0


def dbm_to_mw(dbm):
    return 10.0 ** (dbm / 10.0)


def db_to_linear(db):
    return 10.0 ** (db / 10.0)


@dataclass(frozen=True)
class NoiseModel:
    noise_psd_dbm_per_hz: float = -174.0

    def psd_mw_per_hz(self):
        return dbm_to_mw(self.noise_psd_dbm_per_hz)


@dataclass(frozen=True)
class TbsConfig:
    """One terrestrial base station (three 120-degree sectors, ULA per sector)."""

    position_m: tuple = (0.0, 0.0, 25.0)
    tx_power_dbm: float = 40.0
    num_antennas: int = 8
    downtilt_rad: float = -0.1
    bandwidth_hz: float = 20e6
    carrier_hz: float = 2.1e9
    peak_element_gain_dbi: float = 8.0
    sidelobe_limit_db: float = 30.0
    sla_db: float = 30.0
    half_power_beamwidth_rad: float = HALF_POWER_BEAMWIDTH_RAD
    quota: int = 5
    assume_los_band: bool = True
    # optional (intercept, distance-exponent) overrides for the path loss
    # components; None selects the UMa-AV-style defaults below
    pathloss_los_override: tuple = None
    pathloss_nlos_override: tuple = None

    def __post_init__(self):
        if self.tx_power_dbm is None or self.bandwidth_hz <= 0:
            raise ValueError("bandwidth must be > 0")
        if self.num_antennas < 1:
            raise ValueError("num_antennas must be >= 1")
        if not 0 < self.half_power_beamwidth_rad < math.pi:
            raise ValueError("half_power_beamwidth_rad must be in (0, pi)")
        if self.quota < 1:
            raise ValueError("quota must be >= 1")


@dataclass(frozen=True)
class HapsConfig:
    """The high-altitude platform node (single wide-area uplink cell)."""

    position_m: tuple = (500.0, 500.0, 20000.0)
    total_bandwidth_hz: float = 20e6
    antenna_gain_linear: float = 8.0
    carrier_hz: float = 2.0e9
    rician_k_db: float = 15.0
    max_uav_tx_power_dbm: float = 23.0
    capacity_limit_bps: float = 100e6
    quota: int = 5

    def __post_init__(self):
        if self.total_bandwidth_hz <= 0 or self.capacity_limit_bps <= 0:
            raise ValueError("bandwidth and capacity must be > 0")
        if self.quota < 1:
            raise ValueError("quota must be >= 1")


@dataclass
class LinkSample:
    """Instantaneous RF quantities for one (UAV, node) link."""

    node_id: int
    distance_m: float
    azimuth_rad: float
    elevation_rad: float
    gain_linear: float
    sinr_linear: float
    rate_bps: float
    weighted_rate_bps: float
    los_prob: float


# ----------------------------------------------------------------- G2A pattern

def element_gain_db(azimuth_rad, elevation_rad, cfg):
    """Sectorized element gain: peak minus the capped az/el attenuations."""
    a_az = min(12.0 * (azimuth_rad / cfg.half_power_beamwidth_rad) ** 2,
               cfg.sidelobe_limit_db)
    a_el = min(12.0 * (elevation_rad / cfg.half_power_beamwidth_rad) ** 2,
               cfg.sla_db)
    return cfg.peak_element_gain_dbi - min(a_az + a_el, cfg.sidelobe_limit_db)


def array_factor_amplitude(elevation_rad, cfg):
    """ULA field amplitude vs elevation; sqrt(N) at boresight (the 0/0 limit)."""
    n = cfg.num_antennas
    delta = math.sin(elevation_rad) - math.sin(cfg.downtilt_rad)
    arg = 0.5 * math.pi * delta
    if abs(arg) < 1e-9:
        return math.sqrt(n)
    return math.sin(n * arg) / (math.sqrt(n) * math.sin(arg))


def pattern_gain_db(azimuth_rad, elevation_rad, cfg):
    """Total pattern: element gain plus the array factor converted to power dB.

    The array factor is a field amplitude; it enters as 20*log10(|F|) with a
    floor to keep pattern nulls finite.
    """
    f = abs(array_factor_amplitude(elevation_rad, cfg))
    return element_gain_db(azimuth_rad, elevation_rad, cfg) + 20.0 * math.log10(max(f, 1e-6))


def los_probability(distance_m, uav_altitude_m, assume_los_band=True):
    """Distance/altitude LoS probability; forced to 1 in the 100-300 m band."""
    if uav_altitude_m <= 0:
        raise ValueError("uav_altitude_m must be > 0")
    if distance_m <= 0:
        raise ValueError("distance_m must be > 0")
    if assume_los_band and 100.0 <= uav_altitude_m <= 300.0:
        return 1.0
    d1 = max(460.0 * math.log10(uav_altitude_m) - 700.0, 18.0)
    if distance_m <= d1:
        return 1.0
    p1 = 4300.0 * math.log10(uav_altitude_m) - 3800.0
    if p1 <= 0:
        # below ~7.7 m the decay scale degenerates; only the d1 plateau survives
        return min(max(d1 / distance_m, 0.0), 1.0)
    p = d1 / distance_m + math.exp(-distance_m / p1) * (1.0 - d1 / distance_m)
    return min(max(p, 0.0), 1.0)


def _los_component_db(distance_m, cfg):
    if cfg.pathloss_los_override is not None:
        a, b = cfg.pathloss_los_override
        return a + b * math.log10(distance_m)
    f_ghz = cfg.carrier_hz / 1e9
    return 28.0 + 22.0 * math.log10(distance_m) + 20.0 * math.log10(f_ghz)


def _nlos_component_db(distance_m, uav_altitude_m, cfg):
    if cfg.pathloss_nlos_override is not None:
        a, b = cfg.pathloss_nlos_override
        return a + b * math.log10(distance_m)
    f_ghz = cfg.carrier_hz / 1e9
    return (-17.5 + (46.0 - 7.0 * math.log10(uav_altitude_m)) * math.log10(distance_m)
            + 20.0 * math.log10(40.0 * math.pi * f_ghz / 3.0))


def mean_path_loss_db(distance_m, uav_altitude_m, cfg):
    """LoS-probability-weighted mix of the two path loss components."""
    p = los_probability(distance_m, uav_altitude_m, cfg.assume_los_band)
    l_los = _los_component_db(distance_m, cfg)
    l_nlos = _nlos_component_db(distance_m, uav_altitude_m, cfg)
    return l_los * p + l_nlos * (1.0 - p)


def g2a_geometry(uav_pos, cfg):
    """(distance, sector-folded azimuth, elevation) from a BS to a UAV.

    Azimuth is measured against the nearest of the three 120-degree sector
    boresights, so it always lands in [-60, +60] degrees. Elevation is
    positive above the antenna horizon.
    """
    dx = uav_pos[0] - cfg.position_m[0]
    dy = uav_pos[1] - cfg.position_m[1]
    dz = uav_pos[2] - cfg.position_m[2]
    horiz = math.hypot(dx, dy)
    distance = math.sqrt(dx * dx + dy * dy + dz * dz)
    az_raw = math.atan2(dy, dx)
    third = 2.0 * math.pi / 3.0
    azimuth = (az_raw + third / 2.0) % third - third / 2.0
    elevation = math.atan2(dz, horiz)
    return distance, azimuth, elevation


def g2a_gain_linear(uav_pos, cfg):
    """Linear channel power gain: pattern gain minus mean path loss."""
    distance, azimuth, elevation = g2a_geometry(uav_pos, cfg)
    g_db = pattern_gain_db(azimuth, elevation, cfg)
    loss_db = mean_path_loss_db(distance, uav_pos[2], cfg)
    return db_to_linear(g_db - loss_db)


def g2a_sinr(uav_pos, serving, all_tbs, noise):
    """Downlink SINR (linear) to a UAV from its serving BS among interferers."""
    if not all_tbs:
        raise ValueError("all_tbs must not be empty")
    if serving not in all_tbs:
        raise ValueError("serving BS must be one of all_tbs")
    signal = 0.0
    interference = 0.0
    for cfg in all_tbs:
        rx = dbm_to_mw(cfg.tx_power_dbm) * g2a_gain_linear(uav_pos, cfg)
        if cfg is serving:
            signal = rx
        else:
            interference += rx
    noise_mw = noise.psd_mw_per_hz() * serving.bandwidth_hz
    return signal / (noise_mw + interference)


def g2a_sinr_all(uav_pos, all_tbs, noise):
    """SINR toward every BS in one pass (each taken in turn as serving)."""
    rx = np.array([dbm_to_mw(c.tx_power_dbm) * g2a_gain_linear(uav_pos, c)
                   for c in all_tbs])
    total = rx.sum()
    out = np.empty(len(all_tbs))
    for i, cfg in enumerate(all_tbs):
        noise_mw = noise.psd_mw_per_hz() * cfg.bandwidth_hz
        out[i] = rx[i] / (noise_mw + (total - rx[i]))
    return out


def g2a_rate_bps(sinr_linear, cfg):
    """Full-band Shannon rate of the serving BS; per-user share happens in
    the weighted rate."""
    return cfg.bandwidth_hz * math.log2(1.0 + sinr_linear)


# ------------------------------------------------------------------- HAPS link

def rician_sample(k_db, rng):
    """One Rician fading coefficient: fixed-power LoS phasor plus scatter.

    As modeled, E[|h|^2] = (K+2) / (2(K+1)) in linear K; pass the coefficient
    through :func:`normalize_fading_coeff` for unit mean power.
    """
    k = db_to_linear(k_db)
    theta = rng.uniform(0.0, 2.0 * math.pi)
    g_i = rng.standard_normal()
    g_q = rng.standard_normal()
    los = math.sqrt(k / (k + 1.0)) * cmath.exp(1j * theta)
    scatter = math.sqrt(1.0 / (k + 1.0)) * complex(g_i, g_q)
    return (los + scatter) / math.sqrt(2.0)


def rician_mean_power(k_db):
    """Analytic E[|h|^2] of :func:`rician_sample`."""
    k = db_to_linear(k_db)
    return (k + 2.0) / (2.0 * (k + 1.0))


def normalize_fading_coeff(h, k_db):
    """Rescale a fading coefficient so the ensemble satisfies E[|h|^2] = 1."""
    return h / math.sqrt(rician_mean_power(k_db))


def haps_channel_gain(distance_m, fading, cfg):
    """Linear gain of the UAV-HAPS link: antenna gain, free-space loss, fading."""
    if distance_m <= 0:
        raise ValueError("distance_m must be > 0")
    fspl_amp = SPEED_OF_LIGHT / (4.0 * math.pi * distance_m * cfg.carrier_hz)
    return cfg.antenna_gain_linear * fspl_amp * fspl_amp * abs(fading) ** 2


def haps_rate(bandwidth_frac, power_frac, gain_linear, cfg, noise):
    """Uplink Shannon rate for one UAV's bandwidth/power fractions."""
    if not 0.0 <= bandwidth_frac <= 1.0:
        raise ValueError("bandwidth_frac must be in [0, 1]")
    if not 0.0 <= power_frac <= 1.0:
        raise ValueError("power_frac must be in [0, 1]")
    if bandwidth_frac == 0.0:
        return 0.0
    band = bandwidth_frac * cfg.total_bandwidth_hz
    snr = (power_frac * dbm_to_mw(cfg.max_uav_tx_power_dbm) * gain_linear
           / (band * noise.psd_mw_per_hz()))
    return band * math.log2(1.0 + snr)


# ---------------------------------------------------------------- shared rate

def weighted_rate(rate_bps, quota, load, ho_flag, gamma):
    """Per-user share of the rate under saturation, with a handover penalty.

    The divisor is min(quota, load) floored at 1 so an idle node passes the
    raw rate through.
    """
    if quota < 1:
        raise ValueError("quota must be >= 1")
    if load < 0:
        raise ValueError("load must be >= 0")
    if not 0.0 <= gamma < 1.0:
        raise ValueError("gamma must be in [0, 1)")
    share = max(1, min(quota, load))
    return rate_bps / share * (1.0 - gamma * (1 if ho_flag else 0))
