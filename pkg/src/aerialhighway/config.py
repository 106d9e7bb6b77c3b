"""Scenario configuration: one nested tree covering every tunable constant.

The defaults reproduce the reference parameterization: 20 Hz physics,
1000 x 1000 x 300 m airspace, 4 TBS at 2.1 GHz / 40 dBm / 8 dBi, one HAPS at
20 km / 2 GHz / 20 MHz / 100 Mbps cap, per-node quota 5, -174 dBm/Hz noise,
Rician K = 15 dB, crash penalty -100, reflection threshold -10, slow gates at
1 s (LLM) and 5 s (HAPS).

Loads from / dumps to YAML; `apply_override` takes dotted-path assignments.
Validation errors carry the offending field path.
"""

import dataclasses
import math
from dataclasses import dataclass, field, fields, is_dataclass

import yaml

from .channel import HapsConfig, NoiseModel, TbsConfig
from .faults import ConfigError
from .physics import UavParams


@dataclass
class PhysicsBlock:
    mass_kg: float = 1.5
    inertia_diag: tuple = (0.029, 0.029, 0.055)
    arm_length_m: float = 0.35
    # hover at 50% rpm_max: k_F = m g / (4 (rpm_max/2)^2)
    thrust_coeff: float = 2.3544e-08
    torque_coeff: float = 2.3544e-10
    drag_diag: tuple = (0.1, 0.1, 0.1)
    ground_effect_coeff: float = 2.0
    prop_radius_m: float = 0.12
    rpm_min: float = 0.0
    rpm_max: float = 25000.0
    ground_effect_enabled: bool = True

    def uav_params(self):
        return UavParams(
            mass_kg=self.mass_kg, inertia_diag=tuple(self.inertia_diag),
            arm_length_m=self.arm_length_m, thrust_coeff=self.thrust_coeff,
            torque_coeff=self.torque_coeff, drag_diag=tuple(self.drag_diag),
            ground_effect_coeff=self.ground_effect_coeff,
            prop_radius_m=self.prop_radius_m, rpm_min=self.rpm_min,
            rpm_max=self.rpm_max,
        )


@dataclass
class TbsBlock:
    count: int = 4
    positions: list = None          # None: uniform grid over the ground plane
    antenna_height_m: float = 25.0
    tx_power_dbm: float = 40.0
    num_antennas: int = 8
    downtilt_rad: float = -0.1
    bandwidth_hz: float = 20e6
    carrier_hz: float = 2.1e9
    peak_element_gain_dbi: float = 8.0
    sidelobe_limit_db: float = 30.0
    sla_db: float = 30.0
    half_power_beamwidth_rad: float = 65.0 * math.pi / 180.0
    quota: int = 5
    assume_los_band: bool = True


@dataclass
class HapsBlock:
    altitude_m: float = 20000.0
    position_xy: tuple = None       # None: airspace center
    total_bandwidth_hz: float = 20e6
    antenna_gain_linear: float = 8.0
    carrier_hz: float = 2.0e9
    rician_k_db: float = 15.0
    max_uav_tx_power_dbm: float = 23.0
    capacity_limit_bps: float = 100e6
    quota: int = 5
    normalize_fading: bool = False


@dataclass
class ChannelBlock:
    tbs: TbsBlock = field(default_factory=TbsBlock)
    haps: HapsBlock = field(default_factory=HapsBlock)
    noise_psd_dbm_per_hz: float = -174.0
    handover_rate_penalty: float = 0.2      # gamma in the weighted rate


@dataclass
class RewardBlock:
    alpha: tuple = (1.0, 0.1, 0.2)          # transport: progress, energy, attitude
    beta_handover: float = 1.0
    rho_crash: float = -100.0
    d_safe_m: float = 5.0
    telecom_rate_unit_bps: float = 1e6      # telecom reward in Mbps
    # scalarization for the reflection trigger; the telecom weight is kept
    # small so Mbps-scale rates cannot mask a crash penalty
    scalarization_weights: tuple = (1.0, 0.05, 1.0, 1.0)
    rho_thresh: float = -10.0
    meta_rho_thresh: float = -10.0
    count_forced_handover: bool = True


@dataclass
class ObservationBlock:
    sigma_pos_m: float = 0.05
    sigma_vel_mps: float = 0.05
    sigma_att_rad: float = 0.01
    sigma_omega_radps: float = 0.01
    sigma_rpm: float = 0.0
    perception_radius_m: float = 50.0


@dataclass
class TimescaleBlock:
    dt_s: float = 0.05
    llm_period_steps: int = 20              # 1.0 s
    haps_period_steps: int = 100            # 5.0 s


@dataclass
class EnvBlock:
    airspace_m: tuple = (1000.0, 1000.0, 300.0)
    placement_margin_m: float = 50.0
    altitude_range_m: tuple = (100.0, 280.0)
    spawn_separation_m: float = 15.0
    origins: list = None                    # None: seeded random placement
    targets: list = None
    haps_admission_gating: bool = True
    haps_capacity_headroom: float = 0.7
    arrival_radius_m: float = 1.0
    terminate_on_arrival: bool = True


@dataclass
class AgentBlock:
    # directive -> velocity setpoint
    speed_gentle_mps: float = 2.0
    speed_normal_mps: float = 5.0
    speed_aggressive_mps: float = 10.0
    vertical_speed_mps: float = 2.0
    accel_fraction: float = 0.25
    v_max_mps: float = 15.0
    # cascaded velocity -> attitude -> rate controller
    tilt_max_deg: float = 14.0
    kp_vel: float = 2.0
    kd_vel: float = 0.5
    kp_att: float = 20.0
    kd_att: float = 7.2
    # DDQN
    hidden_layers: tuple = (128, 128)
    learning_rate: float = 1e-3
    discount: float = 0.99
    epsilon_start: float = 1.0
    epsilon_end: float = 0.05
    epsilon_decay_steps: int = 50000
    replay_capacity: int = 100000
    batch_size: int = 64
    target_sync_steps: int = 1000
    warmup_steps: int = 1000
    learn_every: int = 1
    telecom_policy: str = "ddqn"            # ddqn | greedy_haps | stay


@dataclass
class CognitionBlock:
    top_k: int = 3
    memory_capacity: int = 10000
    # bin edges for the observation discretizer
    target_distance_bins_m: tuple = (10.0, 50.0, 200.0)
    sinr_bins_db: tuple = (0.0, 10.0, 20.0)
    load_bins_frac: tuple = (0.5, 0.9)
    speed_bins_mps: tuple = (0.5, 3.0, 8.0)
    vertical_threshold_m: float = 5.0
    threat_radius_m: float = 15.0


@dataclass
class BackendBlock:
    mode: str = "mock"                      # mock | llm
    mock_kind: str = "heuristic"            # heuristic | fixed
    fixed_reply: str = "DIRECTIVE HOVER"
    url: str = "http://localhost:11434/api/chat"
    model_uav: str = "edge-pilot"
    model_haps: str = "orchestrator"
    temperature: float = 0.0
    timeout_s: float = 0.8


@dataclass
class MetaBlock:
    mode: str = "rule"                      # rule | llm
    eta: tuple = (1.0, 50.0, 5.0)


@dataclass
class AblationBlock:
    memory_prompt: bool = True
    meta_controller: bool = True


@dataclass
class ScenarioConfig:
    seed: int = 0
    horizon_steps: int = 400
    num_uavs: int = 3
    env: EnvBlock = field(default_factory=EnvBlock)
    physics: PhysicsBlock = field(default_factory=PhysicsBlock)
    channel: ChannelBlock = field(default_factory=ChannelBlock)
    rewards: RewardBlock = field(default_factory=RewardBlock)
    observation: ObservationBlock = field(default_factory=ObservationBlock)
    timescales: TimescaleBlock = field(default_factory=TimescaleBlock)
    agent: AgentBlock = field(default_factory=AgentBlock)
    cognition: CognitionBlock = field(default_factory=CognitionBlock)
    backend: BackendBlock = field(default_factory=BackendBlock)
    meta: MetaBlock = field(default_factory=MetaBlock)
    ablation: AblationBlock = field(default_factory=AblationBlock)

    # -------------------------------------------------------- derived objects

    def uav_params(self):
        return self.physics.uav_params()

    def tbs_positions(self):
        if self.channel.tbs.positions is not None:
            return [tuple(p) for p in self.channel.tbs.positions]
        # uniform grid over the ground plane
        n = self.channel.tbs.count
        ax, ay, _ = self.env.airspace_m
        cols = int(math.ceil(math.sqrt(n)))
        rows = int(math.ceil(n / cols))
        out = []
        for i in range(n):
            r, c = divmod(i, cols)
            x = ax * (c + 0.5) / cols
            y = ay * (r + 0.5) / rows
            out.append((x, y, self.channel.tbs.antenna_height_m))
        return out

    def tbs_configs(self):
        t = self.channel.tbs
        return [
            TbsConfig(
                position_m=pos, tx_power_dbm=t.tx_power_dbm,
                num_antennas=t.num_antennas, downtilt_rad=t.downtilt_rad,
                bandwidth_hz=t.bandwidth_hz, carrier_hz=t.carrier_hz,
                peak_element_gain_dbi=t.peak_element_gain_dbi,
                sidelobe_limit_db=t.sidelobe_limit_db, sla_db=t.sla_db,
                half_power_beamwidth_rad=t.half_power_beamwidth_rad,
                quota=t.quota, assume_los_band=t.assume_los_band,
            )
            for pos in self.tbs_positions()
        ]

    def haps_config(self):
        h = self.channel.haps
        if h.position_xy is not None:
            x, y = h.position_xy
        else:
            x, y = self.env.airspace_m[0] / 2.0, self.env.airspace_m[1] / 2.0
        return HapsConfig(
            position_m=(x, y, h.altitude_m),
            total_bandwidth_hz=h.total_bandwidth_hz,
            antenna_gain_linear=h.antenna_gain_linear, carrier_hz=h.carrier_hz,
            rician_k_db=h.rician_k_db,
            max_uav_tx_power_dbm=h.max_uav_tx_power_dbm,
            capacity_limit_bps=h.capacity_limit_bps, quota=h.quota,
        )

    def noise(self):
        return NoiseModel(noise_psd_dbm_per_hz=self.channel.noise_psd_dbm_per_hz)

    def num_nodes(self):
        return self.channel.tbs.count + 1

    def haps_node_id(self):
        return self.channel.tbs.count


# --------------------------------------------------------------- dict <-> tree

def to_dict(cfg):
    """Plain-dict form of a config tree (tuples become lists for YAML)."""
    def convert(value):
        if is_dataclass(value):
            return {f.name: convert(getattr(value, f.name)) for f in fields(value)}
        if isinstance(value, tuple):
            return [convert(v) for v in value]
        if isinstance(value, list):
            return [convert(v) for v in value]
        return value
    return convert(cfg)


def _coerce(value, template, path):
    if is_dataclass(template):
        if not isinstance(value, dict):
            raise ConfigError(f"{path}: expected a mapping, got {type(value).__name__}")
        known = {f.name: f for f in fields(template)}
        unknown = set(value) - set(known)
        if unknown:
            raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
        kwargs = {}
        for name, f in known.items():
            current = getattr(template, name)
            if name in value:
                kwargs[name] = _coerce(value[name], current, f"{path}.{name}" if path else name)
            else:
                kwargs[name] = current
        return type(template)(**kwargs)
    if isinstance(template, tuple):
        if not isinstance(value, (list, tuple)):
            raise ConfigError(f"{path}: expected a sequence")
        return tuple(value)
    if isinstance(template, bool):
        if not isinstance(value, bool):
            raise ConfigError(f"{path}: expected a boolean, got {value!r}")
        return value
    if isinstance(template, int) and not isinstance(template, bool):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{path}: expected a number, got {value!r}")
        return int(value)
    if isinstance(template, float):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{path}: expected a number, got {value!r}")
        return float(value)
    return value


def from_dict(data):
    """Build a ScenarioConfig from a (possibly partial) plain dict."""
    if data is None:
        data = {}
    cfg = _coerce(data, ScenarioConfig(), "")
    validate(cfg)
    return cfg


def load(path):
    with open(path) as fh:
        data = yaml.safe_load(fh)
    return from_dict(data)


def dump(cfg, path=None):
    text = yaml.safe_dump(to_dict(cfg), sort_keys=False)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def apply_override(cfg, dotted_key, raw_value):
    """Apply one `a.b.c=value` override; the value is parsed as YAML."""
    parts = dotted_key.split(".")
    data = to_dict(cfg)
    node = data
    for p in parts[:-1]:
        if not isinstance(node, dict) or p not in node:
            raise ConfigError(f"{dotted_key}: no such config field")
        node = node[p]
    if not isinstance(node, dict) or parts[-1] not in node:
        raise ConfigError(f"{dotted_key}: no such config field")
    node[parts[-1]] = yaml.safe_load(raw_value)
    return from_dict(data)


# ------------------------------------------------------------------ validation

def _require(cond, path, msg):
    if not cond:
        raise ConfigError(f"{path}: {msg}")


def validate(cfg):
    _require(cfg.num_uavs >= 1, "num_uavs", "must be >= 1")
    _require(cfg.horizon_steps >= 1, "horizon_steps", "must be >= 1")
    _require(all(a > 0 for a in cfg.env.airspace_m), "env.airspace_m", "must be positive")
    _require(len(cfg.env.airspace_m) == 3, "env.airspace_m", "must have 3 entries")
    _require(0 < cfg.env.haps_capacity_headroom <= 1.0,
             "env.haps_capacity_headroom", "must be in (0, 1]")
    p = cfg.physics
    _require(p.mass_kg > 0, "physics.mass_kg", "must be > 0")
    _require(p.rpm_min < p.rpm_max, "physics.rpm_min", "must be < rpm_max")
    _require(all(j > 0 for j in p.inertia_diag), "physics.inertia_diag", "must be positive")
    c = cfg.channel
    _require(c.tbs.count >= 1, "channel.tbs.count", "must be >= 1")
    _require(c.tbs.quota >= 1, "channel.tbs.quota", "must be >= 1")
    _require(c.tbs.bandwidth_hz > 0, "channel.tbs.bandwidth_hz", "must be > 0")
    _require(0 < c.tbs.half_power_beamwidth_rad < math.pi,
             "channel.tbs.half_power_beamwidth_rad", "must be in (0, pi)")
    if c.tbs.positions is not None:
        _require(len(c.tbs.positions) == c.tbs.count,
                 "channel.tbs.positions", f"must list {c.tbs.count} positions")
    _require(c.haps.quota >= 1, "channel.haps.quota", "must be >= 1")
    _require(c.haps.capacity_limit_bps > 0, "channel.haps.capacity_limit_bps", "must be > 0")
    _require(c.haps.total_bandwidth_hz > 0, "channel.haps.total_bandwidth_hz", "must be > 0")
    _require(0 <= c.handover_rate_penalty < 1,
             "channel.handover_rate_penalty", "must be in [0, 1)")
    r = cfg.rewards
    _require(len(r.alpha) == 3, "rewards.alpha", "must have 3 entries")
    _require(len(r.scalarization_weights) == 4,
             "rewards.scalarization_weights", "must have 4 entries")
    _require(r.d_safe_m > 0, "rewards.d_safe_m", "must be > 0")
    _require(r.telecom_rate_unit_bps > 0, "rewards.telecom_rate_unit_bps", "must be > 0")
    t = cfg.timescales
    _require(t.dt_s > 0, "timescales.dt_s", "must be > 0")
    _require(t.llm_period_steps >= 1, "timescales.llm_period_steps", "must be >= 1")
    _require(t.haps_period_steps >= 1, "timescales.haps_period_steps", "must be >= 1")
    a = cfg.agent
    _require(0 <= a.discount < 1, "agent.discount", "must be in [0, 1)")
    _require(a.replay_capacity >= a.batch_size,
             "agent.replay_capacity", "must be >= batch_size")
    _require(a.telecom_policy in ("ddqn", "greedy_haps", "stay"),
             "agent.telecom_policy", "must be one of ddqn|greedy_haps|stay")
    _require(a.epsilon_start >= a.epsilon_end, "agent.epsilon_start",
             "must be >= epsilon_end")
    _require(a.v_max_mps > 0, "agent.v_max_mps", "must be > 0")
    g = cfg.cognition
    _require(g.top_k >= 0, "cognition.top_k", "must be >= 0")
    _require(g.memory_capacity >= 1, "cognition.memory_capacity", "must be >= 1")
    _require(cfg.backend.mode in ("mock", "llm"), "backend.mode", "must be mock|llm")
    _require(cfg.backend.mock_kind in ("heuristic", "fixed"),
             "backend.mock_kind", "must be heuristic|fixed")
    _require(cfg.meta.mode in ("rule", "llm"), "meta.mode", "must be rule|llm")
    _require(len(cfg.meta.eta) == 3 and all(e >= 0 for e in cfg.meta.eta),
             "meta.eta", "must be 3 non-negative weights")
    if cfg.env.origins is not None:
        _require(len(cfg.env.origins) == cfg.num_uavs,
                 "env.origins", f"must list {cfg.num_uavs} origins")
    if cfg.env.targets is not None:
        _require(len(cfg.env.targets) == cfg.num_uavs,
                 "env.targets", f"must list {cfg.num_uavs} targets")
    return cfg
