"""Rigid-body quadrotor dynamics with drag and ground effect.

Thrust/moment of each rotor scales with RPM squared; an X-configuration
mixer maps rotor thrusts to body torques; translation follows Newton's
second law with linear drag; rotation follows the Euler equations with a
diagonal inertia tensor. Ground proximity augments each rotor's thrust
inversely with the square of altitude. Integration runs at a fixed step
(20 Hz by default) with rates advanced first and position/attitude advanced
on the averaged rates, which is exact under constant forcing.

The hot step itself lives in the kernel backend (compiled or pure Python,
chosen at import); this module owns the public types and operations.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from ..faults import SimulationFault
from .backend import kernels

logger = logging.getLogger(__name__)

GRAVITY = 9.81
MIN_GROUND_CLEARANCE = 0.01

DEFAULT_RPM_MAX = 25000.0


def _default_thrust_coeff(mass_kg=1.5, rpm_max=DEFAULT_RPM_MAX):
    # Hover at 50% of max RPM for mid-range control authority.
    hover = 0.5 * rpm_max
    return mass_kg * GRAVITY / (4.0 * hover * hover)


@dataclass(frozen=True)
class UavParams:
    """Physical constants of one quadrotor."""

    mass_kg: float = 1.5
    inertia_diag: tuple = (0.029, 0.029, 0.055)
    arm_length_m: float = 0.35
    thrust_coeff: float = field(default_factory=_default_thrust_coeff)
    torque_coeff: float = field(default_factory=lambda: 0.01 * _default_thrust_coeff())
    drag_diag: tuple = (0.1, 0.1, 0.1)
    ground_effect_coeff: float = 2.0
    prop_radius_m: float = 0.12
    rpm_min: float = 0.0
    rpm_max: float = DEFAULT_RPM_MAX

    def __post_init__(self):
        if self.mass_kg <= 0:
            raise ValueError("mass_kg must be > 0")
        if any(j <= 0 for j in self.inertia_diag):
            raise ValueError("inertia entries must be > 0")
        for name in ("arm_length_m", "thrust_coeff", "torque_coeff",
                     "ground_effect_coeff", "prop_radius_m"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        if any(d <= 0 for d in self.drag_diag):
            raise ValueError("drag entries must be > 0")
        if not self.rpm_min < self.rpm_max:
            raise ValueError("rpm_min must be < rpm_max")

    def hover_rpm(self):
        """RPM at which four rotors exactly balance gravity (no ground effect)."""
        return math.sqrt(self.mass_kg * GRAVITY / (4.0 * self.thrust_coeff))

    def packed(self):
        """Flat float64 layout consumed by the step kernels."""
        return np.array(
            [
                self.mass_kg,
                self.inertia_diag[0], self.inertia_diag[1], self.inertia_diag[2],
                self.arm_length_m,
                self.thrust_coeff, self.torque_coeff,
                self.drag_diag[0], self.drag_diag[1], self.drag_diag[2],
                self.ground_effect_coeff, self.prop_radius_m,
            ],
            dtype=np.float64,
        )


@dataclass
class RigidBodyState:
    """Full kinematic truth of one UAV.

    attitude is the body-to-inertial rotation matrix, kept orthonormal with
    det +1; angular_rate is expressed in the body frame.
    """

    position_m: np.ndarray
    velocity_mps: np.ndarray
    attitude: np.ndarray
    angular_rate_radps: np.ndarray
    rotor_rpm: np.ndarray

    @classmethod
    def at_rest(cls, position, rpm=0.0):
        return cls(
            position_m=np.asarray(position, dtype=np.float64).copy(),
            velocity_mps=np.zeros(3),
            attitude=np.eye(3),
            angular_rate_radps=np.zeros(3),
            rotor_rpm=np.full(4, float(rpm)),
        )

    def copy(self):
        return RigidBodyState(
            self.position_m.copy(), self.velocity_mps.copy(), self.attitude.copy(),
            self.angular_rate_radps.copy(), self.rotor_rpm.copy(),
        )

    def euler_rpy(self):
        """Roll, pitch, yaw (ZYX convention) extracted from the attitude matrix."""
        r = self.attitude
        pitch = -math.asin(max(-1.0, min(1.0, r[2, 0])))
        roll = math.atan2(r[2, 1], r[2, 2])
        yaw = math.atan2(r[1, 0], r[0, 0])
        return np.array([roll, pitch, yaw])

    def speed(self):
        return float(np.linalg.norm(self.velocity_mps))


@dataclass(frozen=True)
class ForceTorque:
    """Net force (inertial frame) and torque (body frame)."""

    force_N: np.ndarray
    torque_Nm: np.ndarray


def clamp_rpm(rpm, params):
    return np.clip(np.asarray(rpm, dtype=np.float64), params.rpm_min, params.rpm_max)


def motor_forces(rpm, params):
    """Per-rotor thrust and yaw moment: F_k = k_F P_k^2, M_k = k_T P_k^2.

    Out-of-range RPMs are clamped with a warning rather than rejected; real
    flight controllers saturate.
    """
    rpm = np.asarray(rpm, dtype=np.float64)
    if np.any(rpm < params.rpm_min) or np.any(rpm > params.rpm_max):
        logger.warning("rotor command outside [%g, %g] RPM, clamping: %s",
                       params.rpm_min, params.rpm_max, rpm)
        rpm = clamp_rpm(rpm, params)
    p2 = rpm * rpm
    return params.thrust_coeff * p2, params.torque_coeff * p2


def body_torques(per_rotor_thrust, per_rotor_moment, params):
    """X-configuration mixer from rotor thrusts/moments to body torques."""
    f = np.asarray(per_rotor_thrust, dtype=np.float64)
    m = np.asarray(per_rotor_moment, dtype=np.float64)
    lever = params.arm_length_m / math.sqrt(2.0)
    return np.array([
        lever * (f[0] - f[1] - f[2] + f[3]),
        lever * (f[0] + f[1] - f[2] - f[3]),
        m[0] - m[1] + m[2] - m[3],
    ])


def ground_effect(rpm, altitudes_m, params):
    """Thrust augmentation near the ground: k_G k_F (r_P / 4h)^2 P^2 per rotor.

    Altitudes below MIN_GROUND_CLEARANCE are clamped to avoid the 1/h^2
    singularity.
    """
    rpm = np.asarray(rpm, dtype=np.float64)
    h = np.maximum(np.asarray(altitudes_m, dtype=np.float64), MIN_GROUND_CLEARANCE)
    ratio = params.prop_radius_m / (4.0 * h)
    return params.ground_effect_coeff * params.thrust_coeff * ratio * ratio * rpm * rpm


def derivatives(state, rpm, params, with_ground_effect=True):
    """Translational and angular accelerations at the given state and RPMs."""
    accel, alpha = kernels.derivatives_single(
        np.ascontiguousarray(state.position_m),
        np.ascontiguousarray(state.velocity_mps),
        np.ascontiguousarray(state.attitude.reshape(9)),
        np.ascontiguousarray(state.angular_rate_radps),
        np.asarray(rpm, dtype=np.float64),
        params.packed(),
        int(with_ground_effect),
    )
    if not (np.all(np.isfinite(accel)) and np.all(np.isfinite(alpha))):
        raise SimulationFault(
            f"non-finite derivatives: accel={accel}, alpha={alpha}, "
            f"pos={state.position_m}, vel={state.velocity_mps}, rpm={rpm}"
        )
    return accel, alpha


def step(state, rpm_command, dt_s, params, with_ground_effect=True):
    """Advance one vehicle by one fixed step; returns the new state.

    The RPM command is clamped to the rotor envelope; the state's rotor_rpm
    tracks the command instantaneously (no motor lag).
    """
    cmd = clamp_rpm(rpm_command, params)
    new = state.copy()
    att = np.ascontiguousarray(new.attitude.reshape(9))
    kernels.step_single(new.position_m, new.velocity_mps, att,
                        new.angular_rate_radps, cmd, params.packed(),
                        float(dt_s), int(with_ground_effect))
    new.attitude = att.reshape(3, 3)
    new.rotor_rpm = cmd
    if not np.all(np.isfinite(new.position_m)) or not np.all(np.isfinite(new.velocity_mps)):
        raise SimulationFault(
            f"non-finite state after step: pos={new.position_m}, vel={new.velocity_mps}, "
            f"omega={new.angular_rate_radps}, rpm={cmd}"
        )
    return new


def step_all(states, rpm_commands, dt_s, params, with_ground_effect=True):
    """Advance all vehicles through the batched kernel; returns new states.

    Equivalent to mapping :func:`step` over the fleet; batching keeps the
    per-step loop inside the compiled kernel.
    """
    m = len(states)
    pos = np.ascontiguousarray(np.stack([s.position_m for s in states]))
    vel = np.ascontiguousarray(np.stack([s.velocity_mps for s in states]))
    att = np.ascontiguousarray(np.stack([s.attitude.reshape(9) for s in states]))
    omg = np.ascontiguousarray(np.stack([s.angular_rate_radps for s in states]))
    cmd = np.ascontiguousarray(
        np.stack([clamp_rpm(c, params) for c in rpm_commands]))
    kernels.step_batch(pos, vel, att, omg, cmd, params.packed(),
                       float(dt_s), int(with_ground_effect))
    if not np.all(np.isfinite(pos)) or not np.all(np.isfinite(vel)):
        raise SimulationFault(f"non-finite state after batched step at rows "
                              f"{np.where(~np.isfinite(pos).all(axis=1))[0]}")
    out = []
    for i in range(m):
        out.append(RigidBodyState(pos[i].copy(), vel[i].copy(),
                                  att[i].reshape(3, 3).copy(), omg[i].copy(),
                                  cmd[i].copy()))
    return out


def min_separation(states):
    """Minimum pairwise 3D distance over the fleet and the achieving pair.

    Returns (inf, None) with fewer than two vehicles.
    """
    if len(states) < 2:
        return math.inf, None
    best = math.inf
    pair = None
    for i in range(len(states)):
        for j in range(i + 1, len(states)):
            d = float(np.linalg.norm(states[i].position_m - states[j].position_m))
            if d < best:
                best = d
                pair = (i, j)
    return best, pair
