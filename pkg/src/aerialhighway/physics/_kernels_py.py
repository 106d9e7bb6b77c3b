"""Pure-Python rigid-body step kernel.

Fallback used when the compiled extension is unavailable (or when
AERIALHIGHWAY_PURE_PYTHON=1). The arithmetic mirrors ``_kernels.pyx``
operation-for-operation so both backends produce matching trajectories.

Parameter packing (shared with the compiled kernel):
    params = [mass, Jx, Jy, Jz, arm_length, k_F, k_T, Dx, Dy, Dz, k_G, r_P]
"""

import math

import numpy as np

GRAVITY = 9.81
MIN_GROUND_CLEARANCE = 0.01

BACKEND = "pure-python"


def _rotor_forces(rpm, kf, kt, kg, rp, altitude, ground_effect):
    """Per-rotor thrust (with optional ground-effect augmentation) and yaw moments."""
    thrust_total = 0.0
    yaw_net = 0.0
    for k in range(4):
        p2 = rpm[k] * rpm[k]
        f = kf * p2
        if ground_effect:
            h = altitude if altitude > MIN_GROUND_CLEARANCE else MIN_GROUND_CLEARANCE
            ratio = rp / (4.0 * h)
            f += kg * kf * ratio * ratio * p2
        thrust_total += f
        m = kt * p2
        yaw_net += m if k % 2 == 0 else -m
    return thrust_total, yaw_net


def derivatives(pos, vel, att, omega, rpm, params, ground_effect):
    """Translational and angular accelerations for one vehicle.

    ``att`` is the row-major flattened body-to-inertial rotation matrix.
    Returns (accel[3], angular_accel[3]).
    """
    mass = params[0]
    jx, jy, jz = params[1], params[2], params[3]
    arm = params[4]
    kf, kt = params[5], params[6]
    dx, dy, dz = params[7], params[8], params[9]
    kg, rp = params[10], params[11]

    thrust_total, yaw_net = _rotor_forces(rpm, kf, kt, kg, rp, pos[2], ground_effect)

    # Torques use the bare motor thrusts (Eq-level X-configuration mixing);
    # ground effect feeds only the collective thrust.
    f1 = kf * rpm[0] * rpm[0]
    f2 = kf * rpm[1] * rpm[1]
    f3 = kf * rpm[2] * rpm[2]
    f4 = kf * rpm[3] * rpm[3]
    lever = arm / math.sqrt(2.0)
    tau_x = lever * (f1 - f2 - f3 + f4)
    tau_y = lever * (f1 + f2 - f3 - f4)
    tau_z = yaw_net

    # Thrust is along body +z; rotate into the inertial frame (third column of R).
    ax = (att[2] * thrust_total - dx * vel[0]) / mass
    ay = (att[5] * thrust_total - dy * vel[1]) / mass
    az = (att[8] * thrust_total - mass * GRAVITY - dz * vel[2]) / mass

    # J w_dot = tau - w x (J w), diagonal inertia.
    hx = jx * omega[0]
    hy = jy * omega[1]
    hz = jz * omega[2]
    cx = omega[1] * hz - omega[2] * hy
    cy = omega[2] * hx - omega[0] * hz
    cz = omega[0] * hy - omega[1] * hx
    wdx = (tau_x - cx) / jx
    wdy = (tau_y - cy) / jy
    wdz = (tau_z - cz) / jz

    return (ax, ay, az), (wdx, wdy, wdz)


def _rotate_in_place(att, rx, ry, rz):
    """Right-multiply att (row-major 3x3) by the rotation exp([r]x), then re-orthonormalize."""
    angle2 = rx * rx + ry * ry + rz * rz
    angle = math.sqrt(angle2)
    if angle < 1e-9:
        s = 1.0 - angle2 / 6.0
        c = 0.5 - angle2 / 24.0
    else:
        s = math.sin(angle) / angle
        c = (1.0 - math.cos(angle)) / angle2

    # dR = I + s*K + c*K^2 with K = skew(r)
    d00 = 1.0 + c * (-rz * rz - ry * ry)
    d01 = -s * rz + c * rx * ry
    d02 = s * ry + c * rx * rz
    d10 = s * rz + c * rx * ry
    d11 = 1.0 + c * (-rx * rx - rz * rz)
    d12 = -s * rx + c * ry * rz
    d20 = -s * ry + c * rx * rz
    d21 = s * rx + c * ry * rz
    d22 = 1.0 + c * (-rx * rx - ry * ry)

    out = [0.0] * 9
    for i in range(3):
        a0, a1, a2 = att[3 * i], att[3 * i + 1], att[3 * i + 2]
        out[3 * i] = a0 * d00 + a1 * d10 + a2 * d20
        out[3 * i + 1] = a0 * d01 + a1 * d11 + a2 * d21
        out[3 * i + 2] = a0 * d02 + a1 * d12 + a2 * d22

    # Gram-Schmidt on the columns (body axes); third column from the cross
    # product keeps det = +1.
    n0 = math.sqrt(out[0] * out[0] + out[3] * out[3] + out[6] * out[6])
    c00, c10, c20 = out[0] / n0, out[3] / n0, out[6] / n0
    dot = c00 * out[1] + c10 * out[4] + c20 * out[7]
    c01 = out[1] - dot * c00
    c11 = out[4] - dot * c10
    c21 = out[7] - dot * c20
    n1 = math.sqrt(c01 * c01 + c11 * c11 + c21 * c21)
    c01, c11, c21 = c01 / n1, c11 / n1, c21 / n1
    c02 = c10 * c21 - c20 * c11
    c12 = c20 * c01 - c00 * c21
    c22 = c00 * c11 - c10 * c01

    att[0], att[1], att[2] = c00, c01, c02
    att[3], att[4], att[5] = c10, c11, c12
    att[6], att[7], att[8] = c20, c21, c22


def step_single(pos, vel, att, omega, rpm_cmd, params, dt, ground_effect):
    """One fixed-step integration of a single vehicle.

    Rates are advanced first from the current derivatives; position and
    attitude then advance on the average of the old and new rates, which is
    exact for constant forcing over the step.

    Inputs are 1-D float64 arrays (att row-major, length 9); mutated in place.
    """
    accel, alpha = derivatives(pos, vel, att, omega, rpm_cmd, params, ground_effect)

    v0x, v0y, v0z = vel[0], vel[1], vel[2]
    w0x, w0y, w0z = omega[0], omega[1], omega[2]

    vel[0] = v0x + accel[0] * dt
    vel[1] = v0y + accel[1] * dt
    vel[2] = v0z + accel[2] * dt
    omega[0] = w0x + alpha[0] * dt
    omega[1] = w0y + alpha[1] * dt
    omega[2] = w0z + alpha[2] * dt

    pos[0] += 0.5 * (v0x + vel[0]) * dt
    pos[1] += 0.5 * (v0y + vel[1]) * dt
    pos[2] += 0.5 * (v0z + vel[2]) * dt

    rx = 0.5 * (w0x + omega[0]) * dt
    ry = 0.5 * (w0y + omega[1]) * dt
    rz = 0.5 * (w0z + omega[2]) * dt
    _rotate_in_place(att, rx, ry, rz)


def step_batch(pos, vel, att, omega, rpm_cmd, params, dt, ground_effect):
    """Step all M vehicles. pos/vel/omega are (M,3), att is (M,9), rpm_cmd is (M,4)."""
    m = pos.shape[0]
    for i in range(m):
        step_single(pos[i], vel[i], att[i], omega[i], rpm_cmd[i], params, dt, ground_effect)


def derivatives_single(pos, vel, att, omega, rpm, params, ground_effect):
    """Array-returning wrapper around :func:`derivatives`."""
    accel, alpha = derivatives(pos, vel, att, omega, rpm, params, ground_effect)
    return np.array(accel), np.array(alpha)
