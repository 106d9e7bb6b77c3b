import math

import numpy as np
import pytest

from aerialhighway.faults import SimulationFault
from aerialhighway.physics import (
    GRAVITY,
    RigidBodyState,
    UavParams,
    body_torques,
    derivatives,
    ground_effect,
    load_kernel,
    min_separation,
    motor_forces,
    step,
    step_all,
)

P = UavParams()
DT = 0.05


def hover_state(z=100.0):
    return RigidBodyState.at_rest((0.0, 0.0, z), rpm=P.hover_rpm())


# ---------------------------------------------------------------- motor forces

def test_motor_forces_zero_input():
    f, m = motor_forces(np.zeros(4), P)
    assert np.all(f == 0) and np.all(m == 0)


def test_motor_forces_hover_total_weight():
    ph = math.sqrt(P.mass_kg * GRAVITY / (4 * P.thrust_coeff))
    f, _ = motor_forces(np.full(4, ph), P)
    assert f.sum() == pytest.approx(1.5 * 9.81, rel=1e-12)
    assert f.sum() == pytest.approx(14.715, rel=1e-12)


def test_motor_forces_quadratic_scaling():
    f1, _ = motor_forces([5000, 0, 0, 0], P)
    f2, _ = motor_forces([10000, 0, 0, 0], P)
    assert f2[0] == pytest.approx(4 * f1[0], rel=1e-12)


def test_motor_forces_clamps_and_warns(caplog):
    with caplog.at_level("WARNING"):
        f, _ = motor_forces([P.rpm_max * 2, 0, 0, 0], P)
    assert f[0] == pytest.approx(P.thrust_coeff * P.rpm_max**2)
    assert any("clamp" in r.message for r in caplog.records)


# ---------------------------------------------------------------- body torques

def test_body_torques_symmetric_hover():
    tau = body_torques(np.ones(4), np.array([1, -1, 1, -1.0]) * 0 + 1, P)
    # equal thrusts cancel roll/pitch; alternating-sign moment sum cancels yaw
    assert np.allclose(tau[:2], 0)
    assert tau[2] == pytest.approx(0)


def test_body_torques_single_rotor():
    params = UavParams(arm_length_m=math.sqrt(2.0))
    tau = body_torques([1, 0, 0, 0], [0, 0, 0, 0], params)
    assert np.allclose(tau, [1.0, 1.0, 0.0])


def test_body_torques_pure_yaw_moments_cancel():
    tau = body_torques(np.zeros(4), np.full(4, 0.3), P)
    assert tau[2] == pytest.approx(0.0)


# --------------------------------------------------------------- ground effect

def test_ground_effect_far_field_negligible():
    ph = P.hover_rpm()
    g = ground_effect(np.full(4, ph), np.full(4, 1000 * P.prop_radius_m), P)
    f, _ = motor_forces(np.full(4, ph), P)
    assert np.all(g / f < 1e-6)


def test_ground_effect_quarter_radius_equals_kg_times_thrust():
    ph = P.hover_rpm()
    g = ground_effect(np.full(4, ph), np.full(4, P.prop_radius_m / 4), P)
    f, _ = motor_forces(np.full(4, ph), P)
    assert np.allclose(g, P.ground_effect_coeff * f, rtol=1e-12)


def test_ground_effect_zero_rpm():
    assert np.all(ground_effect(np.zeros(4), np.ones(4), P) == 0)


def test_ground_effect_monotone_in_altitude():
    ph = P.hover_rpm()
    alts = np.linspace(0.5, 50, 40)
    vals = [ground_effect(np.full(4, ph), np.full(4, h), P)[0] for h in alts]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_ground_effect_altitude_floor():
    g_low = ground_effect([1000] * 4, [1e-6] * 4, P)
    g_floor = ground_effect([1000] * 4, [0.01] * 4, P)
    assert np.allclose(g_low, g_floor)


# ----------------------------------------------------------------- derivatives

def test_derivatives_hover_equilibrium():
    acc, alpha = derivatives(hover_state(), np.full(4, P.hover_rpm()), P,
                             with_ground_effect=False)
    assert np.linalg.norm(acc) < 1e-9
    assert np.linalg.norm(alpha) < 1e-9


def test_derivatives_free_fall():
    acc, _ = derivatives(RigidBodyState.at_rest((0, 0, 50)), np.zeros(4), P)
    assert np.allclose(acc, [0, 0, -GRAVITY])


def test_derivatives_drag_decelerates_forward_flight():
    s = hover_state()
    v = 4.0
    s.velocity_mps = np.array([v, 0.0, 0.0])
    acc, _ = derivatives(s, np.full(4, P.hover_rpm()), P, with_ground_effect=False)
    assert acc[0] == pytest.approx(-P.drag_diag[0] * v / P.mass_kg, rel=1e-12)
    assert np.allclose(acc[1:], 0)


def test_derivatives_ground_effect_adds_lift_near_ground():
    low = RigidBodyState.at_rest((0, 0, 0.5), rpm=P.hover_rpm())
    acc_on, _ = derivatives(low, np.full(4, P.hover_rpm()), P, with_ground_effect=True)
    acc_off, _ = derivatives(low, np.full(4, P.hover_rpm()), P, with_ground_effect=False)
    assert acc_on[2] > acc_off[2]


def test_derivatives_nonfinite_faults():
    s = hover_state()
    s.velocity_mps = np.array([np.nan, 0, 0])
    with pytest.raises(SimulationFault):
        derivatives(s, np.full(4, P.hover_rpm()), P)


# ------------------------------------------------------------------ integrator

def test_step_hover_fixed_point():
    s = hover_state()
    nxt = step(s, np.full(4, P.hover_rpm()), DT, P, with_ground_effect=False)
    assert np.linalg.norm(nxt.position_m - s.position_m) < 1e-9
    assert np.linalg.norm(nxt.velocity_mps) < 1e-9
    assert np.linalg.norm(nxt.attitude - s.attitude) < 1e-9


def test_step_free_fall_one_second():
    # closed form: drop = g t^2 / 2 = 4.905 m (drag forced to ~0)
    params = UavParams(drag_diag=(1e-12, 1e-12, 1e-12))
    s = RigidBodyState.at_rest((0, 0, 100))
    for _ in range(20):
        s = step(s, np.zeros(4), DT, params)
    drop = 100 - s.position_m[2]
    assert abs(drop - 0.5 * GRAVITY * 1.0**2) / (0.5 * GRAVITY) < 0.02


def test_step_pure_yaw_spin_closed_form():
    # rpm pattern (p1, p2, p1, p2) nulls roll/pitch torque and balances weight,
    # leaving a constant yaw torque: omega_z grows linearly, others stay zero.
    ph = P.hover_rpm()
    p1, p2 = 1.02 * ph, math.sqrt(2 * ph**2 - (1.02 * ph) ** 2)
    rpm = np.array([p1, p2, p1, p2])
    tau_z = P.torque_coeff * 2 * (p1**2 - p2**2)
    s = hover_state()
    n = 40
    for _ in range(n):
        s = step(s, rpm, DT, P, with_ground_effect=False)
    expected_wz = tau_z / P.inertia_diag[2] * n * DT
    assert s.angular_rate_radps[2] == pytest.approx(expected_wz, rel=1e-9)
    assert abs(s.angular_rate_radps[0]) < 1e-12
    assert abs(s.angular_rate_radps[1]) < 1e-12
    # yaw angle follows the trapezoidal integral of the linear ramp
    expected_yaw = 0.5 * tau_z / P.inertia_diag[2] * (n * DT) ** 2
    assert s.euler_rpy()[2] == pytest.approx(expected_yaw, rel=1e-6)


def test_step_energy_conservation_ballistic():
    # zero thrust, zero drag: kinetic + potential energy conserved over 100 steps
    params = UavParams(drag_diag=(1e-15, 1e-15, 1e-15))
    s = RigidBodyState.at_rest((0, 0, 1000))
    s.velocity_mps = np.array([3.0, -1.0, 2.0])

    def energy(st):
        return (0.5 * params.mass_kg * st.speed() ** 2
                + params.mass_kg * GRAVITY * st.position_m[2])

    e0 = energy(s)
    for _ in range(100):
        s = step(s, np.zeros(4), DT, params)
    assert abs(energy(s) - e0) / e0 < 0.005


def test_step_attitude_orthonormal_under_random_commands():
    rng = np.random.default_rng(7)
    s = hover_state()
    for _ in range(500):
        rpm = rng.uniform(0.9, 1.1, size=4) * P.hover_rpm()
        s = step(s, rpm, DT, P, with_ground_effect=False)
        err = np.abs(s.attitude.T @ s.attitude - np.eye(3)).max()
        assert err < 1e-6
        assert np.linalg.det(s.attitude) == pytest.approx(1.0, abs=1e-9)


def test_step_thrust_monotone_in_uniform_rpm():
    s = hover_state()
    azs = []
    for scale in (0.8, 0.9, 1.0, 1.1, 1.2):
        acc, _ = derivatives(s, np.full(4, scale * P.hover_rpm()), P,
                             with_ground_effect=False)
        azs.append(acc[2])
    assert all(a < b for a, b in zip(azs, azs[1:]))


def test_step_clamps_command():
    s = hover_state()
    nxt = step(s, np.full(4, P.rpm_max * 10), DT, P)
    assert np.all(nxt.rotor_rpm == P.rpm_max)


def test_step_all_matches_single_steps():
    rng = np.random.default_rng(3)
    states = []
    cmds = []
    for i in range(4):
        st = RigidBodyState.at_rest(rng.uniform(0, 100, size=3) + [0, 0, 50])
        st.velocity_mps = rng.normal(size=3)
        states.append(st)
        cmds.append(rng.uniform(0.4, 1.0, size=4) * P.rpm_max)
    batched = step_all(states, cmds, DT, P)
    for st, cmd, out in zip(states, cmds, batched):
        ref = step(st, cmd, DT, P)
        assert np.array_equal(out.position_m, ref.position_m)
        assert np.array_equal(out.velocity_mps, ref.velocity_mps)
        assert np.array_equal(out.attitude, ref.attitude)


# -------------------------------------------------------------- min separation

def test_min_separation_three_four_five():
    a = RigidBodyState.at_rest((0, 0, 100))
    b = RigidBodyState.at_rest((3, 4, 100))
    d, pair = min_separation([a, b])
    assert d == pytest.approx(5.0)
    assert pair == (0, 1)


def test_min_separation_identical_positions():
    a = RigidBodyState.at_rest((10, 10, 50))
    d, _ = min_separation([a, a.copy()])
    assert d == 0.0


def test_min_separation_single_uav_sentinel():
    d, pair = min_separation([RigidBodyState.at_rest((0, 0, 1))])
    assert math.isinf(d) and pair is None


def test_min_separation_matches_bruteforce():
    rng = np.random.default_rng(11)
    states = [RigidBodyState.at_rest(rng.uniform(0, 200, size=3)) for _ in range(6)]
    d, pair = min_separation(states)
    best = min(
        (np.linalg.norm(states[i].position_m - states[j].position_m), (i, j))
        for i in range(6) for j in range(i + 1, 6)
    )
    assert d == pytest.approx(best[0])
    assert pair == best[1]


# ------------------------------------------------------------resolve backends

def test_kernel_backends_agree():
    try:
        compiled = load_kernel("compiled")
    except ImportError:
        pytest.skip("compiled kernel not built")
    pure = load_kernel("pure-python")

    rng = np.random.default_rng(42)
    packed = P.packed()
    for _ in range(5):
        pos = rng.uniform(0, 500, size=3)
        pos[2] = rng.uniform(1, 300)
        vel = rng.normal(scale=3, size=3)
        omega = rng.normal(scale=0.5, size=3)
        att = np.eye(3).reshape(9).copy()
        state_c = [pos.copy(), vel.copy(), att.copy(), omega.copy()]
        state_p = [pos.copy(), vel.copy(), att.copy(), omega.copy()]
        for _ in range(50):
            cmd = rng.uniform(0.3, 1.0, size=4) * P.rpm_max
            compiled.step_single(*state_c, cmd, packed, DT, 1)
            pure.step_single(*state_p, cmd, packed, DT, 1)
        for c_arr, p_arr in zip(state_c, state_p):
            np.testing.assert_allclose(c_arr, p_arr, rtol=1e-12, atol=1e-12)
