# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled rigid-body step kernel.

Semantics mirror ``_kernels_py.py`` operation-for-operation; that module is
the readable reference. Parameter packing:

    params = [mass, Jx, Jy, Jz, arm_length, k_F, k_T, Dx, Dy, Dz, k_G, r_P]
"""

from libc.math cimport sqrt, sin, cos

import numpy as np

GRAVITY = 9.81

cdef double C_GRAVITY = 9.81
cdef double C_MIN_CLEARANCE = 0.01

BACKEND = "compiled"


cdef void _derivs(const double* pos, const double* vel, const double* att,
                  const double* omega, const double* rpm, const double* p,
                  int ground_effect, double* accel, double* alpha) nogil:
    cdef double mass = p[0]
    cdef double jx = p[1], jy = p[2], jz = p[3]
    cdef double arm = p[4]
    cdef double kf = p[5], kt = p[6]
    cdef double dx = p[7], dy = p[8], dz = p[9]
    cdef double kg = p[10], rp = p[11]

    cdef double thrust_total = 0.0
    cdef double yaw_net = 0.0
    cdef double p2, f, m, h, ratio
    cdef int k
    for k in range(4):
        p2 = rpm[k] * rpm[k]
        f = kf * p2
        if ground_effect:
            h = pos[2] if pos[2] > C_MIN_CLEARANCE else C_MIN_CLEARANCE
            ratio = rp / (4.0 * h)
            f += kg * kf * ratio * ratio * p2
        thrust_total += f
        m = kt * p2
        if k % 2 == 0:
            yaw_net += m
        else:
            yaw_net -= m

    cdef double f1 = kf * rpm[0] * rpm[0]
    cdef double f2 = kf * rpm[1] * rpm[1]
    cdef double f3 = kf * rpm[2] * rpm[2]
    cdef double f4 = kf * rpm[3] * rpm[3]
    cdef double lever = arm / sqrt(2.0)
    cdef double tau_x = lever * (f1 - f2 - f3 + f4)
    cdef double tau_y = lever * (f1 + f2 - f3 - f4)
    cdef double tau_z = yaw_net

    accel[0] = (att[2] * thrust_total - dx * vel[0]) / mass
    accel[1] = (att[5] * thrust_total - dy * vel[1]) / mass
    accel[2] = (att[8] * thrust_total - mass * C_GRAVITY - dz * vel[2]) / mass

    cdef double hx = jx * omega[0]
    cdef double hy = jy * omega[1]
    cdef double hz = jz * omega[2]
    cdef double cx = omega[1] * hz - omega[2] * hy
    cdef double cy = omega[2] * hx - omega[0] * hz
    cdef double cz = omega[0] * hy - omega[1] * hx
    alpha[0] = (tau_x - cx) / jx
    alpha[1] = (tau_y - cy) / jy
    alpha[2] = (tau_z - cz) / jz


cdef void _rotate_in_place(double* att, double rx, double ry, double rz) nogil:
    cdef double angle2 = rx * rx + ry * ry + rz * rz
    cdef double angle = sqrt(angle2)
    cdef double s, c
    if angle < 1e-9:
        s = 1.0 - angle2 / 6.0
        c = 0.5 - angle2 / 24.0
    else:
        s = sin(angle) / angle
        c = (1.0 - cos(angle)) / angle2

    cdef double d00 = 1.0 + c * (-rz * rz - ry * ry)
    cdef double d01 = -s * rz + c * rx * ry
    cdef double d02 = s * ry + c * rx * rz
    cdef double d10 = s * rz + c * rx * ry
    cdef double d11 = 1.0 + c * (-rx * rx - rz * rz)
    cdef double d12 = -s * rx + c * ry * rz
    cdef double d20 = -s * ry + c * rx * rz
    cdef double d21 = s * rx + c * ry * rz
    cdef double d22 = 1.0 + c * (-rx * rx - ry * ry)

    cdef double out[9]
    cdef double a0, a1, a2
    cdef int i
    for i in range(3):
        a0 = att[3 * i]
        a1 = att[3 * i + 1]
        a2 = att[3 * i + 2]
        out[3 * i] = a0 * d00 + a1 * d10 + a2 * d20
        out[3 * i + 1] = a0 * d01 + a1 * d11 + a2 * d21
        out[3 * i + 2] = a0 * d02 + a1 * d12 + a2 * d22

    cdef double n0 = sqrt(out[0] * out[0] + out[3] * out[3] + out[6] * out[6])
    cdef double c00 = out[0] / n0
    cdef double c10 = out[3] / n0
    cdef double c20 = out[6] / n0
    cdef double dot = c00 * out[1] + c10 * out[4] + c20 * out[7]
    cdef double c01 = out[1] - dot * c00
    cdef double c11 = out[4] - dot * c10
    cdef double c21 = out[7] - dot * c20
    cdef double n1 = sqrt(c01 * c01 + c11 * c11 + c21 * c21)
    c01 /= n1
    c11 /= n1
    c21 /= n1
    cdef double c02 = c10 * c21 - c20 * c11
    cdef double c12 = c20 * c01 - c00 * c21
    cdef double c22 = c00 * c11 - c10 * c01

    att[0] = c00; att[1] = c01; att[2] = c02
    att[3] = c10; att[4] = c11; att[5] = c12
    att[6] = c20; att[7] = c21; att[8] = c22


cdef void _step_one(double* pos, double* vel, double* att, double* omega,
                    const double* rpm_cmd, const double* p, double dt,
                    int ground_effect) nogil:
    cdef double accel[3]
    cdef double alpha[3]
    _derivs(pos, vel, att, omega, rpm_cmd, p, ground_effect, accel, alpha)

    cdef double v0x = vel[0], v0y = vel[1], v0z = vel[2]
    cdef double w0x = omega[0], w0y = omega[1], w0z = omega[2]

    vel[0] = v0x + accel[0] * dt
    vel[1] = v0y + accel[1] * dt
    vel[2] = v0z + accel[2] * dt
    omega[0] = w0x + alpha[0] * dt
    omega[1] = w0y + alpha[1] * dt
    omega[2] = w0z + alpha[2] * dt

    pos[0] += 0.5 * (v0x + vel[0]) * dt
    pos[1] += 0.5 * (v0y + vel[1]) * dt
    pos[2] += 0.5 * (v0z + vel[2]) * dt

    _rotate_in_place(att,
                     0.5 * (w0x + omega[0]) * dt,
                     0.5 * (w0y + omega[1]) * dt,
                     0.5 * (w0z + omega[2]) * dt)


def step_single(double[::1] pos, double[::1] vel, double[::1] att,
                double[::1] omega, double[::1] rpm_cmd, double[::1] params,
                double dt, int ground_effect):
    _step_one(&pos[0], &vel[0], &att[0], &omega[0], &rpm_cmd[0], &params[0],
              dt, ground_effect)


def step_batch(double[:, ::1] pos, double[:, ::1] vel, double[:, ::1] att,
               double[:, ::1] omega, double[:, ::1] rpm_cmd, double[::1] params,
               double dt, int ground_effect):
    cdef Py_ssize_t m = pos.shape[0]
    cdef Py_ssize_t i
    with nogil:
        for i in range(m):
            _step_one(&pos[i, 0], &vel[i, 0], &att[i, 0], &omega[i, 0],
                      &rpm_cmd[i, 0], &params[0], dt, ground_effect)


def derivatives_single(double[::1] pos, double[::1] vel, double[::1] att,
                       double[::1] omega, double[::1] rpm, double[::1] params,
                       int ground_effect):
    cdef double accel[3]
    cdef double alpha[3]
    _derivs(&pos[0], &vel[0], &att[0], &omega[0], &rpm[0], &params[0],
            ground_effect, accel, alpha)
    return (np.array([accel[0], accel[1], accel[2]]),
            np.array([alpha[0], alpha[1], alpha[2]]))
