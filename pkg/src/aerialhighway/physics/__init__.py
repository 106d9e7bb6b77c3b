from .backend import BACKEND, load_kernel
from .rigid_body import (
    GRAVITY,
    MIN_GROUND_CLEARANCE,
    ForceTorque,
    RigidBodyState,
    UavParams,
    body_torques,
    clamp_rpm,
    derivatives,
    ground_effect,
    min_separation,
    motor_forces,
    step,
    step_all,
)

__all__ = [
    "BACKEND", "GRAVITY", "MIN_GROUND_CLEARANCE", "ForceTorque",
    "RigidBodyState", "UavParams", "body_torques", "clamp_rpm", "derivatives",
    "ground_effect", "load_kernel", "min_separation", "motor_forces", "step",
    "step_all",
]
