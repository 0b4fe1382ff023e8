"""Rotation properties of 2x2 integer dilation matrices."""

from .matrix2 import (
    AngleClass,
    AngleKind,
    GateError,
    IntMatrix2,
    angle_table,
    classify_angle,
    enumerate_matrices,
    is_commensurable,
    is_rotational,
    trace_det,
)
from .quadform import QuadraticForm, check_invariance, dual_form, invariant_form, rationalize_form
from .refine import Mask, orbit_angles, phi_hat, verify_two_angle
from .similarity import Decomposition, decompose

__version__ = "0.1.0"
