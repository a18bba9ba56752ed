"""Exact arithmetic for totally definite quaternion orders over real quadratic
fields, their Moebius/hyperbolic geometry and the cusp torus bundles."""

from .quadfield import QQ, FieldElement, QuadraticField, fundamental_unit
from .quatalg import INFINITY, FloatQuaternion, Quaternion, quat

__version__ = "0.1.0"

__all__ = [
    "QQ",
    "FieldElement",
    "QuadraticField",
    "fundamental_unit",
    "INFINITY",
    "FloatQuaternion",
    "Quaternion",
    "quat",
]
