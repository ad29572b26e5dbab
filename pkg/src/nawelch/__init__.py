"""Non-Archimedean Welch bounds over Q(t), with classical bounds for comparison."""

from .linalg import Config, DiagCertificate
from .scalar import INF, ONE, T, ZERO, Scalar, parse_scalar, valuation
from .welch import (
    WelchReport,
    check_first_order,
    check_general,
    check_higher_order,
    equiangular_check,
    zauner_check,
)

__version__ = "0.1.0"
