"""
Configuration for the Kac polynomial / HN strata toolkit
Size guards and logging setup; every guard can be scaled through the environment
"""

import logging
import os
from fractions import Fraction

from errors import InputError

# Thm 2.5 hypothesis check runs only when |alpha|_1 is at most this
ROOT_CHECK_MAX_NORM = 12

# Maximum number of unknowns in the s0 commutant system
S0_MAX_UNKNOWNS = 400

# Finite-field oracle bounds
ORACLE_MAX_REPS = 10**7      # q ** dim_rep
ORACLE_MAX_GROUP = 10**6     # |GL_alpha(F_q)|
ORACLE_MAX_END = 10**5       # q ** (alpha . alpha)
ORACLE_PRIMES = (2, 3, 5)

# Environment overrides
GUARD_SCALE_ENV = "HNKAC_GUARD_SCALE"
LOG_LEVEL_ENV = "HNKAC_LOG_LEVEL"
LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def guard_scale():
    """
    Read the guard multiplier from the environment

    Returns:
        Positive Fraction, 1 when the variable is unset
    """
    raw = os.getenv(GUARD_SCALE_ENV, "1").strip()
    try:
        scale = Fraction(raw)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"{GUARD_SCALE_ENV} must be a rational number, got {raw!r}")
    if scale <= 0:
        raise InputError(f"{GUARD_SCALE_ENV} must be positive, got {raw!r}")
    return scale


def scaled(bound):
    """Apply the guard multiplier to a default bound (floor of the product)"""
    return int(bound * guard_scale())


def setup_logging(level=None):
    """Configure the root logger once; level falls back to HNKAC_LOG_LEVEL"""
    name = (level or os.getenv(LOG_LEVEL_ENV, "WARNING")).upper()
    numeric = logging.getLevelName(name)
    if not isinstance(numeric, int):
        raise InputError(f"Unknown log level: {name}")
    logging.basicConfig(level=numeric, format=LOG_FORMAT)
    logging.getLogger().setLevel(numeric)
