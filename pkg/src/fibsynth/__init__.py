"""Fibonacci anyon compiler for single-qubit unitaries.

The usual entry points are :func:`compile_rz`, :func:`compile_rzx` and
:func:`compile_unitary`; pass an :class:`OracleDB` as ``db`` to shorten the
resulting braids.
"""

from .approx import CompileResult, TrialLimitExceeded, compile_rz, compile_rzx, compile_unitary, parse_angle
from .braid import BraidWord, format_braid, parse_braid
from .circuit import distance, evaluate_braid, peephole_optimize, rz, rzx
from .exact import ExactUnitary, FTWord, exact_synthesize, ft_to_braid
from .numtheory import solve_norm_equation
from .oracle import OracleDB, build_database, load
from .rings import ZOmega, ZTau

__version__ = "0.1.0"

__all__ = [
    "BraidWord",
    "CompileResult",
    "ExactUnitary",
    "FTWord",
    "OracleDB",
    "TrialLimitExceeded",
    "ZOmega",
    "ZTau",
    "build_database",
    "compile_rz",
    "compile_rzx",
    "compile_unitary",
    "distance",
    "evaluate_braid",
    "exact_synthesize",
    "format_braid",
    "ft_to_braid",
    "load",
    "parse_angle",
    "parse_braid",
    "peephole_optimize",
    "rz",
    "rzx",
    "solve_norm_equation",
]
