"""Exact symbolic verification engine for deformed Heisenberg and W-current identities."""

from ._backend import BACKEND
from .scalars import Scalar, gamma_const, kappa, qbracket, substitute

__all__ = ["BACKEND", "Scalar", "gamma_const", "kappa", "qbracket", "substitute"]
__version__ = "0.1.0"
