"""Polynomial backend selection.

The fraction layer in :mod:`walg.scalars` only needs a small set of
primitives on integer multivariate polynomials.  Two implementations are
provided: FLINT through python-flint (compiled) and sympy's sparse ring
(pure Python).  ``WALG_BACKEND`` picks one explicitly; otherwise FLINT is
used when importable.
"""

from __future__ import annotations

import os

VARIABLES: tuple[str, ...] = (
    ("q1", "q2", "m", "u", "v")
    + tuple(f"a{i}" for i in range(1, 5))
    + tuple(f"b{i}" for i in range(1, 5))
    + tuple(f"z{i}" for i in range(1, 7))
    + ("y", "t")
)


def _load(name: str):
    if name == "flint":
        from .flint_ring import FlintRing

        return FlintRing(VARIABLES)
    if name == "python":
        from .python_ring import PythonRing

        return PythonRing(VARIABLES)
    raise ValueError(f"unknown backend {name!r} (expected 'flint' or 'python')")


def load_backend(name: str | None = None):
    if name is None:
        name = os.environ.get("WALG_BACKEND", "").strip().lower() or None
    if name is not None:
        return _load(name)
    try:
        return _load("flint")
    except ImportError:
        return _load("python")


BACKEND = load_backend()
