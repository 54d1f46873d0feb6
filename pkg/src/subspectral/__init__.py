"""Spectral measures of substitution dynamical systems and suspension flows.

Subpackages cover: substitution combinatorics, certified algebraic-integer
classification, matrix Riesz products, twisted Birkhoff sums and modulus-of-
continuity certificates, Diophantine products over algebraic integers,
suspension-flow renormalization, Bernoulli-convolution Fourier decay, and a
command-line front end.
"""

from __future__ import annotations

from . import errors
from .substitution import Substitution

__version__ = "0.1.0"

__all__ = ["Substitution", "errors", "__version__"]
