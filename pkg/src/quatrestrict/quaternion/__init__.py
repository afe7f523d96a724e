"""Definite quaternion algebras over Q ramified at one odd prime: orders, ideal classes, Brandt matrices."""
from __future__ import annotations

from .algebra import GlobalAlgebraDesc, algebra_for_prime
from .lattice import Lattice
from .orders import OrderLattice, maximal_order, prime_ideal_above_p, special_order
from .classes import ClassSet, right_ideal_classes
from .brandt import BrandtOperator, brandt_matrix, eisenstein_dimension, cusp_dimension

__all__ = [
    "GlobalAlgebraDesc",
    "algebra_for_prime",
    "Lattice",
    "OrderLattice",
    "maximal_order",
    "prime_ideal_above_p",
    "special_order",
    "ClassSet",
    "right_ideal_classes",
    "BrandtOperator",
    "brandt_matrix",
    "eisenstein_dimension",
    "cusp_dimension",
]
