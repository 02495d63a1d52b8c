"""Exact scalars, linear algebra and polynomial functions on a representation."""

from .field import NumberField, QQ, Scalar, minimal_polynomial, sign
from .linalg import RowSpace, kernel, left_kernel, rank, row_space, rref

__all__ = [
    "NumberField",
    "QQ",
    "Scalar",
    "minimal_polynomial",
    "sign",
    "RowSpace",
    "kernel",
    "left_kernel",
    "rank",
    "row_space",
    "rref",
]
