"""Exact fields, sparse homogeneous polynomials and exact linear algebra."""

from .fields import (
    DEFAULT_DEPTH_CAP,
    I,
    QI_TOWER,
    Alg,
    ExtensionOverflow,
    FieldError,
    Fp,
    Tower,
    conjugate,
    field_tag,
    format_scalar,
    inv,
    is_exact,
    is_zero,
    power,
    qi,
    re_im,
    sqrt_adjoin,
    sqrt_in,
    to_complex,
    tower_of,
)
from .linalg import (
    Echelon,
    InconsistentSystem,
    MatrixExact,
    determinant,
    identity,
    kernel,
    matmul,
    matvec,
    rank,
    rank_kernel_solve,
    solve,
    transpose,
)
from .poly import MultiPoly, PolyError, dim_forms, linear_power, monomial_index, monomials, multinomial, poly_sum

__all__ = [name for name in dir() if not name.startswith("_")]
