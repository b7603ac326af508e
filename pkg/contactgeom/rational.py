"""
Exact arithmetic helpers.

Scalars are fractions.Fraction throughout the exact path; matrices are
tuples of tuples of Fractions. Linear algebra that needs elimination
(inverse, nullspace, unique solves) is delegated to sympy and converted back.
"""
import logging
import re
from fractions import Fraction

import sympy

from .exceptions import Degenerate, DocumentError

logger = logging.getLogger(__name__)

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)

_RATIONAL_RE = re.compile(r'^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$')


class SingularSystem(ArithmeticError):
    """A linear system has no solution, or more than one."""


def parse_rational(text, path='$'):
    """
    Parse a rational string of the form "p" or "p/q".

    Args:
        text: the string (ints and Fractions are accepted unchanged)
        path: JSON path reported on failure

    Returns:
        Fraction in lowest terms
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise DocumentError(f'expected a rational string, got {type(text).__name__}', path)
    match = _RATIONAL_RE.match(text)
    if not match:
        raise DocumentError(f'malformed rational {text!r}', path)
    numerator, denominator = match.groups()
    if denominator is not None and int(denominator) == 0:
        raise DocumentError(f'zero denominator in {text!r}', path)
    return Fraction(int(numerator), int(denominator or 1))


def format_rational(value):
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f'{value.numerator}/{value.denominator}'


def as_rational(value):
    """Coerce int, Fraction, sympy Rational or rational string to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, sympy.Basic):
        value = sympy.nsimplify(value)
        if not value.is_Rational:
            raise Degenerate(f'{value} is not rational')
        return Fraction(int(value.p), int(value.q))
    if isinstance(value, float):
        raise TypeError('floats are not accepted on the exact path')
    return parse_rational(value)


def rationalize(x, max_denominator):
    """Continued-fraction rounding of a float to a bounded denominator."""
    return Fraction(x).limit_denominator(max_denominator)


# Matrices

def zeros(rows, cols=None):
    cols = rows if cols is None else cols
    return tuple(tuple(ZERO for _ in range(cols)) for _ in range(rows))


def identity(size):
    return tuple(tuple(ONE if i == j else ZERO for j in range(size)) for i in range(size))


def freeze(rows):
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def transpose(rows):
    return tuple(zip(*rows))


def matmul(a, b):
    bt = transpose(b)
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), ZERO) for col in bt) for row in a)


def matvec(a, v):
    return tuple(sum((x * y for x, y in zip(row, v)), ZERO) for row in a)


def dot(u, v):
    return sum((x * y for x, y in zip(u, v)), ZERO)


def bilinear(gram, u, v):
    """u^T G v."""
    total = ZERO
    for i, ui in enumerate(u):
        if ui:
            total += ui * dot(gram[i], v)
    return total


def to_sympy(rows):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in rows])


def from_sympy(matrix):
    return tuple(
        tuple(as_rational(matrix[i, j]) for j in range(matrix.cols))
        for i in range(matrix.rows)
    )


def rank(rows):
    if not rows:
        return 0
    return to_sympy(rows).rank()


def determinant(rows):
    if not rows:
        return ONE
    return as_rational(to_sympy(rows).det())


def inverse(rows):
    matrix = to_sympy(rows)
    if matrix.det() == 0:
        raise Degenerate('matrix is singular')
    return from_sympy(matrix.inv())


def nullspace(rows, width=None):
    """Basis of {x : rows x = 0} as tuples of Fractions."""
    if not rows:
        return [tuple(ONE if i == j else ZERO for j in range(width)) for i in range(width)]
    return [tuple(as_rational(x) for x in vec) for vec in to_sympy(rows).nullspace()]


def solve_unique(rows, rhs):
    """Solve rows x = rhs; raise SingularSystem unless the solution is unique."""
    a = to_sympy(rows)
    b = sympy.Matrix([sympy.Rational(x.numerator, x.denominator) for x in rhs])
    try:
        solution, params = a.gauss_jordan_solve(b)
    except ValueError as exc:
        raise SingularSystem(str(exc)) from exc
    if params.shape[0] > 0:
        raise SingularSystem(f'{params.shape[0]} free parameters')
    return tuple(as_rational(x) for x in solution)


def pfaffian(rows):
    """Pfaffian of an even-dimensional skew matrix by expansion on the first row."""
    size = len(rows)
    if size == 0:
        return ONE
    if size % 2:
        return ZERO
    total = ZERO
    for j in range(1, size):
        entry = rows[0][j]
        if not entry:
            continue
        keep = [k for k in range(size) if k not in (0, j)]
        minor = tuple(tuple(rows[a][b] for b in keep) for a in keep)
        sign = 1 if j % 2 else -1
        total += sign * entry * pfaffian(minor)
    return total
