"""
Left-invariant contact structures on Lie algebras.

A ContactModel bundles structure constants, a contact form alpha and an
adapted frame A_1..A_2n, xi (distribution basis first, Reeb field last).
For left-invariant data d alpha(X, Y) = -alpha([X, Y]).
"""
import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

from .exceptions import (BadParameter, Degenerate, InvalidFrame, NoReeb,
                         NotContact, NotLieAlgebra)
from .rational import (ONE, ZERO, SingularSystem, as_rational, bilinear,
                       determinant, dot, freeze, inverse, matvec, nullspace,
                       pfaffian, solve_unique, transpose)

logger = logging.getLogger(__name__)

# Parameters that appear in denominators of the worked examples
NONZERO_PARAMETERS = frozenset({'s'})


def _vector_add(u, v, scale=ONE):
    return tuple(a + scale * b for a, b in zip(u, v))


@dataclass(frozen=True)
class LieAlgebra:
    basis_names: tuple
    structure_constants: tuple  # c[i][j][k]: [b_i, b_j] = sum_k c[i][j][k] b_k

    def __post_init__(self):
        dim = len(self.basis_names)
        if len(set(self.basis_names)) != dim:
            raise NotLieAlgebra('basis names must be distinct')
        c = self.structure_constants
        if len(c) != dim or any(len(row) != dim or any(len(v) != dim for v in row) for row in c):
            raise NotLieAlgebra(f'structure constants must have shape {dim}x{dim}x{dim}')
        for i in range(dim):
            for j in range(dim):
                for k in range(dim):
                    if c[i][j][k] != -c[j][i][k]:
                        raise NotLieAlgebra(
                            f'antisymmetry fails at ({self.basis_names[i]}, {self.basis_names[j]})',
                        )

    @classmethod
    def from_brackets(cls, basis_names, brackets):
        """
        Build an algebra from a sparse bracket table.

        Args:
            basis_names: sequence of basis identifiers
            brackets: iterable of (x, y, {name: value}) meaning [x, y] = sum value*name

        Returns:
            LieAlgebra with antisymmetric completion applied
        """
        names = tuple(basis_names)
        index = {name: i for i, name in enumerate(names)}
        dim = len(names)
        c = [[[ZERO] * dim for _ in range(dim)] for _ in range(dim)]
        seen = {}
        for x, y, result in brackets:
            i, j = index[x], index[y]
            vec = [ZERO] * dim
            for name, value in result.items():
                vec[index[name]] += as_rational(value)
            if i == j:
                if any(vec):
                    raise NotLieAlgebra(f'[{x}, {x}] must vanish')
                continue
            key = (min(i, j), max(i, j))
            signed = tuple(vec) if i < j else tuple(-v for v in vec)
            if key in seen and seen[key] != signed:
                raise NotLieAlgebra(f'[{x}, {y}] is listed twice with different values')
            seen[key] = signed
            for k in range(dim):
                c[i][j][k] = vec[k]
                c[j][i][k] = -vec[k]
        return cls(names, tuple(tuple(tuple(row) for row in plane) for plane in c))

    @property
    def dimension(self):
        return len(self.basis_names)

    def index(self, name):
        try:
            return self.basis_names.index(name)
        except ValueError:
            raise KeyError(f'unknown basis vector {name!r}') from None

    def vector(self, name):
        i = self.index(name)
        return tuple(ONE if k == i else ZERO for k in range(self.dimension))

    def coordinates(self, x):
        if isinstance(x, str):
            return self.vector(x)
        vec = tuple(as_rational(v) for v in x)
        if len(vec) != self.dimension:
            raise ValueError(f'expected {self.dimension} coordinates, got {len(vec)}')
        return vec

    def bracket(self, x, y):
        x, y = self.coordinates(x), self.coordinates(y)
        out = [ZERO] * self.dimension
        c = self.structure_constants
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                coeff = xi * yj
                for k, ck in enumerate(c[i][j]):
                    if ck:
                        out[k] += coeff * ck
        return tuple(out)

    def ad(self, x):
        """Matrix of ad_x in the column convention: column j is [x, b_j]."""
        x = self.coordinates(x)
        cols = [self.bracket(x, self.vector(name)) for name in self.basis_names]
        return transpose(cols)


@dataclass(frozen=True)
class JacobiViolation:
    indices: tuple
    cyclic_sum: tuple


def check_jacobi(algebra):
    """Return every basis triple whose cyclic Jacobi sum is nonzero."""
    violations = []
    names = algebra.basis_names
    for i, j, k in combinations(range(algebra.dimension), 3):
        a, b, c = (algebra.vector(names[t]) for t in (i, j, k))
        total = algebra.bracket(algebra.bracket(a, b), c)
        total = _vector_add(total, algebra.bracket(algebra.bracket(b, c), a))
        total = _vector_add(total, algebra.bracket(algebra.bracket(c, a), b))
        if any(total):
            violations.append(JacobiViolation((i, j, k), total))
    return violations


def unimodular_trace(algebra, x):
    """Trace of ad_x; the algebra is unimodular iff this vanishes on a basis."""
    ad = algebra.ad(x)
    return sum((ad[i][i] for i in range(algebra.dimension)), ZERO)


@dataclass(frozen=True)
class ContactForm:
    coefficients: tuple

    def __call__(self, v):
        return dot(self.coefficients, v)


@dataclass(frozen=True)
class AdaptedFrame:
    names: tuple
    change_of_basis: tuple  # columns are frame vectors in algebra coordinates
    inverse: tuple

    def to_frame(self, v):
        return matvec(self.inverse, v)

    def to_algebra(self, v):
        return matvec(self.change_of_basis, v)

    def column(self, i):
        return tuple(row[i] for row in self.change_of_basis)


@dataclass(frozen=True)
class SymplecticBasis:
    vectors: tuple  # e_1..e_n, e_{n+1}..e_{2n} in input coordinates
    transform: tuple  # columns are the vectors


def symplectic_basis(omega):
    """
    Symplectic Gram-Schmidt over the rationals.

    Each pair (e, f) is taken from the first remaining vector and its first
    omega-partner, ordered so that omega(e, f) > 0 before scaling f.

    Raises:
        Degenerate: omega has rank below its size
    """
    omega = freeze(omega)
    size = len(omega)
    if size % 2 or any(omega[i][j] != -omega[j][i] for i in range(size) for j in range(size)):
        raise Degenerate('omega must be an even-dimensional skew matrix')
    form = lambda u, v: bilinear(omega, u, v)  # noqa: E731
    remaining = [tuple(ONE if k == i else ZERO for k in range(size)) for i in range(size)]
    es, fs = [], []
    while remaining:
        u = remaining.pop(0)
        if not any(u):
            continue
        partner = next((i for i, v in enumerate(remaining) if form(u, v)), None)
        if partner is None:
            raise Degenerate('omega is degenerate')
        v = remaining.pop(partner)
        if form(u, v) > 0:
            e, f = u, v
        else:
            e, f = v, u
        pairing = form(e, f)
        f = tuple(x / pairing for x in f)
        es.append(e)
        fs.append(f)
        projected = []
        for w in remaining:
            w = _vector_add(w, e, -form(w, f))
            w = _vector_add(w, f, form(w, e))
            projected.append(w)
        remaining = projected
    if 2 * len(es) != size:
        raise Degenerate('omega is degenerate')
    vectors = tuple(es + fs)
    return SymplecticBasis(vectors, transpose(vectors))


@dataclass(frozen=True)
class ContactModel:
    name: str
    algebra: LieAlgebra
    alpha: ContactForm
    frame: AdaptedFrame
    omega: tuple
    constants: tuple  # frame structure constants c'[i][j][k]
    reeb: tuple  # xi in algebra coordinates
    parameters: tuple = field(default=())  # (name, Fraction) pairs

    @property
    def dimension(self):
        return self.algebra.dimension

    @property
    def rank(self):
        """Dimension 2n of the contact distribution."""
        return self.dimension - 1

    @property
    def n(self):
        return self.rank // 2

    @property
    def xi(self):
        """Frame index of the Reeb field."""
        return self.rank

    @property
    def parameter_map(self):
        return dict(self.parameters)

    @cached_property
    def symplectic(self):
        return symplectic_basis(self.omega)

    @cached_property
    def omega_inverse(self):
        return inverse(self.omega)

    def pfaffian(self):
        return pfaffian(self.omega)

    def resolve(self, name):
        """Frame coordinates of a frame name or an algebra basis name."""
        if name in self.frame.names:
            i = self.frame.names.index(name)
            return tuple(ONE if k == i else ZERO for k in range(self.dimension))
        return self.frame.to_frame(self.algebra.vector(name))

    def coordinates(self, x, frame='adapted'):
        if frame not in ('adapted', 'original'):
            raise ValueError(f'unknown frame {frame!r}')
        if isinstance(x, str):
            if frame == 'adapted':
                return self.resolve(x)
            return self.algebra.vector(x)
        vec = tuple(as_rational(v) for v in x)
        if len(vec) != self.dimension:
            raise ValueError(f'expected {self.dimension} coordinates, got {len(vec)}')
        return vec

    def frame_bracket(self, x, y):
        out = [ZERO] * self.dimension
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                for k, ck in enumerate(self.constants[i][j]):
                    if ck:
                        out[k] += xi * yj * ck
        return tuple(out)

    def ad_reeb(self):
        """L[k][j] = coefficient of A_k in [xi, A_j] for distribution indices."""
        d = self.rank
        return tuple(tuple(self.constants[self.xi][j][k] for j in range(d)) for k in range(d))


def bracket(model, x, y, frame='adapted'):
    """Bracket of two vectors given as names or coordinates in the chosen frame."""
    x, y = model.coordinates(x, frame), model.coordinates(y, frame)
    if frame == 'original':
        return model.algebra.bracket(x, y)
    return model.frame_bracket(x, y)


def d_alpha(model, x, y, frame='adapted'):
    """d alpha(x, y) = -alpha([x, y])."""
    value = bracket(model, x, y, frame)
    if frame == 'original':
        return -model.alpha(value)
    return -value[model.xi]


def _check_parameters(parameters):
    checked = []
    for name, value in (parameters or {}).items():
        value = as_rational(value)
        if name in NONZERO_PARAMETERS and value == 0:
            raise BadParameter(f'parameter {name} must be nonzero')
        checked.append((name, value))
    return tuple(checked)


def build_model(algebra, alpha, parameters=None, distribution=None, frame_names=None, name='model'):
    """
    Validate a contact form and build the adapted frame.

    Args:
        algebra: LieAlgebra
        alpha: ContactForm or coefficient sequence in the algebra basis
        parameters: map name -> value, already substituted into the data
        distribution: optional 2n vectors (algebra coordinates) spanning Ker alpha
        frame_names: optional 2n+1 names for A_1..A_2n, xi
        name: label echoed in reports

    Returns:
        ContactModel

    Raises:
        NotLieAlgebra, NotContact, NoReeb, BadParameter, InvalidFrame
    """
    parameters = _check_parameters(parameters)
    if not isinstance(alpha, ContactForm):
        alpha = ContactForm(tuple(as_rational(a) for a in alpha))
    dim = algebra.dimension
    if len(alpha.coefficients) != dim:
        raise NotContact(f'alpha has {len(alpha.coefficients)} coefficients, expected {dim}')

    violations = check_jacobi(algebra)
    if violations:
        raise NotLieAlgebra(f'Jacobi identity fails on {len(violations)} triple(s)', violations)
    if dim % 2 == 0:
        raise NotContact('a contact algebra has odd dimension')

    basis = [algebra.vector(b) for b in algebra.basis_names]
    full = tuple(tuple(-alpha(algebra.bracket(u, v)) for v in basis) for u in basis)
    bordered = tuple(row + (alpha.coefficients[i],) for i, row in enumerate(full))
    bordered += (tuple(-a for a in alpha.coefficients) + (ZERO,),)
    if determinant(bordered) == 0:
        raise NotContact('alpha wedge (d alpha)^n vanishes')

    rows = tuple(tuple(full[i][j] for i in range(dim)) for j in range(dim))
    rows += (alpha.coefficients,)
    try:
        reeb = solve_unique(rows, (ZERO,) * dim + (ONE,))
    except SingularSystem as exc:
        raise NoReeb(f'Reeb system is not uniquely solvable: {exc}') from exc
    logger.debug('%s: Reeb field %s', name, reeb)

    if distribution is None:
        distribution = nullspace((alpha.coefficients,))
    distribution = [algebra.coordinates(v) for v in distribution]
    if len(distribution) != dim - 1:
        raise InvalidFrame(f'expected {dim - 1} distribution vectors, got {len(distribution)}')
    for v in distribution:
        if alpha(v) != 0:
            raise InvalidFrame(f'{v} is not in Ker alpha')
    columns = tuple(distribution) + (reeb,)
    change = transpose(columns)
    try:
        inv = inverse(change)
    except Degenerate as exc:
        raise InvalidFrame('distribution vectors are linearly dependent') from exc

    if frame_names is None:
        frame_names = tuple(f'A{i + 1}' for i in range(dim - 1)) + ('xi',)
    frame_names = tuple(frame_names)
    if len(frame_names) != dim or len(set(frame_names)) != dim:
        raise InvalidFrame('frame names must be distinct, one per frame vector')
    frame = AdaptedFrame(frame_names, change, inv)

    constants = tuple(
        tuple(frame.to_frame(algebra.bracket(columns[i], columns[j])) for j in range(dim))
        for i in range(dim)
    )
    omega = tuple(tuple(-constants[i][j][dim - 1] for j in range(dim - 1)) for i in range(dim - 1))
    if pfaffian(omega) == 0:
        raise Degenerate('omega is degenerate on the distribution')

    model = ContactModel(
        name=name,
        algebra=algebra,
        alpha=alpha,
        frame=frame,
        omega=omega,
        constants=constants,
        reeb=reeb,
        parameters=parameters,
    )
    logger.debug('%s: built model of dimension %d', name, dim)
    return model
