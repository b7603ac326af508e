"""
Contact connections in the adapted frame.

A ConnectionTable stores gamma[i][j][k] with
    nabla_{A_i} A_j = sum_k gamma[i][j][k] A_k
for every frame index, Reeb rows and columns included. A table is a contact
connection when it passes the five axioms checked by verify_axioms:

    distribution     nabla_X Y lies in D for Y in D
    reeb_derivative  nabla_xi Y = [xi, Y] for Y in D
    reeb_parallel    nabla_X xi = 0
    parallel_omega   (nabla_Y omega)(Y1, Y2) = 0 on D
    torsion          nabla_X Y - nabla_Y X - [X, Y] = d alpha(X, Y) xi
"""
import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, permutations

from .exceptions import Degenerate, InvalidDeformation, OmegaDegenerate
from .rational import ZERO, as_rational

logger = logging.getLogger(__name__)

AXIOMS = ('distribution', 'reeb_derivative', 'reeb_parallel', 'parallel_omega', 'torsion')

HALF = Fraction(1, 2)
THIRD = Fraction(1, 3)


def _blank(dim):
    return [[[ZERO] * dim for _ in range(dim)] for _ in range(dim)]


def _freeze3(rows):
    return tuple(tuple(tuple(plane) for plane in row) for row in rows)


@dataclass(frozen=True)
class ConnectionTable:
    gamma: tuple

    @property
    def dimension(self):
        return len(self.gamma)

    @classmethod
    def zero(cls, dim):
        return cls(_freeze3(_blank(dim)))

    @classmethod
    def from_nested(cls, rows):
        return cls(_freeze3([[[as_rational(v) for v in plane] for plane in row] for row in rows]))

    def mutable(self):
        return [[list(plane) for plane in row] for row in self.gamma]

    def covariant(self, i, j):
        return self.gamma[i][j]

    def is_zero(self):
        return not any(v for row in self.gamma for plane in row for v in plane)


@dataclass(frozen=True)
class DeformationTensor:
    s3: tuple  # S[i][j][k] over distribution indices

    @property
    def rank(self):
        return len(self.s3)

    @classmethod
    def zero(cls, d):
        return cls(_freeze3(_blank(d)))

    def __add__(self, other):
        d = self.rank
        return DeformationTensor(_freeze3([
            [[self.s3[i][j][k] + other.s3[i][j][k] for k in range(d)] for j in range(d)]
            for i in range(d)
        ]))

    def __neg__(self):
        return DeformationTensor(_freeze3([[[-v for v in plane] for plane in row] for row in self.s3]))

    def is_zero(self):
        return not any(v for row in self.s3 for plane in row for v in plane)


@dataclass(frozen=True)
class AxiomWitness:
    axiom: str
    inputs: tuple
    residual: object


@dataclass(frozen=True)
class AxiomReport:
    statuses: tuple  # (axiom, passed) pairs in AXIOMS order
    witnesses: tuple
    omega_parallel: bool

    @property
    def status(self):
        return dict(self.statuses)

    @property
    def passed(self):
        return all(ok for _, ok in self.statuses)

    @property
    def implication_holds(self):
        """All axioms passing must force nabla omega = 0 on the whole frame."""
        return self.omega_parallel or not self.passed


@dataclass(frozen=True)
class Discrepancy:
    x: str
    y: str
    component: str
    old: Fraction
    new: Fraction
    reason: str


# omega helpers

def omega_full(model):
    """d alpha on the whole frame; the Reeb row and column vanish."""
    dim, d = model.dimension, model.rank
    return tuple(
        tuple(model.omega[a][b] if a < d and b < d else ZERO for b in range(dim))
        for a in range(dim)
    )


def lower_index(model, s3):
    """K[i][j][k] = omega(S(A_i, A_j), A_k) over distribution indices."""
    d = model.rank
    omega = model.omega
    return [
        [[sum((s3[i][j][c] * omega[c][k] for c in range(d) if s3[i][j][c]), ZERO) for k in range(d)]
         for j in range(d)]
        for i in range(d)
    ]


def raise_index(model, lowered):
    """Inverse of lower_index."""
    d = model.rank
    try:
        inv = model.omega_inverse
    except Degenerate as exc:
        raise OmegaDegenerate('omega is not invertible on the distribution') from exc
    return [
        [[sum((lowered[i][j][k] * inv[k][c] for k in range(d) if lowered[i][j][k]), ZERO)
          for c in range(d)]
         for j in range(d)]
        for i in range(d)
    ]


def symmetric_triples(d):
    """Index multisets a <= b <= c; there are C(d+2, 3) of them."""
    return list(combinations_with_replacement(range(d), 3))


# constructions

def half_bracket_connection(model):
    """
    nabla'_{A_i} A_j = 1/2 ([A_i, A_j] - alpha([A_i, A_j]) xi) on D,
    nabla'_xi = ad_xi on D and nabla' xi = 0.
    """
    dim, d, xi = model.dimension, model.rank, model.xi
    c = model.constants
    gamma = _blank(dim)
    for i in range(d):
        for j in range(d):
            for k in range(d):
                gamma[i][j][k] = HALF * c[i][j][k]
    for j in range(d):
        for k in range(d):
            gamma[xi][j][k] = c[xi][j][k]
    return ConnectionTable(_freeze3(gamma))


def omega_derivative(model, gamma):
    """(nabla_{A_i} omega)(A_j, A_k) for every frame index."""
    dim = model.dimension
    om = omega_full(model)
    g = gamma.gamma
    out = _blank(dim)
    for i in range(dim):
        for j in range(dim):
            for k in range(dim):
                total = ZERO
                for m in range(dim):
                    if g[i][j][m]:
                        total -= g[i][j][m] * om[m][k]
                    if g[i][k][m]:
                        total -= om[j][m] * g[i][k][m]
                out[i][j][k] = total
    return _freeze3(out)


def nijenhuis_defect(model, gamma_prime):
    """
    The tensor N on D defined by omega(N(X, Y), Z) = (nabla'_X omega)(Y, Z).

    Returns:
        N[i][j][c] with N(A_i, A_j) = sum_c N[i][j][c] A_c
    """
    d = model.rank
    dw = omega_derivative(model, gamma_prime)
    lowered = [[[dw[i][j][k] for k in range(d)] for j in range(d)] for i in range(d)]
    return _freeze3(raise_index(model, lowered))


def vezzoni_correction(model, gamma_prime):
    """nabla~_X Y = nabla'_X Y + (N(X, Y) + N(Y, X)) / 3 on D; other rows are kept."""
    d = model.rank
    defect = nijenhuis_defect(model, gamma_prime)
    gamma = gamma_prime.mutable()
    for i in range(d):
        for j in range(d):
            for c in range(d):
                correction = defect[i][j][c] + defect[j][i][c]
                if correction:
                    gamma[i][j][c] += THIRD * correction
    return ConnectionTable(_freeze3(gamma))


def base_connection(model):
    """A contact connection every model admits: the corrected half-bracket table."""
    return vezzoni_correction(model, half_bracket_connection(model))


# verification

def verify_axioms(model, gamma):
    """Exhaustive exact check of the five contact axioms plus nabla omega = 0."""
    dim, d, xi = model.dimension, model.rank, model.xi
    names = model.frame.names
    c = model.constants
    g = gamma.gamma
    if gamma.dimension != dim:
        raise ValueError(f'table has dimension {gamma.dimension}, model has {dim}')
    failures = {axiom: [] for axiom in AXIOMS}

    for i in range(dim):
        for j in range(d):
            if g[i][j][xi]:
                failures['distribution'].append(
                    AxiomWitness('distribution', (names[i], names[j]), g[i][j][xi]))
    for j in range(d):
        residual = tuple(g[xi][j][k] - c[xi][j][k] for k in range(dim))
        if any(residual):
            failures['reeb_derivative'].append(AxiomWitness('reeb_derivative', (names[j],), residual))
    for i in range(dim):
        if any(g[i][xi]):
            failures['reeb_parallel'].append(AxiomWitness('reeb_parallel', (names[i],), g[i][xi]))

    dw = omega_derivative(model, gamma)
    for i in range(d):
        for j in range(d):
            for k in range(j + 1, d):
                if dw[i][j][k]:
                    failures['parallel_omega'].append(
                        AxiomWitness('parallel_omega', (names[i], names[j], names[k]), dw[i][j][k]))
    omega_parallel = not any(v for row in dw for plane in row for v in plane)

    for i in range(dim):
        for j in range(i + 1, dim):
            residual = tuple(g[i][j][k] - g[j][i][k] - c[i][j][k] for k in range(d))
            residual += (g[i][j][xi] - g[j][i][xi],)
            if any(residual):
                failures['torsion'].append(AxiomWitness('torsion', (names[i], names[j]), residual))

    statuses = tuple((axiom, not failures[axiom]) for axiom in AXIOMS)
    witnesses = tuple(w for axiom in AXIOMS for w in failures[axiom])
    report = AxiomReport(statuses, witnesses, omega_parallel)
    if not report.implication_holds:
        logger.error('%s: axioms pass but nabla omega != 0', model.name)
    return report


def validate_deformation(model, S):
    """Raise InvalidDeformation unless S is symmetric with totally symmetric omega-lowering."""
    d = model.rank
    names = model.frame.names
    if S.rank != d:
        raise InvalidDeformation(f'deformation has rank {S.rank}, distribution has {d}')
    s3 = S.s3
    for i in range(d):
        for j in range(i + 1, d):
            if s3[i][j] != s3[j][i]:
                raise InvalidDeformation(
                    f'S({names[i]}, {names[j]}) != S({names[j]}, {names[i]})',
                    witness=('symmetric', names[i], names[j]),
                )
    lowered = lower_index(model, s3)
    for i in range(d):
        for j in range(d):
            for k in range(j + 1, d):
                if lowered[i][j][k] != lowered[i][k][j]:
                    raise InvalidDeformation(
                        f'omega(S({names[i]}, {names[j]}), {names[k]}) is not symmetric',
                        witness=('omega_symmetric', names[i], names[j], names[k]),
                    )


def deform(model, gamma, S):
    """nabla_X Y = gamma_X Y + S(X, Y) on D."""
    validate_deformation(model, S)
    d = model.rank
    out = gamma.mutable()
    for i in range(d):
        for j in range(d):
            for k in range(d):
                if S.s3[i][j][k]:
                    out[i][j][k] += S.s3[i][j][k]
    return ConnectionTable(_freeze3(out))


def difference(model, first, second):
    """The deformation S with deform(second, S) = first."""
    d = model.rank
    s3 = [[[first.gamma[i][j][k] - second.gamma[i][j][k] for k in range(d)] for j in range(d)]
          for i in range(d)]
    S = DeformationTensor(_freeze3(s3))
    validate_deformation(model, S)
    return S


def deformation_from_symmetric(model, coefficients):
    """
    Build S from totally symmetric coefficients of omega(S(., .), .).

    Args:
        model: ContactModel
        coefficients: sequence aligned with symmetric_triples(2n)

    Returns:
        DeformationTensor
    """
    d = model.rank
    lowered = [[[ZERO] * d for _ in range(d)] for _ in range(d)]
    for triple, value in zip(symmetric_triples(d), coefficients):
        for i, j, k in set(permutations(triple)):
            lowered[i][j][k] = value
    return DeformationTensor(_freeze3(raise_index(model, lowered)))


def random_deformation(model, rng, bound=3):
    """Random valid S with small rational coefficients drawn from rng (random.Random)."""
    coefficients = [
        Fraction(rng.randint(-bound, bound), rng.randint(1, 3)) if rng.random() < 0.5 else ZERO
        for _ in symmetric_triples(model.rank)
    ]
    return deformation_from_symmetric(model, coefficients)


# repair

def repair_connection(model, gamma_raw):
    """
    Project an arbitrary table onto the contact connections.

    Reeb rows and columns and the xi-components are forced outright. On the
    distribution block the lowered table K = omega(nabla A_b, A_a) differs from
    the base connection's by a totally symmetric tensor; every entry of a
    symmetry orbit votes for that tensor's value and the most frequent vote
    wins (ties: smallest absolute value, then smallest value).

    Returns:
        (ConnectionTable, tuple of Discrepancy)
    """
    dim, d, xi = model.dimension, model.rank, model.xi
    c = model.constants
    raw = gamma_raw.gamma
    fixed = gamma_raw.mutable()
    reasons = {}

    for i in range(dim):
        for k in range(dim):
            fixed[i][xi][k] = ZERO
            reasons[(i, xi, k)] = 'reeb_parallel'
    for j in range(d):
        for k in range(dim):
            fixed[xi][j][k] = c[xi][j][k] if k < d else ZERO
            reasons[(xi, j, k)] = 'reeb_derivative'
    for i in range(d):
        for j in range(d):
            fixed[i][j][xi] = ZERO
            reasons[(i, j, xi)] = 'distribution'

    base = base_connection(model).gamma
    block = [[fixed[i][j][:d] for j in range(d)] for i in range(d)]
    lowered = lower_index(model, block)
    lowered_base = lower_index(model, [[base[i][j][:d] for j in range(d)] for i in range(d)])

    for triple in symmetric_triples(d):
        slots = sorted(set(permutations(triple)))
        votes = Counter(lowered[i][j][k] - lowered_base[i][j][k] for i, j, k in slots)
        if len(votes) == 1:
            continue
        winner = min(votes, key=lambda v: (-votes[v], abs(v), v))
        logger.debug('%s: orbit %s votes %s, keeping %s', model.name, triple, dict(votes), winner)
        for i, j, k in slots:
            lowered[i][j][k] = lowered_base[i][j][k] + winner

    repaired = raise_index(model, lowered)
    for i in range(d):
        for j in range(d):
            for k in range(d):
                fixed[i][j][k] = repaired[i][j][k]
                reasons.setdefault((i, j, k), 'consensus')

    names = model.frame.names
    ledger = []
    for i in range(dim):
        for j in range(dim):
            for k in range(dim):
                if fixed[i][j][k] != raw[i][j][k]:
                    ledger.append(Discrepancy(
                        names[i], names[j], names[k], raw[i][j][k], fixed[i][j][k], reasons[(i, j, k)],
                    ))
    for entry in ledger:
        logger.warning(
            '%s: repaired nabla_%s %s [%s]: %s -> %s (%s)',
            model.name, entry.x, entry.y, entry.component, entry.old, entry.new, entry.reason,
        )
    return ConnectionTable(_freeze3(fixed)), tuple(ledger)
