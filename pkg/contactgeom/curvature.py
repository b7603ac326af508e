"""
Curvature of contact connections.

Sign convention: R(X, Y) = nabla_[X,Y] - [nabla_X, nabla_Y], the opposite of
the common textbook sign. In the adapted frame

    R[i][j][k][l] = sum_p c[i][j][p] G[p][k][l]
                    - sum_m G[j][k][m] G[i][m][l]
                    + sum_m G[i][k][m] G[j][m][l]

with R(A_i, A_j) A_k = sum_l R[i][j][k][l] A_l.

The exact path works on Fractions; the *_array functions are the numpy
versions used by the solver and the twistor scans.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .connection import omega_full, verify_axioms
from .exceptions import InvalidConnection
from .rational import ZERO, inverse

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CurvatureTensor:
    r: tuple

    @property
    def dimension(self):
        return len(self.r)

    def endomorphism(self, i, j):
        """Matrix rows k -> R(A_i, A_j) A_k coordinates."""
        return self.r[i][j]

    def is_zero(self):
        return not any(v for a in self.r for b in a for c in b for v in c)


@dataclass(frozen=True)
class FourTensorD:
    rd: tuple  # rd[a][b][c][e] = omega(R(f_a, f_b) f_c, f_e)
    omega: tuple  # Gram matrix of omega in the same basis
    names: tuple

    @property
    def rank(self):
        return len(self.rd)

    def is_zero(self):
        return not any(v for a in self.rd for b in a for c in b for v in c)


@dataclass(frozen=True)
class RicciTensor:
    sigma: tuple

    def is_symmetric(self):
        size = len(self.sigma)
        return all(self.sigma[i][j] == self.sigma[j][i] for i in range(size) for j in range(size))


@dataclass(frozen=True)
class RicciTypeVerdict:
    ricci_type: bool
    residual_norm: object
    witness: tuple  # basis names of the largest residual component, or ()
    residual: tuple

    def __iter__(self):
        # allows `ok, norm = is_ricci_type(rd)`
        return iter((self.ricci_type, self.residual_norm))


@dataclass(frozen=True)
class ReebCurvature:
    components: tuple  # components[i][j] = R(A_i, xi) A_j for distribution indices
    flat: bool


@dataclass(frozen=True)
class ClassificationReport:
    is_flat: bool
    reeb_flat: bool
    ricci_type: bool
    ricci_type_residual_norm: object
    normal_phi1: bool
    cr1_integrable: bool
    xi_h_killing: bool
    witness: tuple = ()
    # Phi_2 is never normal and its CR structure is never integrable
    normal_phi2: bool = False
    cr2_integrable: bool = False


@dataclass(frozen=True)
class CurvatureReport:
    curvature: CurvatureTensor
    rd: FourTensorD
    ricci: RicciTensor
    ricci_verdict: RicciTypeVerdict
    reeb: ReebCurvature
    classification: ClassificationReport


def _freeze4(rows):
    return tuple(tuple(tuple(tuple(c) for c in b) for b in a) for a in rows)


def curvature(model, gamma):
    """Exact curvature tensor of a connection table."""
    dim = model.dimension
    c = model.constants
    g = gamma.gamma
    out = [[[[ZERO] * dim for _ in range(dim)] for _ in range(dim)] for _ in range(dim)]
    for i in range(dim):
        for j in range(i + 1, dim):
            block = out[i][j]
            for p, cp in enumerate(c[i][j]):
                if not cp:
                    continue
                for k in range(dim):
                    for l, v in enumerate(g[p][k]):
                        if v:
                            block[k][l] += cp * v
            for k in range(dim):
                for m in range(dim):
                    a = g[j][k][m]
                    if a:
                        for l, v in enumerate(g[i][m]):
                            if v:
                                block[k][l] -= a * v
                    b = g[i][k][m]
                    if b:
                        for l, v in enumerate(g[j][m]):
                            if v:
                                block[k][l] += b * v
            out[j][i] = [[-v for v in row] for row in block]
    return CurvatureTensor(_freeze4(out))


def curvature_identities(model, R):
    """
    Exhaustive exact check of the algebraic identities of a contact curvature.

    Returns:
        dict mapping identity name -> list of offending index tuples
    """
    dim, d, xi = model.dimension, model.rank, model.xi
    r = R.r
    om = omega_full(model)
    failures = {'skew': [], 'omega_skew': [], 'bianchi': [], 'reeb_kernel': [], 'distribution': []}

    def w(i, j, k, u):
        return sum((r[i][j][k][l] * om[l][u] for l in range(dim) if r[i][j][k][l]), ZERO)

    for i in range(dim):
        for j in range(dim):
            for k in range(dim):
                if any(r[i][j][k][l] + r[j][i][k][l] for l in range(dim)):
                    failures['skew'].append((i, j, k))
            if any(r[i][j][xi]):
                failures['reeb_kernel'].append((i, j))
            for k in range(d):
                if r[i][j][k][xi]:
                    failures['distribution'].append((i, j, k))
            for k in range(dim):
                for u in range(k + 1, dim):
                    if w(i, j, k, u) != w(i, j, u, k):
                        failures['omega_skew'].append((i, j, k, u))
    for i in range(dim):
        for j in range(i + 1, dim):
            for k in range(j + 1, dim):
                cyclic = [r[i][j][k][l] + r[j][k][i][l] + r[k][i][j][l] for l in range(dim)]
                if any(cyclic):
                    failures['bianchi'].append((i, j, k))
    return failures


def _transform4(tensor, q):
    """Change basis in all four slots: out[a][b][c][e] = sum T[i][j][k][m] q[i][a]..q[m][e]."""
    size = len(q)
    t = tensor
    for _ in range(4):
        # contract the first slot and rotate it to the back
        t = [
            [[[sum((q[i][a] * t[i][b][c][e] for i in range(size) if q[i][a] and t[i][b][c][e]), ZERO)
               for a in range(size)]
              for e in range(size)]
             for c in range(size)]
            for b in range(size)
        ]
    return t


def rd_tensor(model, R, basis='symplectic'):
    """
    R_D(X, Y, Z, T) = omega(R(X, Y) Z, T) on the distribution.

    Args:
        model: ContactModel
        R: CurvatureTensor
        basis: 'symplectic' for the model's symplectic basis, 'adapted' for A_1..A_2n
    """
    d = model.rank
    r = R.r
    omega = model.omega
    adapted = [
        [[[sum((r[i][j][k][l] * omega[l][m] for l in range(d) if r[i][j][k][l]), ZERO)
           for m in range(d)]
          for k in range(d)]
         for j in range(d)]
        for i in range(d)
    ]
    if basis == 'adapted':
        return FourTensorD(_freeze4(adapted), omega, model.frame.names[:d])
    if basis != 'symplectic':
        raise ValueError(f'unknown basis {basis!r}')
    q = model.symplectic.transform
    gram = tuple(
        tuple(sum((q[a][x] * omega[a][b] * q[b][y] for a in range(d) for b in range(d)), ZERO)
              for y in range(d))
        for x in range(d)
    )
    names = tuple(f'e{i + 1}' for i in range(d))
    return FourTensorD(_freeze4(_transform4(adapted, q)), gram, names)


def ricci(rd):
    """sigma(X, Y) = Trace{Z -> R(X, Z) Y}, computed with omega^{-1} of the tensor's basis."""
    size = rd.rank
    inv = inverse(rd.omega)
    weights = [(a, b, inv[b][a]) for a in range(size) for b in range(size) if inv[b][a]]
    sigma = tuple(
        tuple(sum((rd.rd[x][a][y][b] * m for a, b, m in weights), ZERO) for y in range(size))
        for x in range(size)
    )
    return RicciTensor(sigma)


def ricci_type_projection(rd, sigma, omega=None):
    """
    Right-hand side of the Ricci-type identity with P = sigma:

        k [ -w(X,Z) P(Y,U) + w(Y,U) P(X,Z) - w(X,U) P(Y,Z) + w(Y,Z) P(X,U) - 2 w(X,Y) P(Z,U) ]

    with k = 1/(2n+2). With this normalisation ricci(projection) = sigma.
    """
    om = rd.omega if omega is None else omega
    p = sigma.sigma if isinstance(sigma, RicciTensor) else sigma
    size = len(om)
    k = Fraction(1, size + 2)
    out = tuple(
        tuple(
            tuple(
                tuple(
                    k * (-om[x][z] * p[y][u] + om[y][u] * p[x][z] - om[x][u] * p[y][z]
                         + om[y][z] * p[x][u] - 2 * om[x][y] * p[z][u])
                    for u in range(size))
                for z in range(size))
            for y in range(size))
        for x in range(size)
    )
    return FourTensorD(out, om, rd.names)


def is_ricci_type(rd):
    """Exact Ricci-type test; the witness names the largest residual component."""
    projection = ricci_type_projection(rd, ricci(rd))
    size = rd.rank
    residual = tuple(
        tuple(tuple(tuple(rd.rd[x][y][z][u] - projection.rd[x][y][z][u] for u in range(size))
                    for z in range(size)) for y in range(size)) for x in range(size)
    )
    norm, witness = ZERO, ()
    for x in range(size):
        for y in range(size):
            for z in range(size):
                for u in range(size):
                    value = abs(residual[x][y][z][u])
                    if value > norm:
                        norm, witness = value, tuple(rd.names[t] for t in (x, y, z, u))
    return RicciTypeVerdict(norm == 0, norm, witness, residual)


def reeb_curvature(model, R):
    d, xi = model.rank, model.xi
    components = tuple(tuple(R.r[i][xi][j] for j in range(d)) for i in range(d))
    flat = not any(v for row in components for vec in row for v in vec)
    return ReebCurvature(components, flat)


def killing_defect(model, R):
    """Reeb curvature components; xi^h is Killing for G_t exactly when all vanish."""
    return reeb_curvature(model, R).components


def curvature_report(model, gamma):
    """
    Curvature, R_D, Ricci tensor, Ricci-type and Reeb verdicts for a contact connection.

    Raises:
        InvalidConnection: the table fails an axiom; run repair_connection first
    """
    axioms = verify_axioms(model, gamma)
    if not axioms.passed:
        failed = ', '.join(name for name, ok in axioms.statuses if not ok)
        raise InvalidConnection(f'{model.name}: axioms fail ({failed}); repair the table first', axioms)
    R = curvature(model, gamma)
    rd = rd_tensor(model, R, basis='adapted')
    sigma = ricci(rd)
    verdict = is_ricci_type(rd)
    reeb = reeb_curvature(model, R)
    classification = ClassificationReport(
        is_flat=R.is_zero(),
        reeb_flat=reeb.flat,
        ricci_type=verdict.ricci_type,
        ricci_type_residual_norm=verdict.residual_norm,
        normal_phi1=reeb.flat and verdict.ricci_type,
        cr1_integrable=verdict.ricci_type,
        xi_h_killing=reeb.flat,
        witness=verdict.witness,
    )
    logger.debug('%s: classification %s', model.name, classification)
    return CurvatureReport(R, rd, sigma, verdict, reeb, classification)


def classify(model, gamma):
    return curvature_report(model, gamma).classification


# Float path

def curvature_array(constants, gamma):
    """numpy curvature; gamma may carry trailing batch axes after the three frame axes."""
    return (np.einsum('ijp,pkl...->ijkl...', constants, gamma)
            - np.einsum('jkm...,iml...->ijkl...', gamma, gamma)
            + np.einsum('ikm...,jml...->ijkl...', gamma, gamma))


def ricci_type_residual_array(R, omega):
    """
    rd - projection(rd) for a float curvature array, linear in R.

    R may carry trailing axes; omega is the float Gram matrix of the adapted
    distribution frame.
    """
    d = omega.shape[0]
    rd = np.einsum('ijkl...,lm->ijkm...', R[:d, :d, :d, :d], omega)
    weights = np.linalg.inv(omega).T
    sigma = np.einsum('xayb...,ab->xy...', rd, weights)
    k = 1.0 / (d + 2)
    projection = k * (
        -np.einsum('xz,yu...->xyzu...', omega, sigma)
        + np.einsum('yu,xz...->xyzu...', omega, sigma)
        - np.einsum('xu,yz...->xyzu...', omega, sigma)
        + np.einsum('yz,xu...->xyzu...', omega, sigma)
        - 2 * np.einsum('xy,zu...->xyzu...', omega, sigma)
    )
    return rd - projection


def model_arrays(model):
    """Float structure constants and omega of a model."""
    constants = np.array(model.constants, dtype=float)
    omega = np.array(model.omega, dtype=float)
    return constants, omega
