"""
Geometry of one twistor fibre Z(D, omega) and its Siegel upper half-space model.

Matrices are numpy float arrays in the column convention (column j holds the
image of basis vector j). Unless an omega is passed, the basis is the standard
symplectic one, omega(x, y) = x^T Omega y with Omega = [[0, I], [-I, 0]], and
the canonical structure is J0 E_i = E_{i+n}, i.e. J0 = [[0, -I], [I, 0]].
"""
import logging
from dataclasses import dataclass, field
from math import sqrt

import numpy as np

from . import conf
from .exceptions import Degenerate, NotSPD, NotSymplectic, SingularDenominator

logger = logging.getLogger(__name__)

# dJ[iW] = HOLOMORPHY_SIGN * J o dJ[W] in the column convention
HOLOMORPHY_SIGN = -1


def standard_omega(n):
    identity = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, identity], [-identity, zero]])


def canonical_j(n):
    identity = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, -identity], [identity, zero]])


def _matrix(value):
    return np.asarray(getattr(value, 'matrix', value), dtype=float)


def _omega_for(matrix, omega):
    if omega is None:
        return standard_omega(matrix.shape[0] // 2)
    return np.asarray(omega, dtype=float)


@dataclass(frozen=True, eq=False)
class CompatibleJ:
    matrix: np.ndarray
    flipped: bool = False  # the sign of the displayed Siegel formula was reversed

    @property
    def n(self):
        return self.matrix.shape[0] // 2


@dataclass(frozen=True, eq=False)
class SiegelPoint:
    X: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        Y = np.asarray(self.Y, dtype=float)
        object.__setattr__(self, 'X', (X + X.T) / 2)
        object.__setattr__(self, 'Y', (Y + Y.T) / 2)
        try:
            np.linalg.cholesky(self.Y)
        except np.linalg.LinAlgError as exc:
            raise NotSPD('imaginary part is not positive definite') from exc

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def z(self):
        return self.X + 1j * self.Y

    @classmethod
    def from_complex(cls, z):
        z = np.asarray(z, dtype=complex)
        return cls(z.real, z.imag)


@dataclass(frozen=True, eq=False)
class VerticalVector:
    matrix: np.ndarray
    projected: bool = field(default=False)  # tangent_projection changed the input


def compatible_j(matrix, omega=None, tol=None):
    """
    Validate a compatible complex structure.

    Raises:
        Degenerate: J^2 != -I or J is not omega-preserving
        NotSPD: omega(z, Jz) is not positive definite
    """
    J = _matrix(matrix)
    tol = conf.tau_alg() if tol is None else tol
    omega = _omega_for(J, omega)
    size = J.shape[0]
    scale = max(1.0, np.abs(J).max()) ** 2
    if np.abs(J @ J + np.eye(size)).max() > tol * scale:
        raise Degenerate('J^2 is not -Id')
    if np.abs(J.T @ omega @ J - omega).max() > tol * scale:
        raise Degenerate('J does not preserve omega')
    g = omega @ J
    if np.abs(g - g.T).max() > tol * scale:
        raise Degenerate('omega(., J .) is not symmetric')
    try:
        np.linalg.cholesky((g + g.T) / 2)
    except np.linalg.LinAlgError as exc:
        raise NotSPD('J does not tame omega') from exc
    return matrix if isinstance(matrix, CompatibleJ) else CompatibleJ(J)


def omega_adjoint(A, omega):
    """A* with omega(A* x, y) = omega(x, A y)."""
    A = _matrix(A)
    omega = np.asarray(omega, dtype=float)
    try:
        inv = np.linalg.inv(omega)
    except np.linalg.LinAlgError as exc:
        raise Degenerate('omega is singular') from exc
    return inv @ A.T @ omega


def omega_split(A, omega=None):
    """(A_check, A_hat): the sp(omega) part and the omega-symmetric part of A."""
    A = _matrix(A)
    star = omega_adjoint(A, _omega_for(A, omega))
    return (A - star) / 2, (A + star) / 2


def tangent_projection(J, A, omega=None):
    """pr_J(A) = (A_check + J A_check J) / 2."""
    J, A = _matrix(J), _matrix(A)
    check, _ = omega_split(A, omega)
    projected = (check + J @ check @ J) / 2
    changed = bool(np.abs(projected - A).max() > conf.tau_alg() * max(1.0, np.abs(A).max()))
    return VerticalVector(projected, projected=changed)


def is_vertical(J, V, omega=None, tol=None):
    J, V = _matrix(J), _matrix(V)
    omega = _omega_for(J, omega)
    tol = conf.tau_alg() if tol is None else tol
    scale = max(1.0, np.abs(V).max())
    anticommutes = np.abs(V @ J + J @ V).max() <= tol * scale
    skew = np.abs(V.T @ omega + omega @ V).max() <= tol * scale
    return bool(anticommutes and skew)


def fiber_metric(J, A, B, omega=None):
    """G_J(A, B) = Trace(x -> g_J(Ax, Bx)) with g_J(x, y) = omega(x, Jy)."""
    J, A, B = _matrix(J), _matrix(A), _matrix(B)
    g = _omega_for(J, omega) @ J
    return float(np.trace(np.linalg.solve(g, A.T @ g @ B)))


def adapted_basis(J, omega=None):
    """
    Hermitian Gram-Schmidt for (D, J, g_J).

    Returns:
        matrix F whose columns E_1..E_n, E_{n+1}..E_2n form a g_J-orthonormal
        symplectic basis with J E_i = E_{i+n}
    """
    J = _matrix(J)
    g = _omega_for(J, omega) @ J
    size = J.shape[0]
    es = []
    for candidate in np.eye(size):
        v = candidate.copy()
        for e in es:
            for w in (e, J @ e):
                v = v - (v @ g @ w) * w
        norm = sqrt(max(v @ g @ v, 0.0))
        if norm < 1e-8:
            continue
        es.append(v / norm)
        if len(es) == size // 2:
            break
    if len(es) != size // 2:
        raise Degenerate('could not complete a unitary basis')
    return np.column_stack(es + [J @ e for e in es])


def _elementary(size, source, target):
    """L_{source,target} in adapted coordinates: E_source -> E_target, others -> 0."""
    out = np.zeros((size, size))
    out[target, source] = 1.0
    return out


def _generator_pairs(n):
    return [(i, j) for i in range(n) for j in range(i, n)]


def _adapted_generator(n, i, j, normalized):
    size = 2 * n
    if i == j:
        matrix = _elementary(size, i + n, i) + _elementary(size, i, i + n)
        return matrix / sqrt(2) if normalized else matrix
    matrix = (_elementary(size, i + n, j) + _elementary(size, j + n, i)
              + _elementary(size, i, j + n) + _elementary(size, j, i + n))
    return matrix / 2 if normalized else matrix


def vertical_basis(J, omega=None):
    """
    G_J-orthonormal basis of T_J Z: [V_ij for i <= j] followed by [J V_ij].

    V_ii = (L_{i+n,i} + L_{i,i+n}) / sqrt(2) and
    V_ij = (L_{i+n,j} + L_{j+n,i} + L_{i,j+n} + L_{j,i+n}) / 2 in the adapted
    basis, where L_{ab} E_c = delta_{ac} E_b.
    """
    J = _matrix(J)
    n = J.shape[0] // 2
    F = adapted_basis(J, omega)
    F_inv = np.linalg.inv(F)
    vs = [F @ _adapted_generator(n, i, j, True) @ F_inv for i, j in _generator_pairs(n)]
    return [VerticalVector(v) for v in vs] + [VerticalVector(J @ v) for v in vs]


def unnormalized_generators(J, omega=None):
    """V_ij without the 1/sqrt(2) and 1/2 factors, so that V_ij E_i = E_{j+n}; keys are 0-based (i, j)."""
    J = _matrix(J)
    n = J.shape[0] // 2
    F = adapted_basis(J, omega)
    F_inv = np.linalg.inv(F)
    return {
        (i, j): VerticalVector(F @ _adapted_generator(n, i, j, False) @ F_inv)
        for i, j in _generator_pairs(n)
    }


# Siegel model

def principal_sqrt(Y, tol=None):
    """Symmetric positive square root by eigendecomposition."""
    Y = np.asarray(Y, dtype=float)
    tol = conf.tau_alg() if tol is None else tol
    values, vectors = np.linalg.eigh((Y + Y.T) / 2)
    if values.min() <= tol:
        raise NotSPD(f'smallest eigenvalue {values.min():.3e} is not positive')
    return vectors @ np.diag(np.sqrt(values)) @ vectors.T


def is_symplectic(psi, tol=None):
    psi = np.asarray(psi, dtype=float)
    tol = conf.tau_alg() if tol is None else tol
    omega = standard_omega(psi.shape[0] // 2)
    scale = max(1.0, np.abs(psi).max()) ** 2
    return bool(np.abs(psi.T @ omega @ psi - omega).max() <= tol * scale)


def sp_action(psi, Z):
    """psi . Z = (AZ + B)(CZ + D)^{-1}."""
    psi = np.asarray(psi, dtype=float)
    if not is_symplectic(psi):
        raise NotSymplectic('psi^T Omega psi != Omega')
    n = Z.n
    A, B = psi[:n, :n], psi[:n, n:]
    C, D = psi[n:, :n], psi[n:, n:]
    z = Z.z
    denominator = C @ z + D
    if np.linalg.cond(denominator) > 1e12:
        raise SingularDenominator('CZ + D is singular')
    w = np.linalg.solve(denominator.T, (A @ z + B).T).T
    return SiegelPoint.from_complex(w)


def psi_of_z(Z):
    """psi = [[Y^{1/2}, X Y^{-1/2}], [0, Y^{-1/2}]], so psi . iI = Z."""
    root = principal_sqrt(Z.Y)
    root_inv = np.linalg.inv(root)
    return np.block([[root, Z.X @ root_inv], [np.zeros_like(root), root_inv]])


def j_of_z(Z):
    """
    Compatible complex structure attached to a Siegel point.

    The displayed formula [[-XY^{-1}, Y + XY^{-1}X], [-Y^{-1}, Y^{-1}X]] tames
    omega with the opposite sign in the column convention, so the result is
    always the negated matrix psi J0 psi^{-1} with flipped=True.
    """
    Y_inv = np.linalg.inv(Z.Y)
    X = Z.X
    displayed = np.block([[-X @ Y_inv, Z.Y + X @ Y_inv @ X], [-Y_inv, Y_inv @ X]])
    omega = standard_omega(Z.n)
    flipped = False
    if np.linalg.eigvalsh((omega @ displayed + (omega @ displayed).T) / 2).min() <= 0:
        displayed = -displayed
        flipped = True
        logger.debug('J(Z): displayed formula negated to tame omega')
    return compatible_j(CompatibleJ(displayed, flipped=flipped), tol=1e-8)


def siegel_metric(Z, W1, W2):
    """Polarized H(W, W) = Trace(Y^{-1} U Y^{-1} U + Y^{-1} V Y^{-1} V), W = U + iV."""
    if np.linalg.eigvalsh(Z.Y).min() <= 0:
        raise NotSPD('Y is not positive definite')
    Y_inv = np.linalg.inv(Z.Y)
    W1, W2 = np.asarray(W1, dtype=complex), np.asarray(W2, dtype=complex)
    real = np.trace(Y_inv @ W1.real @ Y_inv @ W2.real)
    imaginary = np.trace(Y_inv @ W1.imag @ Y_inv @ W2.imag)
    return float(real + imaginary)


def random_siegel_point(n, rng, epsilon=None):
    """X symmetrized uniform(-1, 1), Y = M^T M + epsilon I."""
    epsilon = conf.get('SIEGEL_EPSILON') if epsilon is None else epsilon
    M = rng.uniform(-1, 1, (n, n))
    N = rng.uniform(-1, 1, (n, n))
    return SiegelPoint((M + M.T) / 2, N.T @ N + epsilon * np.eye(n))


def random_symmetric_complex(n, rng):
    U = rng.uniform(-1, 1, (n, n))
    V = rng.uniform(-1, 1, (n, n))
    return (U + U.T) / 2 + 1j * (V + V.T) / 2


def random_symplectic(n, rng):
    """[[I, 0], [C, I]] [[A, 0], [0, A^{-T}]] [[I, B], [0, I]] with B, C symmetric."""
    identity, zero = np.eye(n), np.zeros((n, n))
    B = rng.uniform(-1, 1, (n, n))
    C = rng.uniform(-1, 1, (n, n))
    A = identity + 0.5 * rng.uniform(-1, 1, (n, n))
    while abs(np.linalg.det(A)) < 0.1:
        A = identity + 0.5 * rng.uniform(-1, 1, (n, n))
    lower = np.block([[identity, zero], [(C + C.T) / 2, identity]])
    middle = np.block([[A, zero], [zero, np.linalg.inv(A).T]])
    upper = np.block([[identity, (B + B.T) / 2], [zero, identity]])
    return lower @ middle @ upper


def sample_fiber(n, count, seed):
    """J0 followed by count - 1 structures J(Z) for random Siegel points."""
    rng = np.random.default_rng(seed)
    samples = [CompatibleJ(canonical_j(n))]
    while len(samples) < count:
        samples.append(j_of_z(random_siegel_point(n, rng)))
    return samples[:count]


# Diagnostics

@dataclass
class SiegelDiagnostics:
    n: int
    samples: int
    seed: int
    tangent_ok: bool = True
    metric_ok: bool = True
    holomorphic_ok: bool = True
    flipped: bool = True
    holomorphy_sign: int = HOLOMORPHY_SIGN
    max_tangent_error: float = 0.0
    max_metric_error: float = 0.0
    max_holomorphy_error: float = 0.0

    @property
    def passed(self):
        return self.tangent_ok and self.metric_ok and self.holomorphic_ok


def pushforward(Z, W, step=None):
    """Central finite-difference dJ[W] at Z."""
    step = conf.fd_step() if step is None else step
    plus = j_of_z(SiegelPoint.from_complex(Z.z + step * W)).matrix
    minus = j_of_z(SiegelPoint.from_complex(Z.z - step * W)).matrix
    return (plus - minus) / (2 * step)


def _relative(a, b):
    return abs(a - b) / max(1.0, abs(b))


def verify_siegel_model(n, samples, seed):
    """Tangency, G = 2H and holomorphy of Z -> J(Z) at random points."""
    rng = np.random.default_rng(seed)
    tau = conf.tau_geo()
    report = SiegelDiagnostics(n=n, samples=samples, seed=seed)
    omega = standard_omega(n)
    for index in range(samples):
        Z = random_siegel_point(n, rng)
        J = j_of_z(Z)
        report.flipped = report.flipped and J.flipped
        W1, W2 = random_symmetric_complex(n, rng), random_symmetric_complex(n, rng)
        d1, d2 = pushforward(Z, W1), pushforward(Z, W2)

        tangent_error = max(
            np.abs(d1 @ J.matrix + J.matrix @ d1).max(),
            np.abs(d1.T @ omega + omega @ d1).max(),
        ) / max(1.0, np.abs(d1).max())
        metric_error = _relative(fiber_metric(J, d1, d2), 2 * siegel_metric(Z, W1, W2))
        rotated = pushforward(Z, 1j * W1)
        holomorphy_error = np.abs(rotated - HOLOMORPHY_SIGN * J.matrix @ d1).max() / max(1.0, np.abs(rotated).max())

        report.max_tangent_error = max(report.max_tangent_error, float(tangent_error))
        report.max_metric_error = max(report.max_metric_error, float(metric_error))
        report.max_holomorphy_error = max(report.max_holomorphy_error, float(holomorphy_error))
        logger.debug('siegel sample %d: tangent %.2e metric %.2e holomorphy %.2e',
                     index, tangent_error, metric_error, holomorphy_error)
    report.tangent_ok = report.max_tangent_error <= tau
    report.metric_ok = report.max_metric_error <= tau
    report.holomorphic_ok = report.max_holomorphy_error <= tau
    return report
