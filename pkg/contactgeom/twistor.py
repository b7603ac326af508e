"""
Pointwise tensors of the contact twistor space.

A TwistorPoint anchors a compatible J on the distribution of a model, written
in the adapted frame A_1..A_2n. Tangent vectors split into a horizontal part
(adapted-frame coordinates, xi included) and a vertical endomorphism of D.
J is extended to TM by J xi = 0. The closed formulas for the normality tensor,
the Levi form and d eta_t are used directly; no lifts are constructed.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import conf
from .curvature import curvature_array, model_arrays
from .exceptions import NonPositiveT, NotInE, NotVertical
from .fiber import (CompatibleJ, VerticalVector, compatible_j, fiber_metric, is_vertical,
                    sample_fiber, tangent_projection, vertical_basis)

logger = logging.getLogger(__name__)


def _sign(k):
    if k not in (1, 2):
        raise ValueError(f'k must be 1 or 2, got {k}')
    return (-1) ** (k + 1)


@dataclass(frozen=True, eq=False)
class TwistorTangent:
    horizontal: np.ndarray
    vertical: np.ndarray

    @property
    def is_zero(self):
        return not (np.any(self.horizontal) or np.any(self.vertical))


@dataclass(frozen=True, eq=False)
class TwistorPoint:
    model: object
    J: CompatibleJ  # in the adapted distribution frame
    curvature: np.ndarray  # float R[i][j][k][l] over the full frame
    omega: np.ndarray

    @classmethod
    def at(cls, model, gamma, J=None, curvature=None):
        """
        Anchor J at a point of the model.

        Args:
            model: ContactModel
            gamma: ConnectionTable (ignored when curvature is given)
            J: CompatibleJ in the model's symplectic basis; J0 when omitted
        """
        constants, omega = model_arrays(model)
        if curvature is None:
            curvature = curvature_array(constants, np.array(gamma.gamma, dtype=float))
        transform = np.array(model.symplectic.transform, dtype=float)
        if J is None:
            J = sample_fiber(model.n, 1, 0)[0]
        adapted = transform @ J.matrix @ np.linalg.inv(transform)
        return cls(model, compatible_j(CompatibleJ(adapted, J.flipped), omega=omega, tol=1e-8),
                   curvature, omega)

    @property
    def rank(self):
        return self.omega.shape[0]

    @property
    def dimension(self):
        return self.rank + 1

    @property
    def j(self):
        return self.J.matrix

    def vector(self, x):
        """Adapted-frame coordinates of a frame name or a coordinate sequence."""
        if isinstance(x, str):
            return np.array(self.model.resolve(x), dtype=float)
        return np.asarray(x, dtype=float)

    def apply_j(self, x):
        x = self.vector(x)
        out = np.zeros(self.dimension)
        out[:self.rank] = self.j @ x[:self.rank]
        return out

    def endomorphism(self, x, y):
        """R(X, Y) restricted to D as a matrix in the column convention."""
        d = self.rank
        return np.einsum('i,j,ijkl->lk', self.vector(x), self.vector(y), self.curvature[:, :, :d, :d])

    def tangent(self, horizontal=None, vertical=None):
        horizontal = np.zeros(self.dimension) if horizontal is None else self.vector(horizontal)
        vertical = np.zeros((self.rank, self.rank)) if vertical is None else np.asarray(
            getattr(vertical, 'matrix', vertical), dtype=float)
        if not is_vertical(self.j, vertical, self.omega, tol=1e-8):
            raise NotVertical('vertical part is not tangent to the fibre at J')
        return TwistorTangent(horizontal, vertical)


def phi(point, tangent, k):
    """Phi_k X^h = (JX)^h and Phi_k V = (-1)^{k+1} J V."""
    sign = _sign(k)
    return TwistorTangent(point.apply_j(tangent.horizontal), sign * point.j @ tangent.vertical)


def metric_gt(point, t1, t2, t):
    """G_t = omega(X, JY) + alpha(X) alpha(Y) horizontally, t G_J vertically."""
    if t <= 0:
        raise NonPositiveT(f't must be positive, got {t}')
    d = point.rank
    x, y = t1.horizontal, t2.horizontal
    horizontal = x[:d] @ point.omega @ point.j @ y[:d] + x[d] * y[d]
    vertical = fiber_metric(point.j, t1.vertical, t2.vertical, point.omega)
    return float(horizontal + t * vertical)


def endo_curvature(R, X, Y, A):
    """R(X, Y) acting on End(D): R(X, Y) o A - A o R(X, Y)."""
    A = np.asarray(getattr(A, 'matrix', A), dtype=float)
    d = A.shape[0]
    endo = np.einsum('i,j,ijkl->lk', np.asarray(X, dtype=float), np.asarray(Y, dtype=float),
                     np.asarray(R)[:, :, :d, :d])
    return endo @ A - A @ endo


def _b(point, x, y):
    return endo_curvature(point.curvature, x, y, point.j)


def n1_horizontal(point, X, Y, k):
    """
    N_k(X^h, Y^h) = -R(X,Y)J + R(JX,JY)J - (-1)^{k+1} J (R(JX,Y)J + R(X,JY)J).
    """
    sign = _sign(k)
    x, y = point.vector(X), point.vector(Y)
    jx, jy = point.apply_j(x), point.apply_j(y)
    value = -_b(point, x, y) + _b(point, jx, jy) - sign * point.j @ (_b(point, jx, y) + _b(point, x, jy))
    return VerticalVector(value)


def n1_mixed(point, X, V, k):
    """N_k(X^h, V) = [1 + (-1)^k] (J V X)^h; V is projected onto T_J Z first."""
    _sign(k)
    matrix = np.asarray(getattr(V, 'matrix', V), dtype=float)
    projected = tangent_projection(point.j, matrix, point.omega)
    if projected.projected:
        logger.debug('n1_mixed: vertical argument projected onto the fibre tangent space')
    x = point.vector(X)
    out = np.zeros(point.dimension)
    out[:point.rank] = (1 + (-1) ** k) * point.j @ projected.matrix @ x[:point.rank]
    return out


def n1_vertical(point, V, W, k):
    """N_k(V, W) vanishes identically."""
    _sign(k)
    return np.zeros(point.dimension)


def _require_e(point, tangent):
    if abs(tangent.horizontal[point.rank]) > conf.tau_alg():
        raise NotInE('horizontal part has a xi component')


def levi_form(point, t1, t2):
    """Coefficient of xi^h: -omega(X, Y) on horizontal parts, zero on vertical ones."""
    _require_e(point, t1)
    _require_e(point, t2)
    d = point.rank
    return float(-(t1.horizontal[:d] @ point.omega @ t2.horizontal[:d]))


def d_eta(point, t1, t2, t=1.0):
    """d eta_t(X^h, Y^h) = omega(X, Y); every pair with a vertical slot gives zero."""
    if t <= 0:
        raise NonPositiveT(f't must be positive, got {t}')
    d = point.rank
    return float(t1.horizontal[:d] @ point.omega @ t2.horizontal[:d])


def cr_nijenhuis(point, t1, t2, k):
    """N^CR_k on E; it agrees with N_k there."""
    _require_e(point, t1)
    _require_e(point, t2)
    vertical = n1_horizontal(point, t1.horizontal, t2.horizontal, k).matrix
    horizontal = (n1_mixed(point, t1.horizontal, t2.vertical, k)
                  - n1_mixed(point, t2.horizontal, t1.vertical, k))
    return TwistorTangent(horizontal, vertical)


def j_minus_defect(point, R=None):
    """max |R_D(J-X, J-Y, J-Z, J-T)| over the frame, J- = (Id + iJ) / 2."""
    d = point.rank
    R = point.curvature if R is None else np.asarray(R)
    rd = np.einsum('abcl,le->abce', R[:d, :d, :d, :d], point.omega)
    j_minus = (np.eye(d) + 1j * point.j) / 2
    value = np.einsum('abcd,ai,bj,ck,dl->ijkl', rd, j_minus, j_minus, j_minus, j_minus)
    return float(np.abs(value).max())


# Scans

@dataclass
class ScanReport:
    model: str
    k: int
    samples: int
    seed: int
    distribution_max: float = 0.0
    reeb_max: float = 0.0
    mixed_max: float = 0.0
    threshold: float = 0.0
    witnesses: dict = field(default_factory=dict)

    @property
    def cr_integrable(self):
        return bool(self.distribution_max < self.threshold)

    @property
    def normal(self):
        return bool(max(self.distribution_max, self.reeb_max, self.mixed_max) < self.threshold)


def _scan_sample(model, curvature, J, index, k):
    point = TwistorPoint.at(model, None, J, curvature=curvature)
    names = model.frame.names
    d, xi = model.rank, model.xi
    frame = np.eye(point.dimension)
    best = {'distribution': (0.0, None), 'reeb': (0.0, None), 'mixed': (0.0, None)}
    for i in range(point.dimension):
        for j in range(point.dimension):
            if i == j:
                continue
            value = float(np.abs(n1_horizontal(point, frame[i], frame[j], k).matrix).max())
            key = 'reeb' if xi in (i, j) else 'distribution'
            if value > best[key][0]:
                best[key] = (value, (index, names[i], names[j]))
    basis = vertical_basis(point.j, point.omega)
    for i in range(d):
        for position, V in enumerate(basis):
            value = float(np.abs(n1_mixed(point, frame[i], V, k)).max())
            if value > best['mixed'][0]:
                best['mixed'] = (value, (index, names[i], f'V{position + 1}'))
    scale = float((1.0 + np.abs(point.j).max()) ** 3)
    return best, scale


def normality_scan(model, gamma, k, samples=None, seed=0, workers=None):
    """
    Sample fibre points and record the largest normality-tensor components.

    D x D pairs, pairs involving xi and mixed (horizontal, vertical) pairs are
    reduced separately; witnesses are (sample, X, Y). The verdict threshold is
    tau_alg scaled by the cube of the largest |J| entry seen.
    """
    _sign(k)
    samples = conf.get('SCAN_SAMPLES') if samples is None else samples
    if samples <= 0:
        raise ValueError(f'samples must be positive, got {samples}')
    workers = conf.workers() if workers is None else workers
    constants, _ = model_arrays(model)
    curvature = curvature_array(constants, np.array(gamma.gamma, dtype=float))
    structures = sample_fiber(model.n, samples, seed)
    report = ScanReport(model=model.name, k=k, samples=samples, seed=seed)

    def run(index):
        return _scan_sample(model, curvature, structures[index], index, k)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, range(samples)))
    else:
        results = [run(index) for index in range(samples)]

    scale = 1.0
    for best, sample_scale in results:
        scale = max(scale, sample_scale)
        for key, attribute in (('distribution', 'distribution_max'), ('reeb', 'reeb_max'),
                               ('mixed', 'mixed_max')):
            value, witness = best[key]
            if value > getattr(report, attribute):
                setattr(report, attribute, value)
                report.witnesses[key] = witness
    report.threshold = float(conf.tau_alg() * scale)
    logger.debug('%s: scan k=%d maxima D=%.3e xi=%.3e mixed=%.3e', model.name, k,
                 report.distribution_max, report.reeb_max, report.mixed_max)
    return report
