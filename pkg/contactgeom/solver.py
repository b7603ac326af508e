"""
Search the affine space of contact connections for curvature targets.

Every contact connection over a base table is base + S with S a deformation
tensor, and S is fixed by the totally symmetric coefficients of
omega(S(., .), .). Those C(2n+2, 3) coefficients are the decision variables,
so every candidate is admissible by construction. Curvature is quadratic in
them; the Jacobian is analytic.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from . import conf
from .connection import deform, deformation_from_symmetric, lower_index, symmetric_triples
from .curvature import (curvature, curvature_array, is_ricci_type, model_arrays, rd_tensor,
                        reeb_curvature, ricci_type_residual_array)
from .exceptions import NoConvergence
from .rational import rationalize

logger = logging.getLogger(__name__)

KINDS = ('flat', 'ricci_type', 'reeb_flat', 'normal')
ALIASES = {'ricci': 'ricci_type', 'reeb': 'reeb_flat'}
BLOCKS = {
    'flat': ('flat',),
    'ricci_type': ('ricci_type',),
    'reeb_flat': ('reeb_flat',),
    'normal': ('ricci_type', 'reeb_flat'),
}


@dataclass(frozen=True)
class Objective:
    kind: str
    weights: dict = field(default_factory=dict)  # block name -> float, default 1

    def __post_init__(self):
        kind = ALIASES.get(self.kind, self.kind)
        if kind not in KINDS:
            raise ValueError(f'unknown objective {self.kind!r}')
        object.__setattr__(self, 'kind', kind)

    @property
    def blocks(self):
        return BLOCKS[self.kind]

    def weight(self, block):
        return float(self.weights.get(block, 1.0))


@dataclass(frozen=True)
class SolverOptions:
    max_iterations: int = 200
    restarts: int = 20
    seed: int = 0
    tolerance: float = 1e-12
    damping_init: float = 1e-3
    max_denominator: int = 1000
    workers: int = 1

    def __post_init__(self):
        for name in ('max_iterations', 'restarts', 'tolerance', 'damping_init', 'max_denominator', 'workers'):
            if getattr(self, name) <= 0:
                raise ValueError(f'{name} must be positive')


@dataclass(frozen=True, eq=False)
class Solution:
    parameters: np.ndarray
    S: np.ndarray  # float S[i][j][k] over distribution indices
    residual_norm: float
    iterations: int
    restart_index: int
    rationalized: object = None  # exact DeformationTensor when re-verification passed
    coefficients: tuple = None  # exact symmetric coefficients behind rationalized
    exact: bool = False


class Problem:
    """Float residual and Jacobian of one objective over one base table."""

    def __init__(self, model, gamma_base, objective):
        self.model = model
        self.objective = objective
        self.constants, self.omega = model_arrays(model)
        self.base = np.array(gamma_base.gamma, dtype=float)
        self.triples = symmetric_triples(model.rank)
        dim, d = model.dimension, model.rank
        directions = np.zeros((dim, dim, dim, len(self.triples)))
        for p in range(len(self.triples)):
            unit = [Fraction(int(q == p)) for q in range(len(self.triples))]
            s3 = np.array(deformation_from_symmetric(model, unit).s3, dtype=float)
            directions[:d, :d, :d, p] = s3
        self.directions = directions

    @property
    def size(self):
        return len(self.triples)

    def gamma(self, t):
        return self.base + self.directions @ t

    def deformation(self, t):
        d = self.model.rank
        return (self.directions @ t)[:d, :d, :d]

    def _blocks(self, R):
        xi = self.model.xi
        out = []
        for block in self.objective.blocks:
            if block == 'flat':
                part = R
            elif block == 'reeb_flat':
                part = R[:, xi]
            else:
                part = ricci_type_residual_array(R, self.omega)
            out.append(self.objective.weight(block) * part.reshape(-1, *R.shape[4:]))
        return np.concatenate(out, axis=0)

    def residual(self, t):
        return self._blocks(curvature_array(self.constants, self.gamma(t)))

    def jacobian(self, t):
        c, G, B = self.constants, self.gamma(t), self.directions
        dR = (np.einsum('ijq,qklp->ijklp', c, B)
              - np.einsum('jkmp,iml->ijklp', B, G) - np.einsum('jkm,imlp->ijklp', G, B)
              + np.einsum('ikmp,jml->ijklp', B, G) + np.einsum('ikm,jmlp->ijklp', G, B))
        return self._blocks(dR)

    def parameters_of(self, S):
        """Symmetric coefficients of a deformation tensor (exact or float)."""
        s3 = getattr(S, 's3', S)
        s3 = [[[float(v) for v in plane] for plane in row] for row in s3]
        lowered = lower_index(self.model, s3)
        return np.array([float(lowered[i][j][k]) for i, j, k in self.triples])


def residual(model, gamma_base, S, objective):
    problem = Problem(model, gamma_base, objective)
    return problem.residual(problem.parameters_of(S))


def jacobian(model, gamma_base, S, objective):
    problem = Problem(model, gamma_base, objective)
    return problem.jacobian(problem.parameters_of(S))


def objective_met(model, gamma, objective):
    """Exact verification of an objective on a rational table."""
    R = curvature(model, gamma)
    met = {
        'flat': R.is_zero,
        'reeb_flat': lambda: reeb_curvature(model, R).flat,
        'ricci_type': lambda: is_ricci_type(rd_tensor(model, R, basis='adapted')).ricci_type,
    }
    return all(met[block]() for block in objective.blocks)


def levenberg_marquardt(problem, start, options, free=None, progress=None, restart=0):
    """
    Damped least squares on the free coordinates.

    The damping is multiplied by 10 on a rejected step and by 0.1 on an
    accepted one.

    Returns:
        (parameters, sup-norm residual, iterations)
    """
    t = np.array(start, dtype=float)
    free = np.arange(problem.size) if free is None else np.asarray(free)
    mu = options.damping_init
    r = problem.residual(t)
    cost = float(r @ r)
    for iteration in range(options.max_iterations):
        norm = float(np.abs(r).max()) if r.size else 0.0
        if progress is not None:
            progress({'event': 'iteration', 'restart': restart, 'iteration': iteration, 'residual': norm})
        if norm <= options.tolerance or free.size == 0:
            return t, norm, iteration
        jac = problem.jacobian(t)[:, free]
        gradient = jac.T @ r
        normal = jac.T @ jac
        while True:
            step, *_ = np.linalg.lstsq(normal + mu * np.eye(free.size), -gradient, rcond=None)
            trial = t.copy()
            trial[free] += step
            r_trial = problem.residual(trial)
            cost_trial = float(r_trial @ r_trial)
            if cost_trial < cost:
                t, r, cost = trial, r_trial, cost_trial
                mu = max(mu * 0.1, 1e-15)
                break
            mu *= 10
            if mu > 1e16:
                logger.debug('restart %d stalled at iteration %d, residual %.3e', restart, iteration, norm)
                return t, norm, iteration
    norm = float(np.abs(r).max()) if r.size else 0.0
    return t, norm, options.max_iterations


def _starts(problem, options):
    rng = np.random.default_rng(options.seed)
    half_width = float(conf.get('RESTART_HALF_WIDTH'))
    starts = [np.zeros(problem.size)]
    for _ in range(1, options.restarts):
        starts.append(rng.uniform(-half_width, half_width, problem.size))
    return starts


def _exact(model, gamma_base, objective, values):
    coefficients = tuple(Fraction(v) for v in values)
    S = deformation_from_symmetric(model, coefficients)
    if objective_met(model, deform(model, gamma_base, S), objective):
        return S, coefficients
    return None, None


def _pin_next(problem, t, rounded, pinned, options):
    """
    Pin one more coordinate to its rounding and re-solve the rest.

    Candidates are tried closest-to-rounding first; the first one whose
    re-solve meets the tolerance is kept. Returns None when none does.
    """
    free = [p for p in range(problem.size) if p not in pinned]
    for p in sorted(free, key=lambda p: (abs(t[p] - float(rounded[p])), p)):
        trial = t.copy()
        trial[p] = float(rounded[p])
        rest = [q for q in free if q != p]
        trial, norm, _ = levenberg_marquardt(problem, trial, options, free=rest)
        if norm <= options.tolerance:
            pinned.append(p)
            return trial
        logger.debug('%s: pinning coordinate %d left residual %.3e', problem.model.name, p, norm)
    return None


def rationalize_solution(problem, gamma_base, solution, options):
    """
    Round the parameters with bounded denominators and verify exactly.

    When plain rounding fails, coordinates are pinned one at a time and the
    rest are re-solved before retrying.
    """
    model, objective = problem.model, problem.objective
    t = solution.parameters.copy()
    pinned = []
    while True:
        rounded = [rationalize(x, options.max_denominator) for x in t]
        S, coefficients = _exact(model, gamma_base, objective, rounded)
        if S is not None:
            logger.debug('%s: rationalized with %d pinned coordinates', model.name, len(pinned))
            return replace(solution, rationalized=S, coefficients=coefficients, exact=True)
        if len(pinned) == problem.size:
            logger.warning('%s: rationalization failed exact verification', model.name)
            return solution
        t = _pin_next(problem, t, rounded, pinned, options)
        if t is None:
            logger.warning('%s: no coordinate could be pinned after %d pins', model.name, len(pinned))
            return solution


def solve(model, gamma_base, objective, options=None, progress=None):
    """
    Multi-start Levenberg-Marquardt over the symmetric coefficients.

    Restart 0 starts at S = 0; the others are uniform in a centred cube.
    The best restart by residual wins, lowest index on ties. A restart that
    is already converged at its start point ends the search.

    Raises:
        NoConvergence: best residual above tolerance; carries the best Solution
    """
    options = options or SolverOptions()
    problem = Problem(model, gamma_base, objective)
    starts = _starts(problem, options)

    def run(index):
        t, norm, iterations = levenberg_marquardt(problem, starts[index], options,
                                                  progress=progress, restart=index)
        d = model.rank
        return Solution(t, problem.deformation(t)[:d, :d, :d], norm, iterations, index)

    if options.workers > 1:
        with ThreadPoolExecutor(max_workers=options.workers) as pool:
            results = list(pool.map(run, range(len(starts))))
    else:
        results = []
        for index in range(len(starts)):
            results.append(run(index))
            last = results[-1]
            if last.iterations == 0 and last.residual_norm <= options.tolerance:
                break
    best = min(results, key=lambda s: (s.residual_norm, s.restart_index))
    logger.debug('%s: best restart %d, residual %.3e', model.name, best.restart_index, best.residual_norm)
    if progress is not None:
        progress({'event': 'best', 'restart': best.restart_index, 'residual': best.residual_norm})
    if best.residual_norm > options.tolerance:
        raise NoConvergence(
            f'{model.name}: residual {best.residual_norm:.3e} above tolerance {options.tolerance:.1e}',
            best=best,
        )
    return rationalize_solution(problem, gamma_base, best, options)
