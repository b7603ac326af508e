"""
Report documents shared by the management commands.

Exact values are rational strings; float values are decimal strings with 12
significant digits. Section order is fixed so reports are deterministic.
"""
import json
import logging

import contwist

from .rational import format_rational

logger = logging.getLogger(__name__)

CURVATURE_CONVENTION = 'R(X,Y) = nabla_[X,Y] - [nabla_X, nabla_Y]'
D_ETA_CONVENTION = 'd eta(X,Y) = X eta(Y) - Y eta(X) - eta([X,Y]), without a factor 1/2'


def decimal(value):
    return f'{float(value):.12g}'


def new_report():
    return {'tool': {'name': 'contwist', 'version': contwist.__version__}}


def model_section(model):
    return {
        'name': model.name,
        'dimension': model.dimension,
        'parameters': {name: format_rational(v) for name, v in model.parameters},
        'frame': list(model.frame.names),
        'reeb': [format_rational(v) for v in model.reeb],
        'omega': [[format_rational(v) for v in row] for row in model.omega],
        'curvature_convention': CURVATURE_CONVENTION,
    }


def axioms_section(report):
    return {
        'statuses': {name: ok for name, ok in report.statuses},
        'passed': report.passed,
        'omega_parallel': report.omega_parallel,
        'witnesses': [
            {
                'axiom': w.axiom,
                'inputs': list(w.inputs),
                'residual': ([format_rational(v) for v in w.residual]
                             if isinstance(w.residual, tuple) else format_rational(w.residual)),
            }
            for w in report.witnesses
        ],
    }


def ledger_section(ledger):
    return [
        {
            'x': e.x,
            'y': e.y,
            'component': e.component,
            'old': format_rational(e.old),
            'new': format_rational(e.new),
            'reason': e.reason,
        }
        for e in ledger
    ]


def table_section(model, gamma):
    names = model.frame.names
    out = []
    for i, row in enumerate(gamma.gamma):
        for j, plane in enumerate(row):
            result = {names[k]: format_rational(v) for k, v in enumerate(plane) if v}
            if result:
                out.append({'x': names[i], 'y': names[j], 'result': result})
    return out


def classification_section(classification):
    return {
        'is_flat': classification.is_flat,
        'reeb_flat': classification.reeb_flat,
        'ricci_type': classification.ricci_type,
        'ricci_type_residual': format_rational(classification.ricci_type_residual_norm),
        'normal_phi1': classification.normal_phi1,
        'normal_phi2': classification.normal_phi2,
        'cr1_integrable': classification.cr1_integrable,
        'cr2_integrable': classification.cr2_integrable,
        'xi_h_killing': classification.xi_h_killing,
        'witness': list(classification.witness),
        'note': 'Phi_2 is the structure that is never normal and never CR integrable',
    }


def curvature_section(model, report, identities=None):
    names = model.frame.names
    components = []
    r = report.curvature.r
    for i in range(model.dimension):
        for j in range(i + 1, model.dimension):
            for k in range(model.dimension):
                result = {names[l]: format_rational(v) for l, v in enumerate(r[i][j][k]) if v}
                if result:
                    components.append({'x': names[i], 'y': names[j], 'z': names[k], 'result': result})
    section = {
        'convention': CURVATURE_CONVENTION,
        'flat': report.classification.is_flat,
        'reeb_flat': report.reeb.flat,
        'ricci_type': report.ricci_verdict.ricci_type,
        'ricci_type_residual': format_rational(report.ricci_verdict.residual_norm),
        'exact': True,
        'witness': list(report.ricci_verdict.witness),
        'ricci': [[format_rational(v) for v in row] for row in report.ricci.sigma],
        'components': components,
    }
    if identities is not None:
        section['identities'] = {name: not failures for name, failures in identities.items()}
    return section


def scan_section(scan, t=None):
    section = {
        'k': scan.k,
        'samples': scan.samples,
        'seed': scan.seed,
        'distribution_max': decimal(scan.distribution_max),
        'reeb_max': decimal(scan.reeb_max),
        'mixed_max': decimal(scan.mixed_max),
        'threshold': decimal(scan.threshold),
        'normal': scan.normal,
        'cr_integrable': scan.cr_integrable,
        'witnesses': {key: list(value) for key, value in sorted(scan.witnesses.items())},
        'd_eta_convention': D_ETA_CONVENTION,
    }
    if t is not None:
        section['t'] = decimal(t)
    return section


def solver_section(model, objective, options, solution):
    section = {
        'objective': objective.kind,
        'restarts': options.restarts,
        'seed': options.seed,
        'tolerance': decimal(options.tolerance),
        'max_denominator': options.max_denominator,
        'restart_index': solution.restart_index,
        'iterations': solution.iterations,
        'residual_norm': decimal(solution.residual_norm),
        'parameters': [decimal(v) for v in solution.parameters],
        'exact': solution.exact,
    }
    if solution.rationalized is not None:
        names = model.frame.names
        d = model.rank
        s3 = solution.rationalized.s3
        section['deformation'] = [
            {'x': names[i], 'y': names[j], 'result': {names[k]: format_rational(s3[i][j][k])
                                                       for k in range(d) if s3[i][j][k]}}
            for i in range(d) for j in range(d) if any(s3[i][j])
        ]
        section['coefficients'] = [format_rational(v) for v in solution.coefficients]
    return section


def fiber_section(diagnostics):
    return {
        'n': diagnostics.n,
        'samples': diagnostics.samples,
        'seed': diagnostics.seed,
        'tangent_ok': diagnostics.tangent_ok,
        'metric_ok': diagnostics.metric_ok,
        'holomorphic_ok': diagnostics.holomorphic_ok,
        'sign_flipped': diagnostics.flipped,
        'holomorphy_sign': diagnostics.holomorphy_sign,
        'max_tangent_error': decimal(diagnostics.max_tangent_error),
        'max_metric_error': decimal(diagnostics.max_metric_error),
        'max_holomorphy_error': decimal(diagnostics.max_holomorphy_error),
    }


def render(report):
    return json.dumps(report, indent=2, ensure_ascii=False) + '\n'
