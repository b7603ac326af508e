"""Typed access to the CONTWIST settings dict with defaults."""
from django.conf import settings

DEFAULTS = {
    'TAU_ALG': 1e-10,
    'TAU_GEO': 1e-6,
    'FD_STEP': 1e-5,
    'SCAN_SAMPLES': 25,
    'SIEGEL_EPSILON': 0.1,
    'RESTART_HALF_WIDTH': 2.0,
    'WORKERS': 1,
}


def get(name):
    """Return a toolkit setting, falling back to DEFAULTS."""
    overrides = getattr(settings, 'CONTWIST', {}) if settings.configured else {}
    return overrides.get(name, DEFAULTS[name])


def tau_alg():
    return float(get('TAU_ALG'))


def tau_geo():
    return float(get('TAU_GEO'))


def fd_step():
    return float(get('FD_STEP'))


def workers():
    return max(1, int(get('WORKERS')))
