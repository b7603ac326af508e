"""
Built-in worked examples.

Example 1 is so(3) with alpha = -E3* and a four-parameter family of contact
connections. Example 2 is a solvable 5-dimensional algebra carrying the
half-bracket table, its corrected table, a deformation and the resulting flat
connection. Example 3 is a non-unimodular 5-dimensional algebra with two
connection tables as printed (A and B). Every document has its parameters
already substituted.
"""
import logging
from dataclasses import replace
from fractions import Fraction

from .connection import half_bracket_connection
from .documents import ModelDocument, TableEntry, build, table_entries
from .exceptions import BadParameter
from .rational import as_rational

logger = logging.getLogger(__name__)

WHICH = ('1', '2', '3a', '3b')
STAGES = ('prime', 'tilde', 'deformation', 'flat')
FAMILY = ('a1', 'a2', 'b1', 'b2', 'c1', 'c2', 'd1', 'd2')
FAMILY_DEFAULTS = {'b1': Fraction(1), 'c2': Fraction(2), 'd1': Fraction(1), 'd2': Fraction(-1)}


def _entries(rows):
    """[(x, y, {name: value})] -> TableEntry tuple, zero coefficients dropped."""
    out = []
    for x, y, result in rows:
        pairs = tuple((name, as_rational(v)) for name, v in result.items() if as_rational(v))
        if pairs:
            out.append(TableEntry(x, y, pairs))
    return tuple(out)


def _pairs(mapping):
    return tuple((name, as_rational(v)) for name, v in mapping.items())


def family_parameters(params=None):
    """
    Complete a partial assignment of the Example 1 family.

    The contact conditions are a1 = -d1, a2 = -d2, c1 = a2 and b2 = d1, so
    b1, c2, d1, d2 are free; the others may be given instead of their partner.

    Raises:
        BadParameter: unknown name or an inconsistent assignment
    """
    given = {name: as_rational(value) for name, value in (params or {}).items()}
    unknown = set(given) - set(FAMILY)
    if unknown:
        raise BadParameter(f'unknown family parameter(s): {", ".join(sorted(unknown))}')
    values = dict(given)
    if 'd1' not in values:
        if 'a1' in values:
            values['d1'] = -values['a1']
        elif 'b2' in values:
            values['d1'] = values['b2']
    if 'd2' not in values:
        if 'a2' in values:
            values['d2'] = -values['a2']
        elif 'c1' in values:
            values['d2'] = -values['c1']
    for name in ('b1', 'c2', 'd1', 'd2'):
        values.setdefault(name, FAMILY_DEFAULTS[name])
    derived = {
        'a1': -values['d1'],
        'a2': -values['d2'],
        'b2': values['d1'],
        'c1': -values['d2'],
    }
    for name, value in derived.items():
        if name in given and given[name] != value:
            raise BadParameter(f'{name} = {given[name]} violates the contact conditions (expected {value})')
        values[name] = value
    return {name: values[name] for name in FAMILY}


def example1(params=None):
    p = family_parameters(params)
    return ModelDocument(
        name='example1',
        basis=('E1', 'E2', 'E3'),
        brackets=_entries([
            ('E1', 'E2', {'E3': 1}),
            ('E2', 'E3', {'E1': 1}),
            ('E3', 'E1', {'E2': 1}),
        ]),
        alpha=_pairs({'E3': -1}),
        parameters=_pairs(p),
        frame_names=('E1', 'E2', 'xi'),
        distribution=(_pairs({'E1': 1}), _pairs({'E2': 1})),
        connection_frame='adapted',
        connection=_entries([
            ('E1', 'E1', {'E1': p['a1'], 'E2': p['b1']}),
            ('E1', 'E2', {'E1': p['c1'], 'E2': p['d1']}),
            ('E2', 'E1', {'E1': p['a2'], 'E2': p['b2']}),
            ('E2', 'E2', {'E1': p['c2'], 'E2': p['d2']}),
            ('xi', 'E1', {'E2': -1}),
            ('xi', 'E2', {'E1': 1}),
        ]),
    )


def _nonzero_s(s):
    s = as_rational(s)
    if s == 0:
        raise BadParameter('parameter s must be nonzero')
    return s


def _example2_base(s):
    return ModelDocument(
        name='example2',
        basis=('E1', 'E2', 'E3', 'E4', 'E5'),
        brackets=_entries([
            ('E2', 'E3', {'E1': 1}),
            ('E2', 'E5', {'E2': 1}),
            ('E3', 'E5', {'E3': -1}),
            ('E4', 'E5', {'E1': 1}),
        ]),
        alpha=_pairs({'E1': s, 'E4': 1}),
        parameters=(('s', s),),
        frame_names=('A1', 'A2', 'A3', 'A4', 'xi'),
        distribution=(
            _pairs({'E2': 1}),
            _pairs({'E3': 1}),
            _pairs({'E1': -1 / s, 'E4': 1}),
            _pairs({'E5': 1}),
        ),
    )


EXAMPLE2_TILDE = [
    ('A1', 'A2', {'A3': Fraction(1, 3)}),
    ('A1', 'A4', {'A1': Fraction(1, 3)}),
    ('A2', 'A1', {'A3': Fraction(1, 3)}),
    ('A2', 'A4', {'A2': Fraction(-1, 3)}),
    # printed with algebra names in the slot
    ('A4', 'E1', {'A1': Fraction(-2, 3)}),
    ('A4', 'E2', {'A2': Fraction(2, 3)}),
]

EXAMPLE2_DEFORMATION = [
    ('A1', 'A2', {'A3': Fraction(-1, 3)}),
    ('A2', 'A1', {'A3': Fraction(-1, 3)}),
    ('A1', 'A4', {'A1': Fraction(-1, 3)}),
    ('A4', 'A1', {'A1': Fraction(-1, 3)}),
    ('A2', 'A4', {'A2': Fraction(1, 3)}),
    ('A4', 'A2', {'A2': Fraction(1, 3)}),
]

EXAMPLE2_FLAT = [
    ('A4', 'A1', {'A1': -1}),
    ('A4', 'A2', {'A2': 1}),
]


def example2(s=1, stage='flat'):
    """
    Args:
        s: nonzero rational
        stage: 'prime' (half-bracket table), 'tilde' (corrected table as
            printed), 'deformation' (tilde plus the deformation S) or 'flat'
    """
    if stage not in STAGES:
        raise BadParameter(f'stage must be one of {STAGES}')
    s = _nonzero_s(s)
    document = _example2_base(s)
    if stage == 'prime':
        gamma = half_bracket_connection(build(document))
        return replace(document, name='example2-prime', connection_frame='adapted',
                       connection=table_entries(build(document), gamma))
    if stage == 'flat':
        return replace(document, name='example2-flat', connection_frame='adapted',
                       connection=_entries(EXAMPLE2_FLAT))
    document = replace(document, name='example2-tilde', connection_frame='adapted',
                       connection=_entries(EXAMPLE2_TILDE))
    if stage == 'deformation':
        document = replace(document, name='example2-deformation',
                           deformation=_entries(EXAMPLE2_DEFORMATION))
    return document


def _example3_base(s, name):
    return ModelDocument(
        name=name,
        basis=('E0', 'E1', 'E2', 'E3', 'E4'),
        brackets=_entries([
            ('E0', 'E1', {'E1': -1}),
            ('E0', 'E2', {'E2': 1}),
            ('E1', 'E2', {'E3': 1}),
            ('E1', 'E4', {'E1': -1}),
            ('E3', 'E4', {'E3': -1}),
        ]),
        alpha=_pairs({'E0': s, 'E3': 1}),
        parameters=(('s', s),),
        frame_names=('A1', 'A2', 'A3', 'A4', 'xi'),
        distribution=(
            _pairs({'E1': 1}),
            _pairs({'E2': 1}),
            _pairs({'E4': 1}),
            _pairs({'E0': -1, 'E3': s}),
        ),
    )


def _example3a_rows(s):
    return [
        ('A1', 'A2', {'A4': 1 / (2 * s)}),
        ('A1', 'A3', {'A1': Fraction(-1, 2)}),
        ('A2', 'A1', {'A4': -1 / (2 * s)}),
        ('A2', 'A3', {'A2': Fraction(-1, 2)}),
        ('A3', 'A1', {'A1': 1 / (2 * s)}),
        ('A3', 'A2', {'A2': Fraction(-1, 2)}),
        ('A3', 'A4', {'A3': -2}),
        ('A4', 'A1', {'A1': 1}),
        ('A4', 'A2', {'A2': -1}),
        ('A4', 'A3', {'A3': -2, 'A4': -1}),
        ('A4', 'A4', {'A3': 8, 'A4': 2}),
        ('xi', 'A1', {'A1': -1 / s}),
        ('xi', 'A2', {'A2': 1 / s}),
    ]


def _example3b_rows(s):
    return [
        # E4 and E1 are printed algebra names
        ('A1', 'A2', {'A3': -1 / (3 * s), 'E4': 2 / (3 * s)}),
        ('A1', 'A3', {'A1': Fraction(-2, 3)}),
        ('A1', 'A4', {'E1': Fraction(-1, 3)}),
        ('A2', 'A1', {'A3': -1 / (3 * s), 'A4': -1 / (3 * s)}),
        ('A2', 'A3', {'A2': Fraction(-1, 2)}),
        ('A2', 'A4', {'A2': Fraction(1, 3)}),
        ('A3', 'A1', {'A1': Fraction(1, 3)}),
        ('A3', 'A2', {'A2': Fraction(-1, 3)}),
        ('A3', 'A3', {'A3': Fraction(-1, 3)}),
        ('A3', 'A4', {'A3': Fraction(1, 3)}),
        ('A4', 'A1', {'A1': Fraction(2, 3)}),
        ('A4', 'A2', {'A2': Fraction(-2, 3)}),
        ('A4', 'A3', {'A4': Fraction(-2, 3)}),
        ('xi', 'A1', {'A1': -1 / s}),
        ('xi', 'A2', {'A2': 1 / s}),
    ]


def example3(s=1, which='a'):
    s = _nonzero_s(s)
    if which not in ('a', 'b'):
        raise BadParameter("connection must be 'a' or 'b'")
    rows = _example3a_rows(s) if which == 'a' else _example3b_rows(s)
    document = _example3_base(s, f'example3{which}')
    return replace(document, connection_frame='adapted', connection=_entries(rows))


def example(which, s=None, stage=None, params=None):
    """Dispatch on the example label used by the examples command."""
    if which not in WHICH:
        raise BadParameter(f'unknown example {which!r}; choose from {", ".join(WHICH)}')
    s = Fraction(1) if s is None else as_rational(s)
    if which == '1':
        document = example1(params)
    elif which == '2':
        document = example2(s, stage or 'flat')
    else:
        document = example3(s, which[1])
    logger.debug('built example %s (%s)', which, document.name)
    return document
