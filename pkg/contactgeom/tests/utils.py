"""Shared fixtures for the test suites."""
from fractions import Fraction

from contactgeom import documents
from contactgeom.connection import base_connection, repair_connection
from contactgeom.corpus import example
from contactgeom.lie_contact import LieAlgebra


def load_example(which, s=1, stage=None, params=None):
    """(model, repaired table, repair ledger) for a built-in example."""
    document = example(which, s=Fraction(s), stage=stage, params=params)
    model = documents.build(document)
    raw, _ = documents.connection_table(model, document)
    if raw is None:
        return model, base_connection(model), ()
    gamma, ledger = repair_connection(model, raw)
    return model, gamma, ledger


def raw_example(which, s=1, stage=None, params=None):
    """(model, unrepaired table, symbol ledger) for a built-in example."""
    document = example(which, s=Fraction(s), stage=stage, params=params)
    model = documents.build(document)
    raw, symbols = documents.connection_table(model, document)
    return model, raw, symbols


def so3():
    return LieAlgebra.from_brackets(('E1', 'E2', 'E3'), [
        ('E1', 'E2', {'E3': 1}),
        ('E2', 'E3', {'E1': 1}),
        ('E3', 'E1', {'E2': 1}),
    ])
