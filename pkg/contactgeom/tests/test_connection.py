import random
from dataclasses import replace
from fractions import Fraction

from django.test import SimpleTestCase
from hypothesis import given, reject, settings
from hypothesis import strategies as st

from contactgeom import documents
from contactgeom.connection import (ConnectionTable, DeformationTensor, Discrepancy,
                                    base_connection, deform, difference,
                                    half_bracket_connection, nijenhuis_defect, omega_derivative,
                                    random_deformation, repair_connection, verify_axioms,
                                    vezzoni_correction)
from contactgeom.corpus import example1, example2
from contactgeom.documents import TableEntry
from contactgeom.exceptions import ContactGeometryError, InvalidDeformation
from contactgeom.lie_contact import build_model

from .utils import load_example, raw_example

THIRD = Fraction(1, 3)
HALF = Fraction(1, 2)


class ConstructionTests(SimpleTestCase):
    def test_half_bracket_example2(self):
        model, _, _ = load_example('2')
        gamma = half_bracket_connection(model)
        self.assertFalse(any(gamma.gamma[0][1]))
        self.assertEqual(gamma.gamma[0][3], (HALF, 0, 0, 0, 0))
        self.assertEqual(omega_derivative(model, gamma)[0][1][3], -HALF)

    def test_half_bracket_omega_derivative_scales_with_s(self):
        model, _, _ = load_example('2', s=2)
        self.assertEqual(omega_derivative(model, half_bracket_connection(model))[0][1][3], -1)

    def test_half_bracket_abelian_directions(self):
        model, _, _ = load_example('2')
        gamma = half_bracket_connection(model)
        # A2 and A3 commute
        self.assertFalse(any(gamma.gamma[1][2]))
        self.assertFalse(any(gamma.gamma[2][1]))

    def test_defect_example2(self):
        model, _, _ = load_example('2')
        defect = nijenhuis_defect(model, half_bracket_connection(model))
        self.assertEqual(defect[0][1], (0, 0, HALF, 0))
        self.assertEqual(defect[1][0], (0, 0, HALF, 0))

    def test_correction_reproduces_printed_table(self):
        for s in (Fraction(1), Fraction(2), Fraction(-1, 2)):
            model, tilde, _ = load_example('2', s=s, stage='tilde')
            corrected = vezzoni_correction(model, half_bracket_connection(model))
            self.assertEqual(corrected.gamma[0][1][2], THIRD)
            self.assertEqual(corrected, tilde)

    def test_correction_keeps_a_contact_connection(self):
        model, flat, _ = load_example('2')
        self.assertEqual(vezzoni_correction(model, flat), flat)

    def test_base_connection_passes_axioms(self):
        for which in ('1', '2', '3a'):
            model, _, _ = load_example(which)
            report = verify_axioms(model, base_connection(model))
            self.assertTrue(report.passed)
            self.assertTrue(report.omega_parallel)

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.fractions(min_value=-2, max_value=2, max_denominator=3), min_size=5, max_size=5))
    def test_base_connection_on_perturbed_forms(self, perturbation):
        model, _, _ = load_example('2')
        alpha = [a + p for a, p in zip(model.alpha.coefficients, perturbation)]
        try:
            perturbed = build_model(model.algebra, alpha)
        except ContactGeometryError:
            reject()
        report = verify_axioms(perturbed, base_connection(perturbed))
        self.assertTrue(report.passed)


class VerifyAxiomsTests(SimpleTestCase):
    def test_flat_example2(self):
        model, flat, _ = load_example('2')
        report = verify_axioms(model, flat)
        self.assertTrue(report.passed)
        self.assertEqual(report.witnesses, ())

    @settings(max_examples=25, deadline=None)
    @given(
        st.fractions(min_value=-3, max_value=3, max_denominator=5),
        st.fractions(min_value=-3, max_value=3, max_denominator=5),
        st.fractions(min_value=-3, max_value=3, max_denominator=5),
        st.fractions(min_value=-3, max_value=3, max_denominator=5),
    )
    def test_example1_family(self, b1, c2, d1, d2):
        model, raw, _ = raw_example('1', params={'b1': b1, 'c2': c2, 'd1': d1, 'd2': d2})
        report = verify_axioms(model, raw)
        self.assertTrue(report.passed)
        self.assertTrue(report.omega_parallel)

    def test_example1_violating_parallel_omega(self):
        document = example1()
        entries = tuple(
            TableEntry('E1', 'E1', (('E1', Fraction(1)), ('E2', Fraction(1))))
            if (e.x, e.y) == ('E1', 'E1') else e
            for e in document.connection
        )
        document = replace(document, connection=entries)
        model = documents.build(document)
        raw, _ = documents.connection_table(model, document)
        report = verify_axioms(model, raw)
        self.assertFalse(report.status['parallel_omega'])
        self.assertTrue(report.status['torsion'])
        self.assertIn(('E1', 'E1', 'E2'), [w.inputs for w in report.witnesses])

    def test_raw_example3b_fails_torsion(self):
        model, raw, _ = raw_example('3b')
        report = verify_axioms(model, raw)
        self.assertFalse(report.passed)
        self.assertFalse(report.status['torsion'])
        self.assertTrue(report.implication_holds)

    def test_reeb_rows(self):
        model, flat, _ = load_example('3a')
        table = flat.mutable()
        table[model.xi][0][0] += 1
        table[0][model.xi][1] = Fraction(1)
        report = verify_axioms(model, ConnectionTable.from_nested(table))
        self.assertFalse(report.status['reeb_derivative'])
        self.assertFalse(report.status['reeb_parallel'])


class DeformTests(SimpleTestCase):
    def test_zero_deformation(self):
        model, gamma, _ = load_example('3a')
        self.assertEqual(deform(model, gamma, DeformationTensor.zero(model.rank)), gamma)

    def test_printed_deformation_gives_flat_table(self):
        for s in (Fraction(1), Fraction(2), Fraction(-1, 2)):
            model, tilde, _ = load_example('2', s=s, stage='deformation')
            document = example2(s, 'deformation')
            S = documents.deformation_tensor(model, document)
            _, flat, _ = load_example('2', s=s, stage='flat')
            self.assertEqual(deform(model, tilde, S), flat)

    def test_non_symmetric_deformation(self):
        model, gamma, _ = load_example('2')
        s3 = [[[Fraction(0)] * 4 for _ in range(4)] for _ in range(4)]
        s3[0][1][2] = Fraction(1)
        S = DeformationTensor(tuple(tuple(tuple(p) for p in row) for row in s3))
        with self.assertRaises(InvalidDeformation) as caught:
            deform(model, gamma, S)
        self.assertEqual(caught.exception.witness[0], 'symmetric')

    def test_deformation_without_symmetric_lowering(self):
        model, gamma, _ = load_example('2')
        s3 = [[[Fraction(0)] * 4 for _ in range(4)] for _ in range(4)]
        s3[0][0][0] = Fraction(1)
        S = DeformationTensor(tuple(tuple(tuple(p) for p in row) for row in s3))
        with self.assertRaises(InvalidDeformation) as caught:
            deform(model, gamma, S)
        self.assertEqual(caught.exception.witness[0], 'omega_symmetric')

    @settings(max_examples=30, deadline=None)
    @given(st.sampled_from(['1', '2', '3a']), st.integers(min_value=0, max_value=10 ** 6))
    def test_random_deformations_stay_contact(self, which, seed):
        model, gamma, _ = load_example(which)
        rng = random.Random(seed)
        first, second = random_deformation(model, rng), random_deformation(model, rng)
        deformed = deform(model, gamma, first)
        report = verify_axioms(model, deformed)
        self.assertTrue(report.passed)
        self.assertTrue(report.omega_parallel)
        self.assertEqual(deform(model, deformed, second), deform(model, gamma, first + second))
        self.assertEqual(difference(model, deformed, gamma), first)
        if not first.is_zero():
            self.assertNotEqual(deformed, gamma)

    def test_difference_of_example3_connections(self):
        model, connection_a, _ = load_example('3a')
        S = difference(model, connection_a, base_connection(model))
        self.assertEqual(deform(model, base_connection(model), S), connection_a)


class RepairTests(SimpleTestCase):
    def test_valid_table_is_unchanged(self):
        model, flat, _ = load_example('2')
        repaired, ledger = repair_connection(model, flat)
        self.assertEqual(repaired, flat)
        self.assertEqual(ledger, ())

    def test_example3a_at_s1_needs_no_repair(self):
        _, _, ledger = load_example('3a')
        self.assertEqual(ledger, ())

    def test_example3a_slip(self):
        model, raw, _ = raw_example('3a', s=2)
        repaired, ledger = repair_connection(model, raw)
        self.assertEqual(ledger, (
            Discrepancy('A3', 'A1', 'A1', Fraction(1, 4), HALF, 'consensus'),
        ))
        self.assertTrue(verify_axioms(model, repaired).passed)

    def test_example3b_ledger(self):
        model, raw, symbols = raw_example('3b')
        self.assertEqual({(e.x, e.y, e.component) for e in symbols},
                         {('A1', 'A2', 'E4'), ('A1', 'A4', 'E1')})
        self.assertTrue(all(e.reason == 'symbol' for e in symbols))
        repaired, ledger = repair_connection(model, raw)
        self.assertTrue(verify_axioms(model, repaired).passed)
        changes = {(e.x, e.y, e.component): (e.old, e.new) for e in ledger}
        self.assertEqual(changes, {
            ('A1', 'A2', 'A3'): (THIRD, -THIRD),
            ('A1', 'A2', 'A4'): (0, 2 * THIRD),
            ('A2', 'A3', 'A2'): (-HALF, -THIRD),
            ('A3', 'A4', 'A3'): (THIRD, 0),
            ('A3', 'A4', 'A4'): (0, THIRD),
        })

    def test_example2_tilde_symbols(self):
        model, raw, symbols = raw_example('2', stage='tilde')
        self.assertEqual({(e.x, e.y) for e in symbols}, {('A4', 'E1'), ('A4', 'E2')})
        repaired, ledger = repair_connection(model, raw)
        changes = {(e.x, e.y, e.component): (e.old, e.new, e.reason) for e in ledger}
        self.assertEqual(changes, {
            ('A4', 'xi', 'A1'): (-2 * THIRD, 0, 'reeb_parallel'),
            ('A4', 'A1', 'A2'): (2 * THIRD, 0, 'consensus'),
            ('A4', 'A1', 'A1'): (0, -2 * THIRD, 'consensus'),
            ('A4', 'A2', 'A2'): (0, 2 * THIRD, 'consensus'),
        })
        self.assertEqual(repaired, vezzoni_correction(model, half_bracket_connection(model)))

    def test_perturbed_entry_is_recovered(self):
        model, flat, _ = load_example('2')
        table = flat.mutable()
        table[3][0][0] += 1
        repaired, ledger = repair_connection(model, ConnectionTable.from_nested(table))
        self.assertEqual(repaired, flat)
        self.assertEqual(len(ledger), 1)
        self.assertEqual((ledger[0].x, ledger[0].y, ledger[0].component), ('A4', 'A1', 'A1'))
