import json
import random

import numpy as np
from django.test import SimpleTestCase

from contactgeom import reports
from contactgeom.connection import deform, random_deformation
from contactgeom.curvature import curvature_report
from contactgeom.exceptions import NonPositiveT, NotInE, NotVertical
from contactgeom.fiber import adapted_basis, sample_fiber, unnormalized_generators, vertical_basis
from contactgeom.twistor import (TwistorPoint, cr_nijenhuis, d_eta, endo_curvature, j_minus_defect,
                                 levi_form, metric_gt, n1_horizontal, n1_mixed, n1_vertical,
                                 normality_scan, phi)

from .utils import load_example


def point_for(which, J=None, **kwargs):
    model, gamma, _ = load_example(which, **kwargs)
    return TwistorPoint.at(model, gamma, J)


def padded(v):
    return np.append(v, 0.0)


def distribution_defect(point, k=1):
    frame = np.eye(point.dimension)
    return max(
        float(np.abs(n1_horizontal(point, frame[i], frame[j], k).matrix).max())
        for i in range(point.rank) for j in range(point.rank)
    )


class TwistorPointTests(SimpleTestCase):
    def test_canonical_anchor(self):
        point = point_for('2')
        np.testing.assert_allclose(point.apply_j('A2'), point.vector('A1'))
        np.testing.assert_allclose(point.apply_j('A1'), -point.vector('A2'))
        self.assertFalse(np.any(point.apply_j('xi')))

    def test_non_vertical_tangent(self):
        point = point_for('2')
        with self.assertRaises(NotVertical):
            point.tangent('A1', np.eye(4))


class StructureTests(SimpleTestCase):
    def setUp(self):
        self.point = point_for('3a', J=sample_fiber(2, 3, 4)[2])
        self.V = vertical_basis(self.point.j, self.point.omega)[1]

    def test_phi_cubed(self):
        tangent = self.point.tangent(np.array([1.0, -2.0, 0.5, 3.0, 1.0]), self.V)
        for k in (1, 2):
            once = phi(self.point, tangent, k)
            thrice = phi(self.point, phi(self.point, once, k), k)
            np.testing.assert_allclose(thrice.horizontal, -once.horizontal, atol=1e-9)
            np.testing.assert_allclose(thrice.vertical, -once.vertical, atol=1e-9)
        with self.assertRaises(ValueError):
            phi(self.point, tangent, 3)

    def test_metric(self):
        xi = self.point.tangent('xi')
        vertical = self.point.tangent(vertical=self.V)
        self.assertAlmostEqual(metric_gt(self.point, xi, xi, 2.0), 1.0)
        self.assertAlmostEqual(metric_gt(self.point, vertical, vertical, 2.0), 2.0)
        self.assertAlmostEqual(metric_gt(self.point, xi, vertical, 2.0), 0.0)
        a1 = self.point.tangent('A1')
        self.assertGreater(metric_gt(self.point, a1, a1, 1.0), 0)
        with self.assertRaises(NonPositiveT):
            metric_gt(self.point, xi, xi, 0)

    def test_levi_form_and_d_eta(self):
        point = point_for('2')
        a1, a2 = point.tangent('A1'), point.tangent('A2')
        self.assertAlmostEqual(levi_form(point, a2, a1), -1.0)
        self.assertAlmostEqual(d_eta(point, a2, a1), 1.0)
        vertical = point.tangent(vertical=vertical_basis(point.j, point.omega)[0])
        self.assertEqual(levi_form(point, a1, vertical), 0.0)
        with self.assertRaises(NotInE):
            levi_form(point, point.tangent('xi'), a1)
        with self.assertRaises(NonPositiveT):
            d_eta(point, a1, a2, t=-1.0)

    def test_levi_form_is_phi_invariant(self):
        base = point_for('3b')
        rng = np.random.default_rng(7)
        for J in sample_fiber(2, 100, 7):
            point = TwistorPoint.at(base.model, None, J, curvature=base.curvature)
            V = vertical_basis(point.j, point.omega)
            t1, t2 = (point.tangent(padded(rng.uniform(-1, 1, 4)),
                                    rng.uniform(-1, 1) * V[rng.integers(len(V))].matrix)
                      for _ in range(2))
            expected = levi_form(point, t1, t2)
            tolerance = 1e-9 * (1 + np.abs(point.j).max()) ** 2
            for k in (1, 2):
                self.assertLess(abs(levi_form(point, phi(point, t1, k), phi(point, t2, k)) - expected),
                                tolerance)

    def test_levi_form_scales_with_s(self):
        point = point_for('2', s=2)
        self.assertAlmostEqual(levi_form(point, point.tangent('A2'), point.tangent('A1')), -2.0)


class NormalityTensorTests(SimpleTestCase):
    def test_mixed_term(self):
        point = point_for('2')
        F = adapted_basis(point.j, point.omega)
        V = unnormalized_generators(point.j, point.omega)[(0, 1)]
        np.testing.assert_allclose(n1_mixed(point, padded(F[:, 0]), V, 2), -2 * padded(F[:, 1]), atol=1e-12)
        normalized = vertical_basis(point.j, point.omega)[1]
        np.testing.assert_allclose(n1_mixed(point, padded(F[:, 0]), normalized, 2), -padded(F[:, 1]),
                                   atol=1e-12)
        self.assertFalse(np.any(n1_mixed(point, padded(F[:, 0]), V, 1)))

    def test_vertical_pairs_vanish(self):
        point = point_for('3b')
        V = vertical_basis(point.j, point.omega)
        self.assertFalse(np.any(n1_vertical(point, V[0], V[1], 1)))

    def test_example3a_horizontal_pairs(self):
        for J in sample_fiber(2, 4, 1):
            point = point_for('3a', J=J)
            self.assertLess(distribution_defect(point), 1e-9)

    def test_example3b_reeb_pairs_vanish(self):
        point = point_for('3b', J=sample_fiber(2, 2, 0)[1])
        frame = np.eye(point.dimension)
        for i in range(point.rank):
            self.assertLess(np.abs(n1_horizontal(point, frame[i], frame[point.rank], 1).matrix).max(), 1e-9)

    def test_cr_tensor_on_horizontal_pairs(self):
        point = point_for('3b')
        a1, a2 = point.tangent('A1'), point.tangent('A2')
        value = cr_nijenhuis(point, a1, a2, 1)
        np.testing.assert_allclose(value.vertical, n1_horizontal(point, 'A1', 'A2', 1).matrix)
        self.assertFalse(np.any(value.horizontal))

    def test_j_minus_defect_matches_distribution_tensor(self):
        bases = {which: load_example(which)[:2] for which in ('2', '3a', '3b')}
        rng = random.Random(2)
        for index, J in enumerate(sample_fiber(2, 100, 2)):
            model, gamma = bases[('3a', '3b', '2')[index % 3]]
            if index % 2:
                gamma = deform(model, gamma, random_deformation(model, rng))
            point = TwistorPoint.at(model, gamma, J)
            tolerance = 1e-9 * (1 + np.abs(point.j).max()) ** 4
            self.assertEqual(distribution_defect(point) < tolerance, j_minus_defect(point) < tolerance, index)

    def test_endo_curvature(self):
        point = point_for('3b')
        e = np.eye(point.dimension)
        self.assertFalse(np.any(endo_curvature(point.curvature, e[0], e[1], np.eye(4))))
        np.testing.assert_allclose(endo_curvature(point.curvature, e[0], e[point.rank], point.j), 0, atol=1e-12)
        flat = point_for('2')
        self.assertFalse(np.any(endo_curvature(flat.curvature, e[0], e[1], flat.j)))


class ScanTests(SimpleTestCase):
    def test_flat_example2(self):
        model, gamma, _ = load_example('2')
        report = normality_scan(model, gamma, 1, samples=25)
        self.assertEqual((report.distribution_max, report.reeb_max, report.mixed_max), (0.0, 0.0, 0.0))
        self.assertTrue(report.normal)
        self.assertGreater(report.threshold, 0)

    def test_phi2_is_never_normal(self):
        model, gamma, _ = load_example('2')
        report = normality_scan(model, gamma, 2, samples=1)
        self.assertGreater(report.mixed_max, 1.0)
        self.assertFalse(report.normal)
        self.assertEqual(report.witnesses['mixed'][0], 0)
        for which in ('2', '3a', '3b'):
            model, gamma, _ = load_example(which)
            report = normality_scan(model, gamma, 2, samples=25)
            self.assertGreater(report.mixed_max, 1.0, which)
            self.assertFalse(report.normal, which)

    def test_example3a_is_normal(self):
        model, gamma, _ = load_example('3a')
        report = normality_scan(model, gamma, 1, samples=25)
        self.assertTrue(report.normal)
        self.assertTrue(report.cr_integrable)

    def test_example3b_is_not_cr_integrable(self):
        model, gamma, _ = load_example('3b')
        report = normality_scan(model, gamma, 1, samples=25)
        self.assertLess(report.reeb_max, report.threshold)
        self.assertGreater(report.distribution_max, report.threshold)
        self.assertFalse(report.cr_integrable)
        self.assertFalse(report.normal)
        sample, x, y = report.witnesses['distribution']
        self.assertNotIn('xi', (x, y))

    def test_agrees_with_classification_on_random_deformations(self):
        rng = random.Random(5)
        for which in ('2', '3a', '3b'):
            model, base, _ = load_example(which)
            for index in range(100):
                gamma = deform(model, base, random_deformation(model, rng))
                verdict = curvature_report(model, gamma).classification
                report = normality_scan(model, gamma, 1, samples=25, seed=index)
                self.assertEqual((report.normal, report.cr_integrable),
                                 (verdict.normal_phi1, verdict.cr1_integrable), (which, index))

    def test_report_section_is_json(self):
        model, gamma, _ = load_example('3b')
        report = normality_scan(model, gamma, 1, samples=3)
        self.assertIs(type(report.normal), bool)
        self.assertIs(type(report.cr_integrable), bool)
        self.assertIs(type(report.threshold), float)
        section = json.loads(json.dumps(reports.scan_section(report, t=1.0)))
        self.assertIs(section['cr_integrable'], False)

    def test_threads_agree(self):
        model, gamma, _ = load_example('3b')
        serial = normality_scan(model, gamma, 1, samples=4, workers=1)
        threaded = normality_scan(model, gamma, 1, samples=4, workers=3)
        self.assertEqual(serial.distribution_max, threaded.distribution_max)
        self.assertEqual(serial.witnesses, threaded.witnesses)

    def test_invalid_k(self):
        model, gamma, _ = load_example('2')
        with self.assertRaises(ValueError):
            normality_scan(model, gamma, 0, samples=1)
        with self.assertRaises(ValueError):
            normality_scan(model, gamma, 1, samples=0)
