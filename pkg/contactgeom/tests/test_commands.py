import json
import os
import tempfile
from io import StringIO

from django.core.management import call_command, load_command_class
from django.core.management.base import CommandError
from django.test import SimpleTestCase


class CommandTestCase(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def path(self, name):
        return os.path.join(self.tmp.name, name)

    def call(self, *args):
        out = StringIO()
        call_command(*args, stdout=out, stderr=StringIO())
        return out.getvalue()

    def emit_example(self, which, *extra):
        path = self.path(f'example{which}.json')
        self.call('examples', '--which', which, '--emit', path, *extra)
        return path

    def report(self, command, *args):
        path = self.path(f'{command}-report.json')
        self.call(command, *args, '--report', path)
        return self.read(path)

    def read(self, path):
        with open(path, encoding='utf-8') as handle:
            return json.load(handle)

    def assertExitCode(self, code, *args):
        with self.assertRaises(CommandError) as caught:
            self.call(*args)
        self.assertEqual(caught.exception.returncode, code)
        return caught.exception


class ExamplesCommandTests(CommandTestCase):
    def test_stdout_document(self):
        data = json.loads(self.call('examples', '--which', '1', '--param', 'b1=2', '--param', 'd2=1/2'))
        self.assertEqual(data['parameters']['b1'], '2')
        self.assertEqual(data['parameters']['a2'], '-1/2')

    def test_emit(self):
        path = self.path('model.json')
        out = self.call('examples', '--which', '2', '--s=-1/2', '--stage', 'deformation', '--emit', path)
        self.assertIn('Wrote example2-deformation', out)
        self.assertEqual(self.read(path)['parameters'], {'s': '-1/2'})

    def test_model_report(self):
        report = self.report('examples', '--which', '3a', '--s', '2')
        self.assertEqual(report['model']['reeb'], ['1/2', '0', '0', '0', '0'])
        self.assertEqual(report['tool']['name'], 'contwist')

    def test_bad_options(self):
        self.assertExitCode(2, 'examples', '--which', '1', '--stage', 'flat')
        self.assertExitCode(2, 'examples', '--which', '2', '--param', 'b1=1')
        self.assertExitCode(2, 'examples', '--which', '1', '--param', 'b1')
        self.assertExitCode(2, 'examples', '--which', '2', '--s', '0')
        self.assertExitCode(2, 'examples', '--which', '2', '--s', 'half')


class CheckConnectionCommandTests(CommandTestCase):
    def test_valid_connection(self):
        report = self.report('check_connection', self.emit_example('3a'))
        self.assertTrue(report['axioms']['passed'])
        self.assertEqual(report['ledger'], [])
        self.assertEqual(report['connection'], 'document')

    def test_printed_table_fails(self):
        path = self.emit_example('2', '--stage', 'tilde')
        report_path = self.path('report.json')
        self.assertExitCode(1, 'check_connection', path, '--report', report_path)
        report = self.read(report_path)
        self.assertFalse(report['axioms']['statuses']['reeb_parallel'])
        self.assertEqual({e['reason'] for e in report['ledger']}, {'symbol', 'reeb_parallel', 'consensus'})

    def test_garbage_document(self):
        path = self.path('garbage.json')
        with open(path, 'w', encoding='utf-8') as handle:
            handle.write('{"name": "x", "dimension": "three"}')
        error = self.assertExitCode(2, 'check_connection', path)
        self.assertIn('$.dimension', str(error))
        self.assertExitCode(2, 'check_connection', self.path('missing.json'))

    def test_help_names_the_check_command(self):
        self.assertIn('check command', load_command_class('contactgeom', 'check_connection').help)


class CurvatureCommandTests(CommandTestCase):
    def test_curvature_report(self):
        report = self.report('curvature', self.emit_example('3b'))
        section = report['curvature']
        self.assertFalse(section['ricci_type'])
        self.assertTrue(section['reeb_flat'])
        self.assertTrue(all(section['identities'].values()))
        self.assertEqual(section['convention'], 'R(X,Y) = nabla_[X,Y] - [nabla_X, nabla_Y]')

    def test_classify(self):
        report = self.report('classify', self.emit_example('3a'))
        self.assertTrue(report['classification']['normal_phi1'])
        self.assertFalse(report['classification']['normal_phi2'])
        report = self.report('classify', self.emit_example('1'))
        self.assertFalse(report['classification']['xi_h_killing'])
        report = self.report('classify', self.emit_example('2'))
        self.assertTrue(report['classification']['is_flat'])


class ScanCommandTests(CommandTestCase):
    def test_scan_agrees_with_classification(self):
        report = self.report('scan', self.emit_example('3b'), '--samples', '3')
        self.assertFalse(report['scan']['cr_integrable'])
        self.assertFalse(report['classification']['cr1_integrable'])

    def test_phi2(self):
        report = self.report('scan', self.emit_example('2'), '--k', '2', '--samples', '2')
        self.assertFalse(report['scan']['normal'])

    def test_non_positive_t(self):
        self.assertExitCode(2, 'scan', self.emit_example('2'), '--t', '0')

    def test_non_positive_samples(self):
        path = self.emit_example('2')
        self.assertExitCode(2, 'scan', path, '--samples', '0')
        self.assertExitCode(2, 'scan', path, '--samples', '-3')

    def test_report_is_written(self):
        report_path = self.path('scan.json')
        self.call('scan', self.emit_example('3a'), '--samples', '2', '--report', report_path)
        self.assertIs(self.read(report_path)['scan']['normal'], True)


class SolveCommandTests(CommandTestCase):
    def test_flat_document(self):
        report = self.report('solve', self.emit_example('2'), '--restarts', '2')
        self.assertTrue(report['solver']['exact'])
        self.assertEqual(report['solver']['restart_index'], 0)
        self.assertEqual(report['connection'], [
            {'x': 'A4', 'y': 'A1', 'result': {'A1': '-1'}},
            {'x': 'A4', 'y': 'A2', 'result': {'A2': '1'}},
        ])

    def test_no_convergence(self):
        report_path = self.path('report.json')
        self.assertExitCode(3, 'solve', self.emit_example('1'), '--restarts', '2',
                            '--max-iterations', '20', '--report', report_path)
        self.assertFalse(self.read(report_path)['solver']['exact'])


class FiberCommandTests(CommandTestCase):
    def test_siegel_diagnostics(self):
        report = self.report('fiber', '--n', '1', '--samples', '5')
        self.assertTrue(report['fiber']['tangent_ok'])
        self.assertTrue(report['fiber']['holomorphic_ok'])
        self.assertEqual(report['fiber']['holomorphy_sign'], -1)

    def test_bad_rank(self):
        self.assertExitCode(2, 'fiber', '--n', '0')
