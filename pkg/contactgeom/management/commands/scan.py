from contactgeom import conf, reports
from contactgeom.curvature import curvature_report
from contactgeom.exceptions import BadParameter, NonPositiveT
from contactgeom.twistor import normality_scan

from ._base import ContactCommand, PropertyFailed


class Command(ContactCommand):
    help = 'Sample twistor fibres and cross-check the normality tensor against the classification'

    def add_arguments(self, parser):
        parser.add_argument('path', type=str, help='Path to the model document (.json)')
        parser.add_argument('--k', type=int, choices=(1, 2), default=1, help='Structure Phi_k to scan (default: 1)')
        parser.add_argument('--samples', type=int, default=None, help='Fibre points per scan (default: SCAN_SAMPLES)')
        parser.add_argument('--seed', type=int, default=0, help='Sampling seed (default: 0)')
        parser.add_argument('--t', type=float, default=1.0, help='Fibre scaling of G_t (default: 1.0)')
        super().add_arguments(parser)

    def run(self, *args, **options):
        if options['t'] <= 0:
            raise NonPositiveT(f't must be positive, got {options["t"]}')
        samples = conf.get('SCAN_SAMPLES') if options['samples'] is None else options['samples']
        if samples <= 0:
            raise BadParameter(f'--samples must be positive, got {samples}')
        loaded = self.load(options['path'])
        verdict = curvature_report(loaded.model, loaded.gamma).classification
        scan = normality_scan(loaded.model, loaded.gamma, options['k'], samples=samples, seed=options['seed'])

        report = self.base_report(loaded)
        report['classification'] = reports.classification_section(verdict)
        report['scan'] = reports.scan_section(scan, t=options['t'])
        self.emit(report, summary=f'{loaded.model.name}: scan k={scan.k} normal={scan.normal} '
                                  f'cr_integrable={scan.cr_integrable}')

        if scan.k == 1 and (scan.normal != verdict.normal_phi1 or scan.cr_integrable != verdict.cr1_integrable):
            raise PropertyFailed(f'{loaded.model.name}: scan disagrees with the classification')
        if scan.k == 2 and scan.normal:
            raise PropertyFailed(f'{loaded.model.name}: Phi_2 scanned as normal')
