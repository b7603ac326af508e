from contactgeom import reports
from contactgeom.curvature import curvature_report

from ._base import ContactCommand


class Command(ContactCommand):
    help = 'Normality, CR integrability and Killing verdicts for the twistor structures'

    def add_arguments(self, parser):
        parser.add_argument('path', type=str, help='Path to the model document (.json)')
        super().add_arguments(parser)

    def run(self, *args, **options):
        loaded = self.load(options['path'])
        result = curvature_report(loaded.model, loaded.gamma)

        report = self.base_report(loaded)
        report['curvature'] = reports.curvature_section(loaded.model, result)
        report['classification'] = reports.classification_section(result.classification)
        verdict = result.classification
        self.emit(report, summary=(
            f'{loaded.model.name}: normal_phi1={verdict.normal_phi1} '
            f'cr1_integrable={verdict.cr1_integrable} xi_h_killing={verdict.xi_h_killing}'
        ))
