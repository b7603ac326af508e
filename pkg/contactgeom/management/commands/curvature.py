from contactgeom import reports
from contactgeom.curvature import curvature_identities, curvature_report

from ._base import ContactCommand, PropertyFailed


class Command(ContactCommand):
    help = 'Curvature, R_D, Ricci tensor and Ricci-type residual of the (repaired) connection'

    def add_arguments(self, parser):
        parser.add_argument('path', type=str, help='Path to the model document (.json)')
        super().add_arguments(parser)

    def run(self, *args, **options):
        loaded = self.load(options['path'])
        result = curvature_report(loaded.model, loaded.gamma)
        identities = curvature_identities(loaded.model, result.curvature)

        report = self.base_report(loaded)
        report['curvature'] = reports.curvature_section(loaded.model, result, identities)
        self.emit(report, summary=f'{loaded.model.name}: flat={result.classification.is_flat} '
                                  f'ricci_type={result.ricci_verdict.ricci_type}')

        broken = [name for name, failures in identities.items() if failures]
        if broken:
            raise PropertyFailed(f'{loaded.model.name}: curvature identities fail: {", ".join(broken)}')
