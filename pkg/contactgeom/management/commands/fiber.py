from contactgeom import reports
from contactgeom.exceptions import BadParameter
from contactgeom.fiber import verify_siegel_model

from ._base import ContactCommand, PropertyFailed


class Command(ContactCommand):
    help = 'Siegel model diagnostics: tangency, G = 2H and holomorphy of Z -> J(Z)'

    def add_arguments(self, parser):
        parser.add_argument('--n', type=int, default=2, help='Half the rank of D (default: 2)')
        parser.add_argument('--samples', type=int, default=100, help='Random Siegel points (default: 100)')
        parser.add_argument('--seed', type=int, default=0, help='Sampling seed (default: 0)')
        super().add_arguments(parser)

    def run(self, *args, **options):
        if options['n'] < 1 or options['samples'] < 1:
            raise BadParameter('--n and --samples must be positive')
        diagnostics = verify_siegel_model(options['n'], options['samples'], options['seed'])
        report = reports.new_report()
        report['fiber'] = reports.fiber_section(diagnostics)
        self.emit(report, summary=f'Siegel model n={diagnostics.n}: passed={diagnostics.passed}')
        if not diagnostics.passed:
            raise PropertyFailed(f'Siegel model checks fail for n={diagnostics.n}')
