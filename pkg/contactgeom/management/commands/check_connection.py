from contactgeom import reports
from contactgeom.connection import verify_axioms

from ._base import ContactCommand, PropertyFailed


class Command(ContactCommand):
    help = ('Check the contact axioms and nabla omega = 0 for a model document, with the repair ledger. '
            'This is the check command; Django reserves the name check for its system checks')

    def add_arguments(self, parser):
        parser.add_argument('path', type=str, help='Path to the model document (.json)')
        super().add_arguments(parser)

    def run(self, *args, **options):
        loaded = self.load(options['path'])
        table = loaded.raw if loaded.raw is not None else loaded.gamma
        axioms = verify_axioms(loaded.model, table)

        report = self.base_report(loaded)
        report['connection'] = loaded.source
        report['axioms'] = reports.axioms_section(axioms)
        report['repaired'] = reports.table_section(loaded.model, loaded.gamma)
        self.emit(report, summary=f'{loaded.model.name}: axioms {"pass" if axioms.passed else "fail"}')

        if not axioms.passed:
            failed = ', '.join(name for name, ok in axioms.statuses if not ok)
            raise PropertyFailed(f'{loaded.model.name}: failed axioms: {failed}')
        if not axioms.implication_holds:
            raise PropertyFailed(f'{loaded.model.name}: axioms pass but nabla omega != 0')
