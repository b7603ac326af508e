from contactgeom import documents, reports
from contactgeom.corpus import STAGES, WHICH, example
from contactgeom.exceptions import BadParameter
from contactgeom.rational import parse_rational

from ._base import ContactCommand


def _parameter(text):
    name, sep, value = text.partition('=')
    if not sep or not name:
        raise BadParameter(f'expected name=value, got {text!r}')
    return name.strip(), parse_rational(value, f'--param {name.strip()}')


class Command(ContactCommand):
    help = 'Emit a built-in worked example as a model document'

    def add_arguments(self, parser):
        parser.add_argument('--which', choices=WHICH, required=True, help='Example to emit')
        parser.add_argument('--s', type=str, default='1',
                            help='Nonzero rational parameter s; write negative values as --s=-1/2 (default: 1)')
        parser.add_argument('--stage', choices=STAGES, default=None,
                            help='Example 2 table: prime, tilde, deformation or flat (default: flat)')
        parser.add_argument('--param', action='append', default=[],
                            help='Example 1 family parameter as name=value (repeatable)')
        parser.add_argument('--emit', type=str, default=None, help='Write the document here instead of stdout')
        super().add_arguments(parser)

    def run(self, *args, **options):
        if options['stage'] and options['which'] != '2':
            raise BadParameter('--stage only applies to example 2')
        if options['param'] and options['which'] != '1':
            raise BadParameter('--param only applies to example 1')
        params = dict(_parameter(text) for text in options['param'])
        document = example(options['which'], s=parse_rational(options['s'], '--s'),
                           stage=options['stage'], params=params)
        text = documents.dumps(document)

        if options['emit']:
            with open(options['emit'], 'w', encoding='utf-8') as handle:
                handle.write(text)
            self.stdout.write(self.style.SUCCESS(f'Wrote {document.name} to {options["emit"]}'))
        elif not self.report_path:
            self.stdout.write(text, ending='')

        if self.report_path:
            model = documents.build(document)
            report = reports.new_report()
            report['model'] = reports.model_section(model)
            self.emit(report)
