"""
Shared plumbing for the toolkit commands: model loading, report output and
the mapping from domain failures to exit codes.
"""
import logging

from django.core.management.base import BaseCommand, CommandError

from contactgeom import documents, reports
from contactgeom.connection import base_connection, repair_connection
from contactgeom.exceptions import ContactGeometryError, DocumentError, NoConvergence

logger = logging.getLogger('contactgeom.commands')

PROPERTY_FAILED = 1
INVALID_INPUT = 2
NOT_CONVERGED = 3


class PropertyFailed(Exception):
    """A mathematical check failed after the report was written."""


class Loaded:
    """A parsed document with its model, raw table and repaired table."""

    def __init__(self, path):
        self.document = documents.load(path)
        self.model = documents.build(self.document)
        self.raw, self.symbols = documents.connection_table(self.model, self.document)
        if self.raw is None:
            self.gamma, self.repairs = base_connection(self.model), ()
            self.source = 'base'
        else:
            self.gamma, self.repairs = repair_connection(self.model, self.raw)
            self.source = 'document'

    @property
    def ledger(self):
        return tuple(self.symbols) + tuple(self.repairs)


class ContactCommand(BaseCommand):
    """BaseCommand with --report and exit-code translation; subclasses implement run()."""

    def add_arguments(self, parser):
        parser.add_argument('--report', type=str, help='Write the JSON report to this path instead of stdout')

    def handle(self, *args, **options):
        self.report_path = options.get('report')
        try:
            self.run(*args, **options)
        except PropertyFailed as exc:
            raise CommandError(str(exc), returncode=PROPERTY_FAILED) from exc
        except NoConvergence as exc:
            raise CommandError(str(exc), returncode=NOT_CONVERGED) from exc
        except DocumentError as exc:
            raise CommandError(f'Invalid document: {exc}', returncode=INVALID_INPUT) from exc
        except ContactGeometryError as exc:
            raise CommandError(f'Invalid input: {exc}', returncode=INVALID_INPUT) from exc

    def run(self, *args, **options):
        raise NotImplementedError

    def load(self, path):
        loaded = Loaded(path)
        logger.info('loaded %s from %s (%s connection)', loaded.model.name, path, loaded.source)
        return loaded

    def base_report(self, loaded):
        report = reports.new_report()
        report['model'] = reports.model_section(loaded.model)
        report['ledger'] = reports.ledger_section(loaded.ledger)
        return report

    def emit(self, report, summary=None):
        text = reports.render(report)
        if self.report_path:
            with open(self.report_path, 'w', encoding='utf-8') as handle:
                handle.write(text)
            if summary:
                self.stdout.write(summary)
            self.stdout.write(f'Report written to {self.report_path}')
        else:
            self.stdout.write(text, ending='')
