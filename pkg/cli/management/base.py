"""Shared plumbing for the toolkit's management commands."""
import logging

from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

from toricstab.exceptions import ToricStabError

from geometry.polytope import is_delzant

from ..jobs import JobSpec
from ..reports import Report

logger = logging.getLogger(__name__)


class ToricCommand(BaseCommand):
    """
    Load the job, run it, print the report.

    Subclasses set ``report_name``, may list ``documents`` and
    ``optional_documents`` (options holding paths to extra JSON inputs),
    add their own options in ``add_job_arguments`` and implement
    ``run_job(job, report)``.
    """

    requires_system_checks = []
    report_name = None
    documents = ()
    optional_documents = ()

    def add_arguments(self, parser):
        parser.add_argument('--polytope', help='polytope JSON file')
        parser.add_argument('--fixture', help='built-in polytope instead of --polytope')
        parser.add_argument('--divisors', help='divisor JSON file or inline JSON list')
        parser.add_argument('--format', choices=['text', 'json'], default='text')
        self.add_job_arguments(parser)

    def add_job_arguments(self, parser):
        pass

    def handle(self, *args, **options):
        try:
            job = JobSpec.from_options(
                self.report_name, options, self.documents, self.optional_documents,
            )
            report = Report.for_job(job)
            for message in is_delzant(job.polytope).warnings:
                report.warn(message)
            self.run_job(job, report)
        except ToricStabError as exc:
            logger.info("command failed command=%s exit_code=%d", self.report_name, exc.exit_code)
            raise CommandError(str(exc), returncode=exc.exit_code)
        except ValidationError as exc:
            raise CommandError('; '.join(exc.messages), returncode=2)
        self.emit(report, job.format)

    def emit(self, report, format):
        self.stdout.write(report.render(format), ending='')

    def run_job(self, job, report):
        raise NotImplementedError('subclasses of ToricCommand must provide a run_job() method')
