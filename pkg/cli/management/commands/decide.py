from toricstab.exceptions import TooLarge

from stability.decide import decide_semistable
from stability.margin import margin

from ...serializers import envelope_from_document, pl_function_to_document, rationals
from ..base import ToricCommand


def verdict_results(verdict):
    return {
        'i': verdict.scale,
        'decision': verdict.decision,
        'mode': verdict.mode_label,
        'certified': verdict.certified,
        'minimum': verdict.minimum,
        'q': rationals(verdict.q),
        'vertex': None if verdict.vertex is None else rationals(verdict.vertex),
        'witness': None if verdict.witness is None else pl_function_to_document(verdict.witness),
        'hint': verdict.hint,
        'samples': verdict.samples,
        'cuts': verdict.cuts,
    }


class Command(ToricCommand):
    help = 'Decide T_iP-semistability at scale i.'
    report_name = 'decide'
    optional_documents = ('g',)

    def add_job_arguments(self, parser):
        parser.add_argument('--i', type=int, default=1, help='lattice scale (default 1)')
        parser.add_argument('--mode', choices=['linear', 'exact', 'sampled'], default='linear')
        parser.add_argument('--seed', type=int)
        parser.add_argument('--samples', type=int)
        parser.add_argument('--max-constraints', type=int)
        parser.add_argument('--g', help='also report the margin of this PL-function file')

    def run_job(self, job, report):
        P, divisors, i = job.polytope, list(job.divisors), job.option('i', 1)
        try:
            verdict = decide_semistable(
                P, divisors, i,
                mode=job.option('mode'),
                seed=job.option('seed'),
                samples=job.option('samples'),
                max_constraints=job.option('max_constraints'),
            )
        except TooLarge as exc:
            if exc.partial is not None:
                report.results = dict(verdict_results(exc.partial), partial=True)
                for message in exc.partial.warnings:
                    report.warn(message)
                report.warn(f"exact mode gave up ({exc}); partial result is not a certificate")
                self.emit(report, job.format)
            raise
        report.results = verdict_results(verdict)
        for message in verdict.warnings:
            report.warn(message)
        if not verdict.certified:
            report.warn(f"{verdict.mode_label} result is not a certificate")
        if 'g' in job.documents:
            g = envelope_from_document(P, job.documents['g'])
            report.results['margin_of_g'] = margin(P, divisors, i, g)
