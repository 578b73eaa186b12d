from django.core.exceptions import ValidationError

from futaki.invariants import asymptotic_consistency_check

from ...serializers import convex_function_from_document, rationals
from ..base import ToricCommand


class Command(ToricCommand):
    help = 'Compare the m^n coefficient of the margin of -h with the log Futaki invariant.'
    report_name = 'futaki-consistency'
    documents = ('h',)

    def add_job_arguments(self, parser):
        parser.add_argument('--h', help='PL-function file with the values of a convex h')
        parser.add_argument('--k', type=int, help='crease scale (default: the scale of h)')
        parser.add_argument('--imax', type=int, help='number of scales m = k, 2k, ..')

    def run_job(self, job, report):
        P, divisors = job.polytope, list(job.divisors)
        h = convex_function_from_document(P, job.documents['h'])
        try:
            check = asymptotic_consistency_check(
                P, divisors, h, job.option('k', h.scale), job.option('imax'),
            )
        except ValueError as exc:
            raise ValidationError(f"imax: {exc}")
        report.results = {
            'k': check.k,
            'samples': [{'m': m, 'margin': value} for m, value in check.samples],
            'coefficients': rationals(check.coefficients),
            'extracted': check.extracted,
            'subleading': check.subleading,
            'log_futaki_toric': check.log_futaki,
            'expected': check.expected,
            'result': 'PASS' if check.passed else 'FAIL',
        }
