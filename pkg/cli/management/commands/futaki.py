from futaki.invariants import log_futaki_from_expansions, log_futaki_toric

from ...serializers import convex_function_from_document
from ..base import ToricCommand


class Command(ToricCommand):
    help = 'Toric log Futaki invariant of a convex PL function.'
    report_name = 'futaki'
    documents = ('h',)

    def add_job_arguments(self, parser):
        parser.add_argument('--h', help='PL-function file with the values of a convex h')

    def run_job(self, job, report):
        P, divisors = job.polytope, list(job.divisors)
        h = convex_function_from_document(P, job.documents['h'])
        value = log_futaki_toric(P, divisors, h)
        expansion = log_futaki_from_expansions(P, divisors, h)
        if value > 0:
            direction = 'positive: this test configuration destabilizes the pair'
        else:
            direction = 'nonpositive: consistent with log K-semistability for this h'
        report.results = {
            'scale': h.scale,
            'bound': h.bound,
            'log_futaki_toric': value,
            'from_expansions': expansion,
            'identity_holds': expansion == -value,
            'direction': direction,
        }
