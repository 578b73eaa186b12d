from django.core.exceptions import ValidationError

from toricstab.exceptions import VerificationFailed

from obstruction.oracle import hirzebruch_printed_audit, interval_convention_audit, oracle_q_vector
from obstruction.q import asymptotic_verdict, q_polynomial, q_vector

from ...fixtures import load_fixture
from ...serializers import rationals
from ..base import ToricCommand


class Command(ToricCommand):
    help = 'The obstruction vector Q_i at one scale, or as a polynomial in i.'
    report_name = 'q'

    def add_job_arguments(self, parser):
        parser.add_argument('--i', type=int, help='lattice scale')
        parser.add_argument('--poly', action='store_true', help='report Q as a polynomial in i')

    def run_job(self, job, report):
        P, divisors = job.polytope, list(job.divisors)
        i = job.option('i')
        if (i is None) != bool(job.option('poly')):
            raise ValidationError('i: give exactly one of --i K and --poly')
        if i is not None:
            q = q_vector(P, divisors, i)
            report.results = {'i': i, 'q': rationals(q), 'vanishes': not any(q)}
            if P.dim <= 2:
                if oracle_q_vector(P, divisors, i) != q:
                    raise VerificationFailed(f"Q_{i} disagrees with the brute-force oracle")
                report.results['oracle_agrees'] = True
        else:
            poly = q_polynomial(P, divisors)
            verdict = asymptotic_verdict(P, divisors, poly)
            zeros = poly.integer_zeros()
            report.results = {
                'polynomial': poly.render(),
                'degree': poly.degree,
                'coefficients': [rationals(c) for c in poly.coefficients()],
                'integer_zeros': None if zeros is None else sorted(zeros),
                'verdict': verdict.label,
                'witness_i': verdict.witness,
            }
            if P.dim <= 2:
                nodes = range(1, P.dim + 4)
                if any(oracle_q_vector(P, divisors, k) != poly(k) for k in nodes):
                    raise VerificationFailed("Q polynomial disagrees with the brute-force oracle")
                report.results['oracle_agrees'] = True
            if (P, divisors) == load_fixture('hirzebruch1'):
                rows, label = hirzebruch_printed_audit(P, divisors)
                report.results['printed_comparison'] = [
                    {'i': k, 'oracle': rationals(value), 'printed': printed}
                    for k, value, printed in rows
                ]
                report.results['printed_verdict_reproduced'] = label == verdict.label
        if P.dim == 1:
            report.results['interval_audit'] = interval_convention_audit().note
