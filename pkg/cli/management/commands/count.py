from geometry.lattice import lattice_count

from ..base import ToricCommand


class Command(ToricCommand):
    help = 'Count the lattice points of P ∩ (Z/i)^n.'
    report_name = 'count'

    def add_job_arguments(self, parser):
        parser.add_argument('--i', type=int, default=1, help='lattice scale (default 1)')

    def run_job(self, job, report):
        i = job.option('i', 1)
        report.results = {'i': i, 'count': lattice_count(job.polytope, i)}
