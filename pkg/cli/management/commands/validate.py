from geometry.lattice import lattice_count
from geometry.polytope import is_delzant, is_reflexive

from ...serializers import divisors_to_entries
from ..base import ToricCommand


class Command(ToricCommand):
    help = 'Check a polytope file and describe the polytope it defines.'
    report_name = 'validate'

    def run_job(self, job, report):
        P = job.polytope
        report.results = {
            'dim': P.dim,
            'facet_count': P.facet_count,
            'halfspaces': [str(h) for h in P.halfspaces],
            'vertices': [[int(x) for x in v] for v in P.vertices],
            'delzant': is_delzant(P).is_delzant,
            'reflexive': is_reflexive(P),
            'lattice_points': lattice_count(P, 1),
            'divisors': divisors_to_entries(job.divisors),
        }
