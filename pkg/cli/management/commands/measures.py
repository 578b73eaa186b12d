from measures.integrals import measure_report

from ...serializers import rationals
from ..base import ToricCommand


class Command(ToricCommand):
    help = 'Exact volume, moment, barycenter and facet measures of P.'
    report_name = 'measures'

    def run_job(self, job, report):
        m = measure_report(job.polytope)
        report.results = {
            'volume': m.volume,
            'moment': rationals(m.moment),
            'barycenter': rationals(m.barycenter),
            'boundary_volume': m.boundary_volume,
            'facets': [
                {'index': f.index, 'volume': f.volume, 'moment': rationals(f.moment)}
                for f in m.facets
            ],
        }
