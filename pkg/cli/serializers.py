"""
JSON encoding of exact results and decoding of input documents.

Every rational crossing the file boundary is a canonical ``"p/q"`` string.
"""
import hashlib
import json
from fractions import Fraction

from django.core.exceptions import ValidationError
from django.core.serializers.json import DjangoJSONEncoder

from envelope.functions import concave_envelope, lattice_function
from futaki.invariants import convex_pl_function
from geometry.polytope import hull_of_vertices, vertices_from_halfspaces
from geometry.rationals import format_rational
from obstruction.q import DivisorSpec, validate_divisors

from .forms import DivisorForm, PLFunctionFileForm, PolytopeFileForm


class RationalJSONEncoder(DjangoJSONEncoder):
    """DjangoJSONEncoder that writes Fractions as ``"p/q"``."""

    def default(self, o):
        if isinstance(o, Fraction):
            return format_rational(o)
        return super().default(o)


def to_json(data):
    return json.dumps(data, cls=RationalJSONEncoder, sort_keys=True, indent=2)


def inputs_digest(data):
    """SHA-256 of the canonical compact JSON of ``data``."""
    canonical = json.dumps(data, cls=RationalJSONEncoder, sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()


def validated(form, prefix=''):
    """
    Return ``form.cleaned_data`` or raise a ValidationError naming every
    offending field.
    """
    if form.is_valid():
        return form.cleaned_data
    messages = []
    for field, errors in sorted(form.errors.items()):
        name = 'document' if field == '__all__' else field
        for error in errors:
            messages.append(f"{prefix}{name}: {error}")
    raise ValidationError('; '.join(messages))


def rationals(values):
    """Format a tuple of Fractions for a report."""
    return [format_rational(v) for v in values]


def divisors_from_entries(entries):
    if not isinstance(entries, list):
        raise ValidationError('divisors: must be a list of {"facet_index", "beta"} entries')
    divisors = []
    for k, entry in enumerate(entries):
        if not isinstance(entry, dict):
            raise ValidationError(f'divisors[{k}]: must be an object')
        data = validated(DivisorForm(data=entry), prefix=f'divisors[{k}].')
        divisors.append(DivisorSpec(data['facet_index'], data['beta']))
    return divisors


def polytope_from_document(document):
    """
    Build ``(polytope, divisors)`` from a parsed polytope document.

    The optional ``"divisors"`` key carries the default divisor list.
    """
    if not isinstance(document, dict):
        raise ValidationError('document: polytope file must hold a JSON object')
    unknown = set(document) - {'dim', 'halfspaces', 'vertices', 'divisors'}
    if unknown:
        raise ValidationError(f"document: unknown keys {sorted(unknown)}")
    data = validated(PolytopeFileForm(data=document))
    if data['halfspaces'] is not None:
        polytope = vertices_from_halfspaces(
            [(tuple(h['normal']), h['offset']) for h in data['halfspaces']]
        )
    else:
        polytope = hull_of_vertices(data['vertices'])
    divisors = divisors_from_entries(data['divisors'])
    validate_divisors(polytope, divisors)
    return polytope, divisors


def divisors_to_entries(divisors):
    return [{'facet_index': d.facet_index, 'beta': format_rational(d.beta)} for d in divisors]


def polytope_to_document(polytope, divisors=()):
    document = polytope.to_dict()
    if divisors:
        document['divisors'] = divisors_to_entries(divisors)
    return document


def pl_function_from_document(polytope, document):
    """Build the lattice function a PL-function document describes."""
    if not isinstance(document, dict):
        raise ValidationError('document: PL-function file must hold a JSON object')
    data = validated(PLFunctionFileForm(data=document))
    return lattice_function(polytope, data['scale'], data['values'])


def pl_function_to_document(g):
    return {
        'scale': g.scale,
        'values': [[rationals(a), format_rational(v)] for a, v in zip(g.points, g.values)],
    }


def envelope_from_document(polytope, document):
    return concave_envelope(pl_function_from_document(polytope, document))


def convex_function_from_document(polytope, document):
    """A ConvexPLFunction from a document holding the values of h."""
    phi = pl_function_from_document(polytope, document)
    return convex_pl_function(polytope, phi.scale, phi.as_dict())


def load_json(path):
    """Read a JSON file; unreadable files are input errors naming the path."""
    try:
        with open(path, encoding='utf-8') as handle:
            return json.load(handle)
    except OSError as exc:
        raise ValidationError(f"{path}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})")
