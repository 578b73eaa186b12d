from django import forms
from django.core.validators import RegexValidator

from geometry.rationals import RATIONAL_PATTERN, parse_rational

rational_validator = RegexValidator(
    regex=RATIONAL_PATTERN,
    message='Enter an exact rational of the form "p/q" or "p".',
)


def _is_int(value):
    return isinstance(value, int) and not isinstance(value, bool)


class PolytopeFileForm(forms.Form):
    """Validate a polytope document: exactly one of halfspaces or vertices."""

    dim = forms.IntegerField(required=False, min_value=1)
    halfspaces = forms.JSONField(required=False)
    vertices = forms.JSONField(required=False)
    divisors = forms.JSONField(required=False)

    def clean_halfspaces(self):
        """Each halfspace is {"normal": [ints], "offset": int}."""
        halfspaces = self.cleaned_data.get('halfspaces')
        if halfspaces is None:
            return None
        if not isinstance(halfspaces, list):
            raise forms.ValidationError('halfspaces must be a list')
        for k, h in enumerate(halfspaces):
            if not isinstance(h, dict) or set(h) != {'normal', 'offset'}:
                raise forms.ValidationError(f'halfspace {k} needs exactly "normal" and "offset"')
            if not isinstance(h['normal'], list) or not all(_is_int(x) for x in h['normal']):
                raise forms.ValidationError(f'halfspace {k} normal must be a list of integers')
            if not _is_int(h['offset']):
                raise forms.ValidationError(f'halfspace {k} offset must be an integer')
        return halfspaces

    def clean_vertices(self):
        vertices = self.cleaned_data.get('vertices')
        if vertices is None:
            return None
        if not isinstance(vertices, list) or not all(
            isinstance(v, list) and all(_is_int(x) for x in v) for v in vertices
        ):
            raise forms.ValidationError('vertices must be a list of integer lists')
        return vertices

    def clean_divisors(self):
        return self.cleaned_data.get('divisors') or []

    def clean(self):
        cleaned_data = super().clean()
        halfspaces = cleaned_data.get('halfspaces')
        vertices = cleaned_data.get('vertices')
        if self.errors:
            return cleaned_data
        if (halfspaces is None) == (vertices is None):
            raise forms.ValidationError('exactly one of "halfspaces" and "vertices" must be present')
        rows = [h['normal'] for h in halfspaces] if halfspaces else vertices
        sizes = {len(row) for row in rows}
        dim = cleaned_data.get('dim')
        if len(sizes) != 1 or (dim is not None and sizes != {dim}):
            self.add_error(
                'halfspaces' if halfspaces else 'vertices',
                'entries have inconsistent dimension',
            )
        elif dim is None:
            cleaned_data['dim'] = sizes.pop()
        return cleaned_data


class DivisorForm(forms.Form):
    """One divisor entry: a facet index and a cone angle 0 < beta <= 1."""

    facet_index = forms.IntegerField(min_value=0)
    beta = forms.CharField(validators=[rational_validator])

    def clean_beta(self):
        """Parse beta exactly and check its range."""
        beta = parse_rational(self.cleaned_data['beta'])
        if not 0 < beta <= 1:
            raise forms.ValidationError('beta must satisfy 0 < beta <= 1')
        return beta


class JobOptionsForm(forms.Form):
    """Options shared by the analysis commands."""

    MODE_CHOICES = [
        ('linear', 'Linear witness only'),
        ('exact', 'Exact decision'),
        ('sampled', 'Random refutation'),
    ]
    FORMAT_CHOICES = [
        ('text', 'Text'),
        ('json', 'JSON'),
    ]

    i = forms.IntegerField(required=False, min_value=1)
    mode = forms.ChoiceField(choices=MODE_CHOICES, required=False)
    seed = forms.IntegerField(required=False, min_value=0)
    max_constraints = forms.IntegerField(required=False, min_value=1)
    samples = forms.IntegerField(required=False, min_value=1)
    format = forms.ChoiceField(choices=FORMAT_CHOICES, required=False)
    k = forms.IntegerField(required=False, min_value=1)
    imax = forms.IntegerField(required=False, min_value=1)
    poly = forms.BooleanField(required=False)

    def clean_mode(self):
        return self.cleaned_data.get('mode') or 'linear'

    def clean_format(self):
        return self.cleaned_data.get('format') or 'text'


class PLFunctionFileForm(forms.Form):
    """A PL-function document: {"scale": i, "values": [[[coords...], value], ...]}."""

    scale = forms.IntegerField(min_value=1)
    values = forms.JSONField()

    def clean_values(self):
        values = self.cleaned_data['values']
        if not isinstance(values, list):
            raise forms.ValidationError('values must be a list of [point, value] pairs')
        parsed = {}
        for k, entry in enumerate(values):
            if not isinstance(entry, list) or len(entry) != 2 or not isinstance(entry[0], list):
                raise forms.ValidationError(f'values entry {k} must be [[coords...], value]')
            try:
                point = tuple(parse_rational(x) for x in entry[0])
                parsed[point] = parse_rational(entry[1])
            except ValueError as exc:
                raise forms.ValidationError(f'values entry {k}: {exc}')
        return parsed
