"""Turning command-line options into a validated job."""
import json
from dataclasses import dataclass, field

from django.core.exceptions import ValidationError

from obstruction.q import validate_divisors

from .fixtures import fixture_document
from .forms import JobOptionsForm
from .serializers import (
    divisors_from_entries, load_json, polytope_from_document, polytope_to_document, validated,
)

OPTION_FIELDS = tuple(JobOptionsForm.base_fields)


@dataclass(frozen=True)
class JobSpec:
    """
    One invocation: the command, its polytope and divisors, the cleaned
    options and any extra input documents (PL-function files).
    """

    command: str
    polytope: object
    divisors: tuple
    options: dict
    documents: dict = field(default_factory=dict)

    @property
    def format(self):
        return self.options['format']

    def option(self, name, default=None):
        value = self.options.get(name)
        return default if value is None else value

    def inputs(self):
        """The canonical description the report digest is taken over."""
        options = {
            k: v for k, v in sorted(self.options.items()) if v is not None and k != 'format'
        }
        return {
            'command': self.command,
            'polytope': polytope_to_document(self.polytope, self.divisors),
            'options': options,
            'documents': self.documents,
        }

    @classmethod
    def from_options(cls, command, options, documents=(), optional=()):
        """
        Build a job from parsed command options.

        ``documents`` and ``optional`` name options holding paths to JSON
        documents that are read and carried along under the same names.
        """
        document = _polytope_document(options)
        polytope, divisors = polytope_from_document(document)
        if options.get('divisors'):
            divisors = divisors_from_entries(_divisor_entries(options['divisors']))
            validate_divisors(polytope, divisors)
        cleaned = validated(JobOptionsForm(data={k: options.get(k) for k in OPTION_FIELDS}))
        loaded = {}
        for name in documents:
            if not options.get(name):
                raise ValidationError(f"{name}: --{name} FILE is required")
        for name in (*documents, *optional):
            if options.get(name):
                loaded[name] = load_json(options[name])
        return cls(command, polytope, tuple(divisors), cleaned, loaded)


def _polytope_document(options):
    path, name = options.get('polytope'), options.get('fixture')
    if bool(path) == bool(name):
        raise ValidationError('polytope: give exactly one of --polytope FILE and --fixture NAME')
    if name:
        return fixture_document(name)
    return load_json(path)


def _divisor_entries(value):
    """``--divisors`` takes a file path or an inline JSON list."""
    if value.lstrip().startswith('['):
        try:
            return json.loads(value)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"divisors: invalid inline JSON ({exc.msg})")
    return load_json(value)
