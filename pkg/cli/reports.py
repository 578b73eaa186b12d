"""
Deterministic reports: one template per command for text, sorted JSON otherwise.

A JSON report is an object with five keys::

    schema         "toricstab.report/1"
    command        the command name
    inputs_digest  SHA-256 hex of the canonical inputs
    results        command-specific object, see RESULT_SCHEMA
    warnings       list of strings

Every rational is a string ``"p/q"`` in lowest terms with ``q > 1``, or
``"p"`` when it is an integer. Counts, indices and scales are JSON integers.
"""
import logging
from dataclasses import dataclass, field

from django.core.exceptions import ValidationError
from django.core.validators import RegexValidator
from django.template.loader import render_to_string

from toricstab.conf import get_setting

from .serializers import inputs_digest, to_json

logger = logging.getLogger(__name__)

RATIONAL_PATTERN = r'^-?(0|[1-9][0-9]*)(/([2-9]|[1-9][0-9]+))?$'

validate_rational = RegexValidator(RATIONAL_PATTERN, 'not a canonical "p/q" rational string')
validate_digest = RegexValidator(r'^[0-9a-f]{64}$', 'not a SHA-256 hex digest')

# Field kinds; a trailing "?" also admits null.
TEXT = 'text'
INTEGER = 'integer'
BOOLEAN = 'boolean'
RATIONAL = 'rational'
RATIONALS = 'rationals'
INTEGERS = 'integers'
TEXTS = 'texts'
LATTICE_POINTS = 'lattice_points'
OBJECT = 'object'
LIST = 'list'
DIGEST = 'digest'

REPORT_SCHEMA = {
    'schema': TEXT,
    'command': TEXT,
    'inputs_digest': DIGEST,
    'results': OBJECT,
    'warnings': TEXTS,
}

# Required result keys per command. Commands with several result shapes list
# each; a report must match one. Further keys may appear.
RESULT_SCHEMA = {
    'validate': ({
        'dim': INTEGER,
        'facet_count': INTEGER,
        'halfspaces': TEXTS,
        'vertices': LATTICE_POINTS,
        'delzant': BOOLEAN,
        'reflexive': BOOLEAN,
        'lattice_points': INTEGER,
        'divisors': LIST,
    },),
    'count': ({'i': INTEGER, 'count': INTEGER},),
    'measures': ({
        'volume': RATIONAL,
        'moment': RATIONALS,
        'barycenter': RATIONALS,
        'boundary_volume': RATIONAL,
        'facets': LIST,
    },),
    'q': (
        {'i': INTEGER, 'q': RATIONALS, 'vanishes': BOOLEAN},
        {
            'polynomial': TEXT,
            'degree': INTEGER,
            'coefficients': LIST,
            'integer_zeros': INTEGERS + '?',
            'verdict': TEXT,
            'witness_i': INTEGER + '?',
        },
    ),
    'decide': ({
        'i': INTEGER,
        'decision': TEXT,
        'mode': TEXT,
        'certified': BOOLEAN,
        'minimum': RATIONAL + '?',
        'q': RATIONALS,
        'vertex': RATIONALS + '?',
        'witness': OBJECT + '?',
        'hint': TEXT,
        'samples': INTEGER,
        'cuts': INTEGER,
    },),
    'futaki': ({
        'scale': INTEGER,
        'bound': INTEGER,
        'log_futaki_toric': RATIONAL,
        'from_expansions': RATIONAL,
        'identity_holds': BOOLEAN,
        'direction': TEXT,
    },),
    'futaki-consistency': ({
        'k': INTEGER,
        'samples': LIST,
        'coefficients': RATIONALS,
        'extracted': RATIONAL,
        'subleading': RATIONAL,
        'log_futaki_toric': RATIONAL,
        'expected': RATIONAL,
        'result': TEXT,
    },),
}


def _is_integer(value):
    return isinstance(value, int) and not isinstance(value, bool)


def _check(kind, value, path):
    if kind.endswith('?'):
        if value is None:
            return
        kind = kind[:-1]
    if kind == TEXT:
        ok = isinstance(value, str)
    elif kind == INTEGER:
        ok = _is_integer(value)
    elif kind == BOOLEAN:
        ok = isinstance(value, bool)
    elif kind == OBJECT:
        ok = isinstance(value, dict)
    elif kind == LIST:
        ok = isinstance(value, list)
    elif kind == TEXTS:
        ok = isinstance(value, list) and all(isinstance(v, str) for v in value)
    elif kind == INTEGERS:
        ok = isinstance(value, list) and all(_is_integer(v) for v in value)
    elif kind == LATTICE_POINTS:
        ok = isinstance(value, list) and all(
            isinstance(p, list) and all(_is_integer(x) for x in p) for p in value
        )
    elif kind in (RATIONAL, RATIONALS, DIGEST):
        items = value if kind == RATIONALS else [value]
        ok = isinstance(items, list) and all(isinstance(v, str) for v in items)
        if ok:
            check = validate_digest if kind == DIGEST else validate_rational
            for v in items:
                try:
                    check(v)
                except ValidationError:
                    raise ValidationError(f"{path}: {v!r} is not a valid {kind}")
    else:
        raise ValueError(f"unknown field kind {kind!r}")
    if not ok:
        raise ValidationError(f"{path}: expected {kind}, got {type(value).__name__}")


def _check_fields(schema, data, path):
    missing = sorted(set(schema) - set(data))
    if missing:
        raise ValidationError(f"{path}: missing {', '.join(missing)}")
    for key, kind in schema.items():
        _check(kind, data[key], f"{path}.{key}")


def validate_report(data):
    """
    Raise ValidationError unless ``data``, a parsed JSON report, follows
    REPORT_SCHEMA and the RESULT_SCHEMA entry of its command.
    """
    if not isinstance(data, dict):
        raise ValidationError("report must be a JSON object")
    _check_fields(REPORT_SCHEMA, data, 'report')
    if data['schema'] != get_setting('SCHEMA_VERSION'):
        raise ValidationError(f"report.schema: unsupported version {data['schema']!r}")
    shapes = RESULT_SCHEMA.get(data['command'])
    if shapes is None:
        raise ValidationError(f"report.command: unknown command {data['command']!r}")
    errors = []
    for shape in shapes:
        try:
            _check_fields(shape, data['results'], 'results')
            return
        except ValidationError as exc:
            errors.extend(exc.messages)
    raise ValidationError(errors)


@dataclass
class Report:
    command: str
    inputs_digest: str
    results: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    schema: str = field(default_factory=lambda: get_setting('SCHEMA_VERSION'))

    @classmethod
    def for_job(cls, job):
        return cls(job.command, inputs_digest(job.inputs()))

    def warn(self, message):
        if message in self.warnings:
            return
        logger.warning("report warning command=%s detail=%s", self.command, message)
        self.warnings.append(message)

    def as_dict(self):
        return {
            'schema': self.schema,
            'command': self.command,
            'inputs_digest': self.inputs_digest,
            'results': self.results,
            'warnings': list(self.warnings),
        }

    def render(self, format='text'):
        if format == 'json':
            return to_json(self.as_dict()) + '\n'
        return render_to_string(f"cli/{self.command}.txt", self.as_dict())
