"""Built-in polytope documents, in the same format as polytope files."""
import copy

from toricstab.exceptions import UnknownFixture

from .serializers import polytope_from_document

FIXTURES = {
    # the unit interval, both endpoints carrying the same angle
    'cp1-unit': {
        'dim': 1,
        'halfspaces': [
            {'normal': [1], 'offset': 0},
            {'normal': [-1], 'offset': 1},
        ],
        'divisors': [
            {'facet_index': 0, 'beta': '13/14'},
            {'facet_index': 1, 'beta': '13/14'},
        ],
    },
    'cp1-sym': {
        'dim': 1,
        'halfspaces': [
            {'normal': [1], 'offset': 1},
            {'normal': [-1], 'offset': 1},
        ],
        'divisors': [
            {'facet_index': 0, 'beta': '13/14'},
            {'facet_index': 1, 'beta': '13/14'},
        ],
    },
    'square-sym': {
        'dim': 2,
        'halfspaces': [
            {'normal': [1, 0], 'offset': 1},
            {'normal': [0, 1], 'offset': 1},
            {'normal': [-1, 0], 'offset': 1},
            {'normal': [0, -1], 'offset': 1},
        ],
    },
    'simplex2': {
        'dim': 2,
        'halfspaces': [
            {'normal': [1, 0], 'offset': 0},
            {'normal': [0, 1], 'offset': 0},
            {'normal': [-1, -1], 'offset': 1},
        ],
    },
    # first Hirzebruch surface; facets 1, 3, 0 are D_1, D_2, D_inf
    'hirzebruch1': {
        'dim': 2,
        'halfspaces': [
            {'normal': [-1, -1], 'offset': 1},
            {'normal': [1, 0], 'offset': 1},
            {'normal': [1, 1], 'offset': 1},
            {'normal': [0, 1], 'offset': 1},
        ],
        'divisors': [
            {'facet_index': 1, 'beta': '13/14'},
            {'facet_index': 3, 'beta': '13/14'},
            {'facet_index': 0, 'beta': '5/7'},
        ],
    },
}


def fixture_names():
    return sorted(FIXTURES)


def fixture_document(name):
    """A private copy of the named fixture's document."""
    try:
        return copy.deepcopy(FIXTURES[name])
    except KeyError:
        raise UnknownFixture(f"unknown fixture {name!r}; choose from {', '.join(fixture_names())}")


def load_fixture(name):
    """Return ``(polytope, divisors)`` for a built-in fixture."""
    return polytope_from_document(fixture_document(name))
