"""
Django settings for the toricstab project.

Generated by 'django-admin startproject' using Django 5.2.7 and trimmed down to
what a command-line toolkit needs: no database, no middleware, no URL routing.

For more information on this file, see
https://docs.djangoproject.com/en/5.2/topics/settings/
"""

import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Only used to satisfy Django's startup checks; nothing is signed or hashed.
SECRET_KEY = os.environ.get('TORIC_STAB_SECRET_KEY', 'toricstab-cli-not-a-secret')

DEBUG = False

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'geometry',  # Lattice Delzant polytopes, facets, lattice points
    'measures',  # Volumes, moments and PL integrals under dnu / dsigma
    'envelope',  # Concave envelopes g_phi and the concavity cone
    'obstruction',  # Q_i obstruction and its polynomial form
    'stability',  # Exact T_iP-semistability decision
    'futaki',  # Toric log Futaki invariants
    'cli.apps.CliConfig',
]

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            'context_processors': [],
        },
    },
]


# Internationalization
# https://docs.djangoproject.com/en/5.2/topics/i18n/

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# Toolkit configuration
# Every tunable of the library lives here; read it through toricstab.conf.

def _env_int(name, default, minimum):
    try:
        value = int(os.environ.get(name, default))
    except ValueError:
        value = default
    return max(value, minimum)


TORIC_STAB = {
    'THREADS': _env_int('TORIC_STAB_THREADS', 1, 1),
    'MAX_CONSTRAINTS': 10 ** 6,
    'EXACT_MAX_DIM': 2,
    'MAX_CUTS': 500,
    'MAX_LP_ENTRIES': _env_int('TORIC_STAB_MAX_LP_ENTRIES', 2 * 10 ** 5, 1),
    'DEFAULT_SAMPLES': 200,
    'DEFAULT_SEED': 0,
    'SCHEMA_VERSION': 'toricstab.report/1',
}


# Logging
# Structured key=value lines on stderr; reports themselves go to stdout.

LOG_LEVEL = os.environ.get('TORIC_STAB_LOG_LEVEL', 'WARNING').upper()

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'structured': {
            'format': 'level={levelname} logger={name} msg="{message}"',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'structured',
        },
    },
    'loggers': {
        app: {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        }
        for app in ('geometry', 'measures', 'envelope', 'obstruction',
                    'stability', 'futaki', 'cli')
    },
}
