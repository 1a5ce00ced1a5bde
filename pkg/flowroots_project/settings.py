"""
Django settings for flowroots_project project.

The project carries no web surface: it hosts the ``flowroots`` app, whose
management command is the command-line front end, and configures the memo
cache, logging and the computation budgets.

For more information on this file, see
https://docs.djangoproject.com/en/4.2/topics/settings/
"""

from pathlib import Path
from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# Nothing is signed or served; Django still insists on a key.
SECRET_KEY = config('SECRET_KEY', default='flowroots-local-only-key')

DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    # Third-party apps
    "rest_framework",
    # Local apps
    "flowroots.apps.FlowrootsConfig",
]

# No database: reports are streamed, never stored.
DATABASES = {}


# Internationalization

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = False

USE_TZ = True


# Computation budgets and defaults

FLOWROOTS_MEMO_CAP = config('FLOWROOTS_MEMO_CAP', default=100000, cast=int)
FLOWROOTS_ORACLE_BUDGET = config('FLOWROOTS_ORACLE_BUDGET', default=600000, cast=int)
FLOWROOTS_FLAT_BUDGET = config('FLOWROOTS_FLAT_BUDGET', default=200000, cast=int)
FLOWROOTS_SUPERSOLVABLE_MAX_RANK = config('FLOWROOTS_SUPERSOLVABLE_MAX_RANK', default=12, cast=int)
FLOWROOTS_PARALLELISM = config('FLOWROOTS_PARALLELISM', default=1, cast=int)
FLOWROOTS_SEED = config('FLOWROOTS_SEED', default=0, cast=int)


# Memo table for flow/chromatic polynomials. One entry is culled at a time,
# which makes LocMemCache evict in least-recently-used order.
CACHES = {
    "default": {
        "BACKEND": "django.core.cache.backends.locmem.LocMemCache",
        "LOCATION": "flowroots-default",
    },
    "flowcalc": {
        "BACKEND": "django.core.cache.backends.locmem.LocMemCache",
        "LOCATION": "flowroots-memo",
        "TIMEOUT": None,
        "OPTIONS": {
            "MAX_ENTRIES": max(FLOWROOTS_MEMO_CAP, 1),
            "CULL_FREQUENCY": max(FLOWROOTS_MEMO_CAP, 1),
        },
    },
}


# Django REST Framework is used for its serializers and JSON renderer only.
REST_FRAMEWORK = {
    'DEFAULT_RENDERER_CLASSES': [
        'rest_framework.renderers.JSONRenderer',
    ],
    'COMPACT_JSON': True,
    'UNICODE_JSON': True,
    'STRICT_JSON': True,
    # django.contrib.auth is not installed
    'DEFAULT_AUTHENTICATION_CLASSES': [],
    'DEFAULT_PERMISSION_CLASSES': [],
    'UNAUTHENTICATED_USER': None,
}


# Logging configuration. Everything goes to stderr so that stdout stays a
# clean report stream.
LOG_LEVEL = config('LOG_LEVEL', default='WARNING')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {process:d} {thread:d} {message}',
            'style': '{',
        },
        'simple': {
            'format': '{levelname} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'level': 'DEBUG',
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
        'console_verbose': {
            'level': 'DEBUG',
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'flowroots': {
            'handlers': ['console_verbose' if DEBUG else 'console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
        'django': {
            'handlers': ['console'],
            'level': 'WARNING',
        },
    },
}
