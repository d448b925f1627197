"""
Django settings for the hill4body project.

The project has no HTTP surface: it hosts the ``oblate`` app, whose
management command ``hill4body`` drives the Hill four-body computations.

Values are read from the environment (and an optional ``.env`` file at the
project root) with django-environ.
"""

from pathlib import Path

import environ

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

env = environ.Env(
    DEBUG=(bool, False),
    HILL4BODY_THREADS=(int, 0),
    HILL4BODY_LOG_LEVEL=(str, 'INFO'),
    HILL4BODY_REL_TOL=(float, 1e-12),
    HILL4BODY_ABS_TOL=(float, 1e-12),
)

if (BASE_DIR / '.env').exists():
    environ.Env.read_env(BASE_DIR / '.env')

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = env('SECRET_KEY', default='django-insecure-hill4body-local-only')

DEBUG = env('DEBUG')

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'rest_framework',
    'oblate',
]

# No models are stored; the dummy backend is enough for the test runner.
DATABASES = {}

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# REST Framework Configuration
# Only the serializers and renderers are used, to validate configuration
# input and to emit CSV/JSON tables.
REST_FRAMEWORK = {
    'STRICT_JSON': True,
    'COMPACT_JSON': False,
    'UNICODE_JSON': False,
}


# Hill four-body configuration
HILL4BODY = {
    # Upper bound on worker threads for parameter sweeps (0 = executor default).
    'THREADS': env('HILL4BODY_THREADS'),
    # System config used when --config is not given; None means built-in Hektor inputs.
    'DEFAULT_CONFIG': env('HILL4BODY_CONFIG', default=None),
    'REL_TOL': env('HILL4BODY_REL_TOL'),
    'ABS_TOL': env('HILL4BODY_ABS_TOL'),
}


# Logging Configuration
LOG_LEVEL = env('HILL4BODY_LOG_LEVEL').upper()
LOG_FILE = env('HILL4BODY_LOG_FILE', default=None)

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '{levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'level': LOG_LEVEL,
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'oblate': {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': True,
        },
    },
}

if LOG_FILE:
    LOGGING['handlers']['file'] = {
        'level': LOG_LEVEL,
        'class': 'logging.FileHandler',
        'filename': LOG_FILE,
        'formatter': 'plain',
    }
    LOGGING['loggers']['oblate']['handlers'].append('file')
