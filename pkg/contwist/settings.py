"""
Django settings for the contwist project.

The project has no database and no HTTP surface: Django supplies the settings
layer, the management-command CLI and the test runner.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

import os
from pathlib import Path
from dotenv import load_dotenv

# Load overrides from a local .env file, if any
load_dotenv()

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# No signing, sessions or cookies are used by any command.
SECRET_KEY = 'contwist-local-toolkit'

DEBUG = os.getenv('DEBUG', 'False').lower() == 'true'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'contactgeom',
]

DATABASES = {}

USE_TZ = True

TIME_ZONE = 'UTC'

LANGUAGE_CODE = 'en-us'


# Toolkit configuration
# Read through contactgeom.conf, which supplies the defaults.

CONTWIST = {
    'TAU_ALG': 1e-10,
    'TAU_GEO': 1e-6,
    'FD_STEP': 1e-5,
    'SCAN_SAMPLES': 25,
    'SIEGEL_EPSILON': 0.1,
    'RESTART_HALF_WIDTH': 2.0,
    # Worker threads for solver restarts and normality scans
    'WORKERS': int(os.getenv('CONTWIST_THREADS', '1')),
}


# Logging configuration
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {message}',
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
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'django': {
            'handlers': ['console'],
            'level': 'ERROR',
            'propagate': True,
        },
        'contactgeom': {
            'handlers': ['console'],
            'level': 'DEBUG' if DEBUG else 'WARNING',
            'propagate': False,
        },
    },
}
