"""
Django settings for the optic_flock project.

The project has no web surface: Django provides the settings layer, the
management-command entry point and the run registry models.
"""

from pathlib import Path
from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


SECRET_KEY = config('SECRET_KEY', default='django-insecure-change-this-in-production')

DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'django.contrib.contenttypes',

    # Custom apps
    'flocking',
]


# Database
# The registry is a local file; override DB_NAME to keep several ledgers apart.

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': config('DB_NAME', default=str(BASE_DIR / 'flock_runs.sqlite3')),
    }
}


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# Default primary key field type

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Logging

FLOCK_LOG_LEVEL = config('FLOCK_LOG_LEVEL', default='INFO')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'loggers': {
        'flocking': {
            'handlers': ['console'],
            'level': FLOCK_LOG_LEVEL,
            'propagate': False,
        },
    },
}


# Simulation command settings
FLOCK_OUTPUT_DIR = config('FLOCK_OUTPUT_DIR', default='output')
FLOCK_SWEEP_JOBS = config('FLOCK_SWEEP_JOBS', default=1, cast=int)
