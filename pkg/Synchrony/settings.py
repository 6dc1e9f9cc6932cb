"""
Django settings for the Synchrony project.

Synchrony has no web surface: Django provides the settings layer, the
management-command CLI, the ORM for recorded reports, and the test runner.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

from pathlib import Path
import os
from dotenv import load_dotenv

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

load_dotenv(BASE_DIR / '.env')

SYNCHRONY_VERSION = '1.0.0'

# Default seed for every randomized check; a --seed flag always wins.
SYNCHRONY_SEED = int(os.getenv('SYNCHRONY_SEED', '42'))

SYNCHRONY_TOLERANCES = {
    'amplitude': 1e-10,
    'nosignal': 1e-10,
    'chsh': 1e-6,
    'integrand': 1e-14,
    'middle_form': 1e-14,
    'quadrature': 1e-6,
    # spacelike over timelike magnitude at m=10, separation 2
    'quadrature_decay': 1e-4,
    # counterexample gaps must EXCEED these
    'counterexample_amplitude': 0.01,
    'counterexample_signal': 1e-3,
}

SYNCHRONY_SWEEP_JOBS = int(os.getenv('SYNCHRONY_SWEEP_JOBS', '1'))

SYNCHRONY_SCENARIO_DIR = BASE_DIR / 'reports' / 'scenarios'

# Not used for anything secret: there are no sessions or signed cookies.
SECRET_KEY = os.getenv('SYNCHRONY_SECRET_KEY', 'synchrony-batch-cli-not-a-web-service')

DEBUG = False

ALLOWED_HOSTS = []

# Application definition

INSTALLED_APPS = [
    'kinematics',
    'metric',
    'quantum',
    'propagator',
    'reports',
    'django.contrib.contenttypes',
    'rest_framework',
]


# Database
# Only touched when a command runs with --record.

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}


LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '{levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': os.getenv('SYNCHRONY_LOG_LEVEL', 'WARNING'),
    },
}


# Internationalization
# https://docs.djangoproject.com/en/5.2/topics/i18n/

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = True

USE_TZ = True


# Default primary key field type
# https://docs.djangoproject.com/en/5.2/ref/settings/#default-auto-field

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'
