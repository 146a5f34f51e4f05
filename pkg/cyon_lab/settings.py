"""
Django settings for cyon_lab project.

Generated by 'django-admin startproject' using Django 5.2.6.

For more information on this file, see
https://docs.djangoproject.com/en/5.2/topics/settings/

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

import os
from pathlib import Path

from dotenv import load_dotenv

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

load_dotenv(BASE_DIR / '.env')


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.getenv('SECRET_KEY', 'django-insecure-cyon-lab-local-only')

# SECURITY WARNING: don't run with debug turned on in production!
DEBUG = os.getenv('DEBUG', 'True') == 'True'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'rest_framework',
    'anyons',
]


# Database
# https://docs.djangoproject.com/en/5.2/ref/settings/#databases

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
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


# Logging
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
    'loggers': {
        'anyons': {
            'handlers': ['console'],
            'level': os.getenv('CYONLAB_LOG_LEVEL', 'INFO'),
        },
    },
}


# Configurações numéricas do cyon_lab
CYONLAB_OUTPUT_ROOT = Path(os.getenv('CYONLAB_OUTPUT_ROOT', BASE_DIR / 'runs'))

# Malha radial em unidades de l0 = sqrt(hbar / (m * Omega))
CYONLAB_RADIAL_GRID = {
    'r_max': 12.0,
    'n_points': 4000,
}

# Rede polar do oráculo 2D (malha radial graduada r = r_max (j/N)^grading)
CYONLAB_LATTICE_GRID = {
    'n_radial': 1000,
    'n_angular': 21,
    'r_max': 8.0,
    'grading': 4.0,
}

CYONLAB_BAND_SIZE = 8
CYONLAB_EDGE_STATES = 2

CYONLAB_SWEEP_POINT_CAP = 10_000
CYONLAB_MAX_WORKERS = int(os.getenv('CYONLAB_MAX_WORKERS', '4'))

# 17 algarismos significativos: doubles com ida e volta exata
CYONLAB_CSV_FLOAT_FORMAT = '%.17g'
