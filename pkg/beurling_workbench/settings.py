from pathlib import Path
import os

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# Only used by Django internals; the workbench never signs anything.
SECRET_KEY = os.environ.get('WORKBENCH_SECRET_KEY', 'django-insecure-workbench-local-only')

DEBUG = os.environ.get('WORKBENCH_DEBUG', '0') == '1'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'workbench',
]


# Database
# https://docs.djangoproject.com/en/5.2/ref/settings/#databases
# Only suite runs recorded with `workbench suite --record` are stored here.

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': os.environ.get('WORKBENCH_DB', BASE_DIR / 'db.sqlite3'),
    }
}


# Internationalization
# https://docs.djangoproject.com/en/5.2/topics/i18n/

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# Default primary key field type

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Workbench caps and defaults (see workbench/conf.py for the fallbacks)

WORKBENCH = {
    'BALL_CAP': int(os.environ.get('WORKBENCH_BALL_CAP', 200000)),
    'ORDER_CAP': int(os.environ.get('WORKBENCH_ORDER_CAP', 100000)),
    'BFS_CAP': int(os.environ.get('WORKBENCH_BFS_CAP', 200000)),
    'FACTORIZATION_CAP': int(os.environ.get('WORKBENCH_FACTORIZATION_CAP', 10000)),
    'DEFAULT_BASE': os.environ.get('WORKBENCH_DEFAULT_BASE', '2'),
    'DEFAULT_SEED': int(os.environ.get('WORKBENCH_SEED', 0)),
    'MAX_LEVEL': int(os.environ.get('WORKBENCH_MAX_LEVEL', 8)),
}


# Logging

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'workbench': {
            'handlers': ['console'],
            'level': os.environ.get('WORKBENCH_LOG_LEVEL', 'WARNING'),
            'propagate': False,
        },
    },
}
