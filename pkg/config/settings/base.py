"""
Base settings to build other settings files upon.
"""
from pathlib import Path

import environ

BASE_DIR = Path(__file__).resolve(strict=True).parent.parent.parent
# fickjacobs/
APPS_DIR = BASE_DIR / "fickjacobs"
env = environ.Env()

READ_DOT_ENV_FILE = env.bool("DJANGO_READ_DOT_ENV_FILE", default=False)
if READ_DOT_ENV_FILE:
    # OS environment variables take precedence over variables from .env
    env.read_env(str(BASE_DIR / ".env"))

# GENERAL
# ------------------------------------------------------------------------------
# https://docs.djangoproject.com/en/dev/ref/settings/#debug
DEBUG = env.bool("DJANGO_DEBUG", False)
TIME_ZONE = "UTC"
# https://docs.djangoproject.com/en/dev/ref/settings/#language-code
LANGUAGE_CODE = "en-us"
# https://docs.djangoproject.com/en/dev/ref/settings/#use-i18n
USE_I18N = False
# https://docs.djangoproject.com/en/dev/ref/settings/#use-tz
USE_TZ = True

# DATABASES
# ------------------------------------------------------------------------------
# The commands are pure computations; nothing is persisted.
DATABASES: dict = {}

# APPS
# ------------------------------------------------------------------------------
THIRD_PARTY_APPS = [
    "rest_framework",
]

LOCAL_APPS = [
    "fickjacobs.apps.curves",
    "fickjacobs.apps.sections",
    "fickjacobs.apps.diffusion",
    "fickjacobs.apps.solver",
    "fickjacobs.apps.brownian",
    "fickjacobs.apps.frontend",
]

# https://docs.djangoproject.com/en/dev/ref/settings/#installed-apps
INSTALLED_APPS = THIRD_PARTY_APPS + LOCAL_APPS

# LOGGING
# ------------------------------------------------------------------------------
# https://docs.djangoproject.com/en/dev/ref/settings/#logging
# Records go to stderr so that CSV written to stdout stays clean.
FJ_LOG_LEVEL = env.str("FJ_LOG_LEVEL", default="INFO")
LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "%(levelname)s %(asctime)s %(module)s %(process)d %(thread)d %(message)s",
        },
    },
    "handlers": {
        "console": {
            "level": "DEBUG",
            "class": "logging.StreamHandler",
            "formatter": "verbose",
        }
    },
    "root": {"level": FJ_LOG_LEVEL, "handlers": ["console"]},
}

# NUMERICS
# ------------------------------------------------------------------------------
# Relative tolerance of the adaptive section quadrature.
FJ_QUADRATURE_TOL = env.float("FJ_QUADRATURE_TOL", default=1e-10)
# Gauss-Legendre nodes per panel.
FJ_QUADRATURE_ORDER = env.int("FJ_QUADRATURE_ORDER", default=16)
FJ_QUADRATURE_MAX_PANELS = env.int("FJ_QUADRATURE_MAX_PANELS", default=4096)
# Highest moment order the moments command accepts.
FJ_MAX_MOMENT_ORDER = env.int("FJ_MAX_MOMENT_ORDER", default=8)

# EXECUTION
# ------------------------------------------------------------------------------
FJ_THREADS = env.int("FJ_THREADS", default=1)
FJ_SEED = env.int("FJ_SEED", default=20240101)
FJ_MC_BATCHES = env.int("FJ_MC_BATCHES", default=16)
