from .base import *  # noqa
from .base import env

# GENERAL
# ------------------------------------------------------------------------------
# https://docs.djangoproject.com/en/dev/ref/settings/#debug
DEBUG = True
# https://docs.djangoproject.com/en/dev/ref/settings/#secret-key
SECRET_KEY = env(
    "DJANGO_SECRET_KEY",
    default="hR3kVb8nQeW1xZt5mLc9pYs2uGa7dJf4oNiT6wKqE0rBvXyC",
)

# Your stuff...
# ------------------------------------------------------------------------------
APPLICATION_ENVIRONMENT = "local"

# LOGGING
# ------------------------------------------------------------------------------
LOGGING["root"]["level"] = env.str("FJ_LOG_LEVEL", default="DEBUG")  # noqa: F405
