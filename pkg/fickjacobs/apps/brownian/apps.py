from django.apps import AppConfig


class BrownianConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "fickjacobs.apps.brownian"
    verbose_name = "Brownian walk oracle"
