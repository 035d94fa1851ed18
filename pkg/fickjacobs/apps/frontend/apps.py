from django.apps import AppConfig


class FrontendConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "fickjacobs.apps.frontend"
    verbose_name = "Command line frontend"
