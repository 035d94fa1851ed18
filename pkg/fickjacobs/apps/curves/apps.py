from django.apps import AppConfig


class CurvesConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "fickjacobs.apps.curves"
    verbose_name = "Space curves and Frenet-Serret frames"
