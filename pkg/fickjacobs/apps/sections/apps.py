from django.apps import AppConfig


class SectionsConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "fickjacobs.apps.sections"
    verbose_name = "Cross sections and channel geometry"
