from django.apps import AppConfig


class CircularordersConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "circularorders"
