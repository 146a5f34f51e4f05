from django.apps import AppConfig


class AnyonsConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'anyons'
    verbose_name = 'Cyons e anyons'
