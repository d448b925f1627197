from django.apps import AppConfig


class OblateConfig(AppConfig):
    name = 'oblate'
    verbose_name = 'Hill four-body problem with an oblate tertiary'
