from django.apps import AppConfig


class ObstructionConfig(AppConfig):
    name = 'obstruction'
    verbose_name = 'Chow Obstruction'
