from django.apps import AppConfig


class FutakiConfig(AppConfig):
    name = 'futaki'
    verbose_name = 'Log Futaki Invariants'
