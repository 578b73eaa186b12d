from django.apps import AppConfig


class EnvelopeConfig(AppConfig):
    name = 'envelope'
    verbose_name = 'Concave Envelopes'
