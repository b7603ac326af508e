from django.apps import AppConfig


class ContactgeomConfig(AppConfig):
    name = 'contactgeom'
    verbose_name = 'Contact connections and twistor spaces'
