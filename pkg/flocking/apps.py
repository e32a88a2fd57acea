from django.apps import AppConfig


class FlockingConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'flocking'
    verbose_name = 'Visually-guided flocking'
