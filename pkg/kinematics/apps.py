from django.apps import AppConfig


class KinematicsConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'kinematics'
