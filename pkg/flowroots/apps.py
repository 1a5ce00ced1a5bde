from django.apps import AppConfig


class FlowrootsConfig(AppConfig):
    name = "flowroots"
    verbose_name = "Flow Roots"
