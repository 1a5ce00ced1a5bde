import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "flowroots_project.settings")
django.setup()
