"""Point pytest at the project's Django settings, as manage.py does."""
import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'contwist.settings')
django.setup()
