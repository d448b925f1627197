import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'hill4body.settings')
django.setup()
