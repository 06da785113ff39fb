import os

import django
import pytest

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'beurling_workbench.settings')
django.setup()


@pytest.fixture(scope='session', autouse=True)
def _django_test_environment():
    """Mirror `manage.py test`: test settings and a migrated test database."""
    from django.test.utils import setup_test_environment, teardown_test_environment, setup_databases, teardown_databases

    setup_test_environment()
    old_config = setup_databases(verbosity=0, interactive=False)
    yield
    teardown_databases(old_config, verbosity=0)
    teardown_test_environment()
