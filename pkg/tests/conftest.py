import os
import sys

import pytest
from hypothesis import settings

from critwindow.exact_counts import default_table

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def table():
    return default_table()
