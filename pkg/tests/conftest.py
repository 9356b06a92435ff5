import logging

import pytest


@pytest.fixture(autouse=True)
def restore_root_logger():
    """Drop handlers installed by configure_logging so later tests log into their own capture."""
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    for handler in root.handlers[:]:
        if handler not in handlers:
            root.removeHandler(handler)
            handler.close()
    root.setLevel(level)
