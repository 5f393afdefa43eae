"""
Unit tests for app.core.logging module.
"""

import json
import logging

import pytest

from app.core.config import Settings
from app.core.logging import attach_run_log, setup_logging

pytestmark = pytest.mark.unit


@pytest.fixture
def restore_root_logger():
    """Restore the root logger's handlers and level after a test."""
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield root
    for handler in root.handlers:
        if handler not in handlers:
            handler.close()
    root.handlers[:] = handlers
    root.setLevel(level)


class TestSetupLogging:
    """Test suite for setup_logging."""

    def test_json_file_handler(self, tmp_path, restore_root_logger):
        """Test records reach the JSON log file with their extra fields."""
        log_file = tmp_path / "logs" / "prnet.log"
        config = Settings(_env_file=None, LOG_FILE=str(log_file), LOG_LEVEL="info")

        setup_logging(config)
        logging.getLogger("app.test").info("Dataset built", extra={"samples": 12})
        for handler in restore_root_logger.handlers:
            handler.flush()

        record = json.loads(log_file.read_text().strip().splitlines()[-1])
        assert record["message"] == "Dataset built"
        assert record["samples"] == 12
        assert restore_root_logger.level == logging.INFO

    def test_replaces_handlers(self, tmp_path, restore_root_logger):
        """Test repeated setup does not stack handlers."""
        config = Settings(_env_file=None, LOG_FILE=str(tmp_path / "prnet.log"))

        setup_logging(config)
        setup_logging(config)

        assert len(restore_root_logger.handlers) == 2


class TestAttachRunLog:
    """Test suite for attach_run_log."""

    def test_single_run_handler(self, tmp_path, restore_root_logger):
        """Test attaching a second run log detaches the first."""
        attach_run_log(tmp_path / "first")
        attach_run_log(tmp_path / "second")

        names = [h.get_name() for h in restore_root_logger.handlers]
        assert names.count("prnet-run-file") == 1
        assert (tmp_path / "second" / "run.log").exists()
