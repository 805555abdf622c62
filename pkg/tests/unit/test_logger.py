"""
Unit Tests for Logger (efid/utils/logger.py)

Tests logger initialization and configuration
"""

import logging
import os
import sys
from unittest.mock import Mock, patch

import structlog

from efid.utils.logger import configure_logging, get_logger, init_worker, sweep_context


class TestGetLogger:
    """Test get_logger function"""

    @patch('efid.utils.logger.structlog.get_logger')
    def test_get_logger_returns_logger(self, mock_get_logger):
        """Test that get_logger returns a logger instance"""
        mock_logger = Mock()
        mock_get_logger.return_value = mock_logger

        logger = get_logger("test_module")

        mock_get_logger.assert_called_once_with("test_module")
        assert logger is mock_logger

    @patch('efid.utils.logger.structlog.get_logger')
    def test_get_logger_default_name(self, mock_get_logger):
        """Test get_logger with default name"""
        get_logger()

        mock_get_logger.assert_called_once()


class TestConfigureLogging:
    """Test configure_logging function"""

    @patch('efid.utils.logger.structlog.configure')
    @patch('efid.utils.logger.logging.basicConfig')
    def test_configure_logging_info_level(self, mock_basic_config, mock_structlog_configure):
        """Test configuring logging at INFO level"""
        configure_logging(log_level="INFO")

        mock_basic_config.assert_called_once()
        assert mock_basic_config.call_args[1]['level'] == logging.INFO
        mock_structlog_configure.assert_called_once()

    @patch('efid.utils.logger.structlog.configure')
    @patch('efid.utils.logger.logging.basicConfig')
    def test_configure_logging_writes_to_stderr(self, mock_basic_config, mock_structlog_configure):
        """Test that log records go to stderr, leaving stdout for results"""
        configure_logging(log_level="INFO")

        assert mock_basic_config.call_args[1]['stream'] is sys.stderr

    @patch('efid.utils.logger.structlog.configure')
    @patch('efid.utils.logger.logging.basicConfig')
    def test_configure_logging_structlog_configured(self, mock_basic_config, mock_structlog_configure):
        """Test that structlog is configured with processors"""
        configure_logging(log_level="WARNING")

        call_args = mock_structlog_configure.call_args[1]
        assert 'processors' in call_args
        assert 'wrapper_class' in call_args
        assert 'context_class' in call_args
        assert 'logger_factory' in call_args

    @patch('efid.utils.logger.structlog.configure')
    @patch('efid.utils.logger.logging.basicConfig')
    def test_configure_logging_case_insensitive(self, mock_basic_config, mock_structlog_configure):
        """Test that log level is case insensitive"""
        configure_logging(log_level="DeBuG")

        assert mock_basic_config.call_args[1]['level'] == logging.DEBUG


class TestWorkerLogging:
    """Test worker initialization and sweep context binding"""

    @patch('efid.utils.logger.configure_logging')
    def test_init_worker_binds_pid(self, mock_configure):
        """Test that a worker configures logging and tags records with its pid"""
        structlog.contextvars.bind_contextvars(kernel="stale")
        try:
            init_worker("DEBUG")

            mock_configure.assert_called_once_with("DEBUG")
            assert structlog.contextvars.get_contextvars() == {"worker_pid": os.getpid()}
        finally:
            structlog.contextvars.clear_contextvars()

    def test_sweep_context_is_scoped(self):
        """Test that sweep fields are bound only inside the block"""
        structlog.contextvars.clear_contextvars()

        with sweep_context(kernel="adpcm", target="all"):
            assert structlog.contextvars.get_contextvars() == {"kernel": "adpcm", "target": "all"}

        assert structlog.contextvars.get_contextvars() == {}
