"""Collection of tests around log handling."""
import logging

import pytest

from dockvision import exceptions
from dockvision.utils.log import configure_logger, log_stage


def create_log_records():
    """Test function, create log entries in expected stage of test."""
    dockvision_logger = logging.getLogger('dockvision')
    scene_logger = logging.getLogger('dockvision.scene')
    dataset_logger = logging.getLogger('dockvision.scene.dataset')

    dockvision_logger.info('Starting run')
    dockvision_logger.debug('Loaded run config')
    scene_logger.info('Generating 2 foreground and 2 background samples')
    dataset_logger.debug('Manifest checksum abc')
    scene_logger.error('Unable to write to directory')


@pytest.fixture
def debug_messages():
    """Fixture. List of test debug messages."""
    return [
        "INFO dockvision: Starting run",
        "DEBUG dockvision: Loaded run config",
        "INFO dockvision.scene: Generating 2 foreground and 2 background samples",
        "DEBUG dockvision.scene.dataset: Manifest checksum abc",
        "ERROR dockvision.scene: Unable to write to directory",
    ]


@pytest.fixture
def info_logger():
    """Fixture. Call dockvision logger setup with `info` debug level."""
    return configure_logger(stream_level='INFO')


@pytest.fixture
def debug_file(tmp_path):
    """Fixture. Generate debug file location for tests."""
    return tmp_path / 'pytest-plugin.log'


@pytest.fixture
def info_logger_with_file(debug_file):
    """Fixture. Call dockvision logger setup with `info` debug level + `file`."""
    return configure_logger(stream_level='INFO', debug_file=str(debug_file))


@pytest.fixture
def info_messages():
    """Fixture. List of test info messages."""
    return [
        'INFO: Starting run',
        'INFO: Generating 2 foreground and 2 background samples',
        'ERROR: Unable to write to directory',
    ]


def test_utils_log_info_stdout_logging(caplog, info_logger, info_messages):
    """Test that stdout logs use info format and level."""
    [stream_handler] = info_logger.handlers
    assert isinstance(stream_handler, logging.StreamHandler)
    assert stream_handler.level == logging.INFO

    create_log_records()

    stream_messages = [
        stream_handler.format(r)
        for r in caplog.records
        if r.levelno >= stream_handler.level
    ]

    assert stream_messages == info_messages


def test_utils_log_debug_file_logging(
    info_logger_with_file, debug_file, debug_messages
):
    """The file handler gets every record in the debug format."""
    [file_handler, stream_handler] = info_logger_with_file.handlers
    assert isinstance(file_handler, logging.FileHandler)
    assert stream_handler.level == logging.INFO
    assert file_handler.level == logging.DEBUG

    create_log_records()
    file_handler.flush()

    assert debug_file.read_text().splitlines() == debug_messages


def test_utils_log_handlers_reset_on_reconfigure():
    configure_logger(stream_level='INFO')
    logger = configure_logger(stream_level='DEBUG')
    assert len(logger.handlers) == 1
    assert logger.handlers[0].level == logging.DEBUG


def test_utils_log_stage_records_time(caplog):
    caplog.set_level(logging.DEBUG, logger='dockvision')
    timings = {}
    with log_stage(timings, 'pose', logging.getLogger('dockvision.test')):
        sum(range(1000))
    assert timings['pose'] >= 0
    assert any(r.getMessage().startswith('pose took ') for r in caplog.records)


def test_utils_log_stage_records_time_on_error():
    timings = {}
    with pytest.raises(exceptions.PartialObservation):
        with log_stage(timings, 'landmarks'):
            raise exceptions.PartialObservation("Found 3 of 8 landmarks")
    assert 'landmarks' in timings
