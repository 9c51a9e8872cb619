import logging
import sys
from os import environ, makedirs
from os.path import join
from time import gmtime
from pathlib import Path


DEFAULT_NAME = 'ts-2-sym'


def _log_mapping(level: str) -> int:
    """Maps the log level to the logging level. Will default to INFO if the level is not found.

    Args:
        level (str): The log level

    Returns:
        int: The logging level
    """
    level_map = {'DEBUG': logging.DEBUG,
                 'INFO': logging.INFO,
                 'WARNING': logging.WARNING,
                 'ERROR': logging.ERROR,
                 'CRITICAL': logging.CRITICAL}
    return level_map.get(level.upper(), logging.INFO)


def _create_log_dir(dir_name: str) -> bool:
    """Create the log directory if it does not exist. Failures go to stderr, stdout carries command output.

    Args:
        dir_name (str): The directory name to create

    Returns:
        bool: True if the directory was created, False otherwise
    """
    try:
        makedirs(dir_name, exist_ok=True)
        return True
    except Exception as error:
        print(f'Failed to create log directory: {error}', file=sys.stderr)
    return False


def _set_stream_handler(logger: logging.Logger, level: int, formatter: logging.Formatter) -> bool:
    """Attach a stderr stream handler to the logger.

    Args:
        logger (logging.Logger): the logger object to set the stream handler for
        level (int): the logging level
        formatter (logging.Formatter): the logging formatter

    Returns:
        bool: True if the stream handler was set, False otherwise
    """
    try:
        stream_handler = logging.StreamHandler(sys.stderr)
        stream_handler.setLevel(level)
        stream_handler.setFormatter(formatter)
        logger.addHandler(stream_handler)
        return True
    except Exception as error:
        print(f'Failed to set stream handler: {error}', file=sys.stderr)
    return False


def _set_file_handler(logger: logging.Logger, name: str, dir_name: str, level: int,
                      formatter: logging.Formatter) -> bool:
    """Attach a file handler writing <dir_name>/<name>.log. The directory is created on first use.

    Args:
        logger (logging.Logger): logging object
        name (str): name of the log file
        dir_name (str): log directory name, package logs directory when empty
        level (int): the logging level
        formatter (logging.Formatter): the logging formatter

    Returns:
        bool: True if the file handler was set, False otherwise
    """
    dir_name = dir_name or f'{Path(__file__).parent}/logs'
    if not _create_log_dir(dir_name):
        return False
    try:
        file_handler = logging.FileHandler(join(dir_name, f'{name}.log'))
        file_handler.setLevel(level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)
        return True
    except Exception as error:
        print(f'Failed to create log file: {error}', file=sys.stderr)
    return False


def get_logger(name: str = DEFAULT_NAME, level: str = '', dir_name: str = '') -> logging.Logger:
    """Get the logger or create it if it does not exist. Level and directory fall back to the T2S_LOG_LEVEL and
    T2S_LOG_DIR environment variables, then to INFO and the package logs directory.

    Args:
        name (str, optional): The name of the logger. Defaults to 'ts-2-sym'.
        level (str, optional): logging level. Defaults to ''.
        dir_name (str, optional): directory to store logs. Defaults to ''.

    Returns:
        logging.Logger: The logger object
    """
    logger = logging.getLogger(name)
    if not logger.hasHandlers():
        log_level = _log_mapping(level or environ.get('T2S_LOG_LEVEL', 'info'))
        logger.setLevel(log_level)
        formatter = logging.Formatter('[%(asctime)s][%(levelname)s][%(module)s,%(lineno)d]: %(message)s')
        formatter.converter = gmtime
        _set_stream_handler(logger, log_level, formatter)
        _set_file_handler(logger, name, dir_name or environ.get('T2S_LOG_DIR', ''), log_level, formatter)
    elif level:
        logger.setLevel(_log_mapping(level))
    return logger
