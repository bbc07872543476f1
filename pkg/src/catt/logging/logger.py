from logging import Logger, StreamHandler, WARNING, getLogger
from sys import stderr

from catt.logging.format import get_formatter
from catt.settings.logging import LoggingSettings


def get_logger(settings: LoggingSettings) -> Logger:
    """
    Configure the root handler from the logging settings and return the package logger.

    Records are written to stderr so tables and lists printed on stdout stay
    machine-readable.

    Args:
        settings (LoggingSettings): The logging settings to configure the logger.

    Returns:
        Logger: The `catt` logger.
    """
    handler = StreamHandler(stream=stderr)
    handler.setFormatter(get_formatter(settings.format))

    root = getLogger()
    root.setLevel(settings.level.value)
    root.handlers.clear()
    root.addHandler(handler)

    logger = getLogger("catt")
    logger.propagate = True

    # Noise reduction for external libraries
    for library in ("numexpr", "asyncio"):
        getLogger(library).setLevel(WARNING)

    return logger
