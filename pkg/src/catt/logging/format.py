from datetime import datetime, timezone
from json import dumps
from logging import Formatter, LogRecord as Record

from catt.settings.logging import LogFormat


def _format_timestamp(time: float) -> str:
    """
    Format the timestamp of the log record in UTC.

    Args:
        time (float): Creation time of the log record, in seconds since the epoch.
    Returns:
        str: ISO 8601 representation of the timestamp.
    """
    return datetime.fromtimestamp(time, tz=timezone.utc).isoformat()


def get_formatter(format_type: LogFormat | str) -> Formatter:
    """
    Get the appropriate formatter based on the format type.

    Unknown names fall back to the console format.

    Args:
        format_type (LogFormat | str): The type of format ('console', 'json', 'simple').
    Returns:
        Formatter: The corresponding formatter instance.
    """
    formatters = {
        LogFormat.CONSOLE: ConsoleFormatter,
        LogFormat.JSON: JsonFormatter,
        LogFormat.SIMPLE: SimpleFormatter,
    }
    return formatters.get(str(format_type).lower(), ConsoleFormatter)()


class ConsoleFormatter(Formatter):
    """
    A logging formatter that outputs log records in a human-readable console format.
    """

    def format(self, record: Record) -> str:
        timestamp = _format_timestamp(record.created)
        message = f"[{timestamp}] {record.levelname} - {record.name} - {record.getMessage()}"
        if record.exc_info:
            message = f"{message}\n{self.formatException(record.exc_info)}"
        return message


class JsonFormatter(Formatter):
    """
    A logging formatter that outputs one JSON object per log record.
    """

    def format(self, record: Record) -> str:
        log_record = {
            "timestamp": _format_timestamp(record.created),
            "level": record.levelname,
            "message": record.getMessage(),
            "logger": record.name,
            "file": record.filename,
            "line": record.lineno,
            "function": record.funcName,
            "process": record.process,
        }
        if record.exc_info:
            log_record["exception"] = self.formatException(record.exc_info)

        return dumps(log_record)


class SimpleFormatter(Formatter):
    """
    A logging formatter that outputs only the level and the message.
    """

    def format(self, record: Record) -> str:
        return f"{record.levelname}: {record.getMessage()}"
