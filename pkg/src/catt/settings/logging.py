from enum import StrEnum

from pydantic import BaseModel, ConfigDict, Field


class LogLevel(StrEnum):
    """
    Enumeration of standard logging levels.

    Attributes:
        DEBUG (str): Debug level logging.
        INFO (str): Info level logging.
        WARNING (str): Warning level logging.
        ERROR (str): Error level logging.
        CRITICAL (str): Critical level logging.
    """

    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"
    CRITICAL = "CRITICAL"


class LogFormat(StrEnum):
    """
    Formats understood by `catt.logging.format.get_formatter`.
    """

    CONSOLE = "console"
    JSON = "json"
    SIMPLE = "simple"


class LoggingSettings(BaseModel):
    """
    Settings related to logging configuration.

    Log records go to stderr; stdout is reserved for command output.

    Attributes:
        level (LogLevel): The logging level for the application.
        format (LogFormat): The format for log messages.
        progress_interval (int): Campaign attempts between two progress lines.
    """

    model_config = ConfigDict(extra="ignore")

    level: LogLevel = Field(
        default=LogLevel.INFO,
        description="The logging level for the application.",
    )
    format: LogFormat = Field(
        default=LogFormat.CONSOLE,
        description="The logging format to use: 'console', 'json' or 'simple'.",
    )
    progress_interval: int = Field(
        default=500,
        ge=1,
        description="Campaign attempts between two progress log lines.",
    )
