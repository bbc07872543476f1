from pydantic import Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from catt.settings.attack import ScanConfig
from catt.settings.allocator import AllocatorSettings
from catt.settings.fault import FaultSettings
from catt.settings.logging import LoggingSettings
from catt.settings.path import PathSettings


class Settings(BaseSettings):
    """
    Settings class that provides configuration values using defaults,
    environment variables, or a `.env` file.

    Environment variables and `.env` entries must follow the format:
        CATT_SIM_<MODULE>__<SETTING>

    Nested settings can be defined by adding additional `__` separators.
    `CATT_SIM_THREADS` caps the parallelism of attack campaigns.

    Attributes:
        threads (int): Worker processes available to campaigns.
        logging (LoggingSettings): Configuration related to logging.
        path (PathSettings): Configuration related to path handling.
        fault (FaultSettings): Disturbance-error model defaults.
        allocator (AllocatorSettings): Page allocator defaults.
        scan (ScanConfig): Default scan parameters.
    """

    model_config = SettingsConfigDict(
        case_sensitive=False,
        env_prefix="CATT_SIM_",
        env_nested_delimiter="__",
        env_file=".env",
        env_file_encoding="utf-8",
        env_ignore_empty=True,  # If the variable is empty, it's treated as not set
        validate_assignment=True,
    )

    threads: int = Field(
        default=1, ge=1, description="Worker processes available to campaigns."
    )
    logging: LoggingSettings = Field(
        default_factory=LoggingSettings,
        description="Configuration related to logging.",
    )
    path: PathSettings = Field(
        default_factory=PathSettings,
        description="Configuration related to path handling.",
    )
    fault: FaultSettings = Field(
        default_factory=FaultSettings,
        description="Disturbance-error model defaults.",
    )
    allocator: AllocatorSettings = Field(
        default_factory=AllocatorSettings,
        description="Page allocator defaults.",
    )
    scan: ScanConfig = Field(
        default_factory=ScanConfig,
        description="Default scan parameters.",
    )

    @model_validator(mode="after")
    def check_guard_rows(self) -> "Settings":
        """
        Guard rows must cover every row an activation disturbs.
        """
        if self.allocator.guard_rows < self.fault.blast_radius:
            raise ValueError(
                f"allocator.guard_rows ({self.allocator.guard_rows}) must be at least "
                f"fault.blast_radius ({self.fault.blast_radius})."
            )
        return self
