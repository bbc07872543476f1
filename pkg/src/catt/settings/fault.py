from pydantic import BaseModel, ConfigDict, Field

# Activations per aggressor row used by the double-sided test tool.
DEFAULT_THRESHOLD: int = 1_000_000


class FaultSettings(BaseModel):
    """
    Settings of the simulated disturbance-error model.

    Attributes:
        threshold (int): Default activation threshold of synthesized cells.
        blast_radius (int): Rows on each side of an activated row that can be disturbed.
        refresh_window (int | None): Activations after which the DRAM refreshes
            automatically. None leaves refreshes to the caller.
    """

    model_config = ConfigDict(extra="ignore")

    threshold: int = Field(
        default=DEFAULT_THRESHOLD,
        ge=1,
        description="Default activation threshold of synthesized cells.",
    )
    blast_radius: int = Field(
        default=1,
        ge=1,
        le=2,
        description="Rows on each side of an activated row that can be disturbed.",
    )
    refresh_window: int | None = Field(
        default=None,
        ge=1,
        description="Activations per refresh epoch before an automatic refresh.",
    )
