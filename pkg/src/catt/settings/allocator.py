from pydantic import BaseModel, ConfigDict, Field

# Kernel images are usually loaded at 1 MiB.
DEFAULT_KERNEL_BASE: int = 0x100000


class AllocatorSettings(BaseModel):
    """
    Settings of the simulated physical page allocator.

    Attributes:
        max_order (int): Largest buddy block order.
        guard_rows (int): Rows separating security domains.
        kernel_base (int): Physical address of the kernel image.
        split_row (int | None): First guard row of the kernel-user split.
            None places it at rows_per_bank / 2.
    """

    model_config = ConfigDict(extra="ignore")

    max_order: int = Field(default=11, ge=0, description="Largest buddy block order.")
    guard_rows: int = Field(default=1, ge=1, description="Rows separating domains.")
    kernel_base: int = Field(
        default=DEFAULT_KERNEL_BASE, ge=0, description="Physical address of the kernel."
    )
    split_row: int | None = Field(
        default=None, ge=1, description="First guard row of the kernel-user split."
    )
