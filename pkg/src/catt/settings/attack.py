from pydantic import BaseModel, ConfigDict, Field

from catt.settings.fault import DEFAULT_THRESHOLD


class ScanConfig(BaseModel):
    """
    Parameters of the double-sided scan.

    Attributes:
        hammer_count (int): Activations per aggressor row.
        pattern (int): Byte written to every victim frame before hammering.
        coverage_runs (int): Repetitions of the whole scan; results are united.
    """

    model_config = ConfigDict(extra="forbid")

    hammer_count: int = Field(
        default=DEFAULT_THRESHOLD, ge=1, description="Activations per aggressor row."
    )
    pattern: int = Field(default=0xFF, ge=0, le=0xFF, description="Victim fill byte.")
    coverage_runs: int = Field(default=1, ge=1, description="Scan repetitions.")


class ExploitConfig(BaseModel):
    """
    Parameters of the page-table spray exploit.

    Attributes:
        spray_fraction (float): Fraction of available memory the attacker maps.
        attempts (int): Campaign length.
        seed (int): Campaign seed; per-attempt seeds are derived from it.
        hammer_count (int): Activations per aggressor row.
        pte_fraction (float): Fraction of the freed memory refilled with page tables.
        single_sided (bool): Hammer only the aggressor row below each victim row.
    """

    model_config = ConfigDict(extra="forbid")

    spray_fraction: float = Field(
        default=0.5, gt=0.0, le=1.0, description="Fraction of memory sprayed."
    )
    attempts: int = Field(default=100, ge=1, description="Campaign length.")
    seed: int = Field(default=0, ge=0, lt=1 << 64, description="Campaign seed.")
    hammer_count: int = Field(
        default=DEFAULT_THRESHOLD, ge=1, description="Activations per aggressor row."
    )
    pte_fraction: float = Field(
        default=0.5, gt=0.0, le=1.0, description="Freed memory refilled with PTEs."
    )
    single_sided: bool = Field(
        default=False, description="Hammer one aggressor row per victim row."
    )
