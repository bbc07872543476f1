from enum import StrEnum
from logging import getLogger
from pathlib import Path
from typing import Any, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from catt.dram.io import resolve_geometry
from catt.dram.mapping import MappingScheme
from catt.errors import InputParseError
from catt.fault.cell import Sidedness, VulnerabilityProfile
from catt.fault.profile import load_profile
from catt.fault.synth import synthesize_profile
from catt.gcatt.policy import PolicyVariant
from catt.settings.allocator import DEFAULT_KERNEL_BASE
from catt.settings.attack import ExploitConfig, ScanConfig
from catt.settings.fault import DEFAULT_THRESHOLD

logger = getLogger(__name__)


class DefenseKind(StrEnum):
    """
    Defense configurations of a simulated machine.
    """

    NONE = "none"
    BCATT = "bcatt"
    GCATT_SPLIT = "gcatt-split"
    GCATT_DYNAMIC = "gcatt-dynamic"
    BOTH = "both"

    @property
    def blacklists(self) -> bool:
        return self in (DefenseKind.BCATT, DefenseKind.BOTH)

    @property
    def policy(self) -> PolicyVariant:
        if self in (DefenseKind.GCATT_SPLIT, DefenseKind.BOTH):
            return PolicyVariant.KERNEL_USER_SPLIT
        if self is DefenseKind.GCATT_DYNAMIC:
            return PolicyVariant.DYNAMIC_ADJACENCY
        return PolicyVariant.NONE


class SynthesizedProfile(BaseModel):
    """
    Profile generated on load instead of read from a file.
    """

    model_config = ConfigDict(extra="forbid")

    victims: int = Field(..., ge=0)
    seed: int = Field(default=0, ge=0)
    threshold: int = Field(default=DEFAULT_THRESHOLD, ge=1)
    reliability: float = Field(default=1.0, gt=0.0, le=1.0)
    sidedness: Sidedness = Sidedness.DOUBLE_REQUIRED


class MachineRef(BaseModel):
    """
    Geometry (preset name or file) and profile (file or synthesis recipe) of a machine.
    Paths are relative to the scenario file.
    """

    model_config = ConfigDict(extra="forbid")

    geometry: str
    profile: str | SynthesizedProfile | None = None

    def resolve(self, base_folder: Path) -> Tuple[MappingScheme, VulnerabilityProfile]:
        """
        Load the mapping and the profile bound to it.

        Raises:
            InputParseError: If a referenced file is missing or malformed.
            DigestMismatchError: If the profile belongs to another geometry.
        """
        mapping = resolve_geometry(self.geometry, base_folder)
        if self.profile is None:
            profile = VulnerabilityProfile(geometry_digest=mapping.digest)
        elif isinstance(self.profile, SynthesizedProfile):
            recipe = self.profile
            try:
                profile = synthesize_profile(
                    mapping,
                    recipe.victims,
                    seed=recipe.seed,
                    threshold=recipe.threshold,
                    reliability=recipe.reliability,
                    sidedness=recipe.sidedness,
                )
            except ValueError as error:
                raise InputParseError(str(error)) from error
        else:
            profile = load_profile(base_folder / self.profile, mapping)
        return mapping, profile


class Scenario(BaseModel):
    """
    A complete experiment: machine, defense and attack parameters.

    Attributes:
        name (str): Label used in tables.
        geometry (str): Geometry preset or file of the attacked machine.
        profile (str | SynthesizedProfile | None): Profile of the attacked machine.
        defense (DefenseKind): Defense configuration.
        guard_rows (int): Rows separating domains under G-CATT.
        kernel_base (int): Physical address of the kernel image.
        split_row (int | None): First guard row of the kernel-user split.
        blast_radius (int): Rows on each side disturbed by an activation.
        max_order (int): Largest buddy block order.
        whole_row_blacklist (bool): Blacklist whole victim rows under B-CATT.
        scan (ScanConfig | None): Run the double-sided scan with these parameters.
        scan_machine (MachineRef | None): Machine scanned instead of the attacked one.
        exploit (ExploitConfig | None): Run an exploit campaign with these parameters.
    """

    model_config = ConfigDict(extra="forbid")

    name: str = Field(..., min_length=1)
    geometry: str
    profile: str | SynthesizedProfile | None = None
    defense: DefenseKind = DefenseKind.NONE
    guard_rows: int = Field(default=1, ge=1)
    kernel_base: int = Field(default=DEFAULT_KERNEL_BASE, ge=0)
    split_row: int | None = Field(default=None, ge=1)
    blast_radius: int = Field(default=1, ge=1, le=2)
    max_order: int = Field(default=11, ge=0)
    whole_row_blacklist: bool = False
    scan: ScanConfig | None = None
    scan_machine: MachineRef | None = None
    exploit: ExploitConfig | None = None

    @field_validator("kernel_base", mode="before")
    @classmethod
    def parse_hex(cls, value: Any) -> Any:
        if isinstance(value, str):
            return int(value, 0)
        return value

    @model_validator(mode="after")
    def check_guard(self) -> "Scenario":
        if self.defense.policy is not PolicyVariant.NONE and self.guard_rows < self.blast_radius:
            raise ValueError(
                f"guard_rows ({self.guard_rows}) must be at least the blast radius "
                f"({self.blast_radius})."
            )
        if self.scan is None and self.exploit is None:
            raise ValueError("A scenario needs a scan section, an exploit section, or both.")
        return self

    @property
    def machine(self) -> MachineRef:
        return MachineRef(geometry=self.geometry, profile=self.profile)


def load_scenario(path: Path) -> Scenario:
    """
    Parse a scenario file.

    Raises:
        InputParseError: If the file is unreadable or invalid.
    """
    try:
        scenario = Scenario.model_validate_json(Path(path).read_text(encoding="utf-8"))
    except OSError as error:
        raise InputParseError(f"Cannot read scenario {path}: {error}") from error
    except ValidationError as error:
        raise InputParseError(f"Invalid scenario {path}: {error}") from error
    logger.debug("Loaded scenario '%s' (%s) from %s", scenario.name, scenario.defense, path)
    return scenario
