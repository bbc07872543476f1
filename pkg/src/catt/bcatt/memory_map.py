from enum import StrEnum
from json import dumps, loads
from pathlib import Path
from typing import Any, List

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_serializer,
    field_validator,
    model_validator,
)

from catt.dram.geometry import DramGeometry
from catt.errors import GeometryMismatchError, InputParseError


class RegionKind(StrEnum):
    USABLE = "usable"
    RESERVED = "reserved"


class MemoryRegion(BaseModel):
    """
    One entry of the firmware memory map.

    Addresses are written as hexadecimal strings on disk.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    base: int = Field(..., ge=0)
    length: int = Field(..., gt=0)
    kind: RegionKind

    @field_validator("base", "length", mode="before")
    @classmethod
    def parse_hex(cls, value: Any) -> Any:
        if isinstance(value, str):
            try:
                return int(value, 16)
            except ValueError:
                raise ValueError(f"'{value}' is not a hexadecimal number") from None
        return value

    @field_serializer("base", "length")
    def to_hex(self, value: int) -> str:
        return f"{value:#x}"

    @property
    def end(self) -> int:
        return self.base + self.length


class MemoryMap(BaseModel):
    """
    Ordered, non-overlapping and fully coalesced list of memory regions.

    The number of entries is not limited.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    regions: List[MemoryRegion] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_ordering(self) -> "MemoryMap":
        for previous, current in zip(self.regions, self.regions[1:]):
            if current.base < previous.end:
                raise ValueError(
                    f"Region at {current.base:#x} overlaps or precedes the region "
                    f"ending at {previous.end:#x}."
                )
            if current.base == previous.end and current.kind == previous.kind:
                raise ValueError(
                    f"Adjacent {current.kind} regions at {current.base:#x} are not coalesced."
                )
        return self

    @classmethod
    def all_usable(cls, geometry: DramGeometry) -> "MemoryMap":
        return cls(
            regions=[MemoryRegion(base=0, length=geometry.total_bytes, kind=RegionKind.USABLE)]
        )

    @property
    def entries(self) -> int:
        return len(self.regions)

    def bytes_of(self, kind: RegionKind) -> int:
        return sum(region.length for region in self.regions if region.kind is kind)

    @property
    def usable_bytes(self) -> int:
        return self.bytes_of(RegionKind.USABLE)

    @property
    def reserved_bytes(self) -> int:
        return self.bytes_of(RegionKind.RESERVED)

    def check_covers(self, geometry: DramGeometry) -> None:
        """
        Ensure the map tiles exactly [0, total_bytes) of the geometry.

        Raises:
            GeometryMismatchError: On a gap or a region past the end of memory.
        """
        position = 0
        for region in self.regions:
            if region.base != position:
                raise GeometryMismatchError(
                    f"Memory map leaves [{position:#x}, {region.base:#x}) undescribed."
                )
            position = region.end
        if position != geometry.total_bytes:
            raise GeometryMismatchError(
                f"Memory map ends at {position:#x}, memory ends at {geometry.total_bytes:#x}."
            )

    def to_json(self) -> str:
        """
        Byte-stable JSON rendering: a list of regions, two-space indent, final newline.
        """
        payload = [region.model_dump(mode="json") for region in self.regions]
        return dumps(payload, indent=2) + "\n"


def capacity_note(original: MemoryMap, extended: MemoryMap) -> str:
    return f"{original.entries} -> {extended.entries} entries"


def load_memory_map(path: Path) -> MemoryMap:
    """
    Parse a memory map file.

    Raises:
        InputParseError: If the file is unreadable or violates the map invariants.
    """
    try:
        payload = loads(Path(path).read_text(encoding="utf-8"))
        if not isinstance(payload, list):
            raise ValueError("a memory map file holds a JSON list of regions")
        return MemoryMap(regions=payload)
    except OSError as error:
        raise InputParseError(f"Cannot read memory map {path}: {error}") from error
    except (ValidationError, ValueError) as error:
        raise InputParseError(f"Invalid memory map {path}: {error}") from error


def store_memory_map(memory_map: MemoryMap, path: Path) -> None:
    Path(path).write_text(memory_map.to_json(), encoding="utf-8")
