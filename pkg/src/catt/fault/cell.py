from enum import StrEnum
from typing import List, Set, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from catt.dram.location import RowAddress
from catt.dram.mapping import MappingScheme
from catt.errors import DigestMismatchError, LocationOutOfRangeError
from catt.utility.io.digest import canonical_digest

CellKey = Tuple[int, int, int, int, int, int]


class Sidedness(StrEnum):
    """
    Aggressor requirement of a vulnerable cell.

    Attributes:
        DOUBLE_REQUIRED (str): Both neighbouring rows must reach the threshold.
        SINGLE_SUFFICIENT (str): One neighbouring row reaching the threshold suffices.
    """

    DOUBLE_REQUIRED = "double-required"
    SINGLE_SUFFICIENT = "single-sufficient"


class VulnerableCell(BaseModel):
    """
    A DRAM cell that flips when its neighbouring rows are activated often enough.

    Reliability 1 models a reliable cell that flips in every qualifying refresh epoch;
    lower values flip with that probability per qualifying epoch.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    dimm: int = Field(..., ge=0)
    rank: int = Field(..., ge=0)
    bank: int = Field(..., ge=0)
    row: int = Field(..., ge=0)
    byte_offset: int = Field(..., ge=0, description="Byte within the row.")
    bit: int = Field(..., ge=0, le=7)
    threshold: int = Field(..., ge=1, description="Activations per aggressor row.")
    reliability: float = Field(..., gt=0.0, le=1.0)
    sidedness: Sidedness = Sidedness.DOUBLE_REQUIRED

    @property
    def row_address(self) -> RowAddress:
        return RowAddress(dimm=self.dimm, rank=self.rank, bank=self.bank, row=self.row)

    @property
    def key(self) -> CellKey:
        return (self.dimm, self.rank, self.bank, self.row, self.byte_offset, self.bit)


class VulnerabilityProfile(BaseModel):
    """
    The vulnerable cells of one simulated machine.

    Attributes:
        geometry_digest (str): Digest of the geometry and mapping the cells belong to.
        cells (List[VulnerableCell]): Cells sorted by location, unique per
            (location, byte_offset, bit).
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    geometry_digest: str = Field(..., min_length=1)
    cells: List[VulnerableCell] = Field(default_factory=list)

    @field_validator("cells")
    @classmethod
    def check_unique_cells(cls, cells: List[VulnerableCell]) -> List[VulnerableCell]:
        seen: Set[CellKey] = set()
        for cell in cells:
            if cell.key in seen:
                raise ValueError(f"Duplicate vulnerable cell at {cell.key}")
            seen.add(cell.key)
        return sorted(cells, key=lambda cell: cell.key)

    @property
    def digest(self) -> str:
        return canonical_digest(self.model_dump(mode="json"))

    def check_bound(self, mapping: MappingScheme) -> None:
        """
        Ensure the profile belongs to a mapping and every cell lies inside it.

        Raises:
            DigestMismatchError: If the geometry digests differ.
            LocationOutOfRangeError: If a cell lies outside the geometry.
        """
        if self.geometry_digest != mapping.digest:
            raise DigestMismatchError(
                f"Profile is bound to geometry {self.geometry_digest[:12]}, "
                f"not {mapping.digest[:12]}."
            )
        for cell in self.cells:
            mapping.geometry.check_row_address(cell.row_address)
            if cell.byte_offset >= mapping.geometry.row_bytes:
                raise LocationOutOfRangeError(
                    f"Cell byte_offset {cell.byte_offset} outside a "
                    f"{mapping.geometry.row_bytes}-byte row."
                )

    def victim_frames(self, mapping: MappingScheme) -> List[int]:
        """
        Page frames holding at least one vulnerable cell, ascending.
        """
        return sorted(
            {mapping.locate_byte(cell.row_address, cell.byte_offset)[0] for cell in self.cells}
        )
