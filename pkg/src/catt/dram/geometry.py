from typing import Any, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from catt.dram.location import DramLocation, RowAddress
from catt.errors import AddressOutOfRangeError, LocationOutOfRangeError

# Physical addresses are modeled as unsigned 64-bit values.
MAX_ADDRESS_SPACE: int = 1 << 64


class DramGeometry(BaseModel):
    """
    Organization of the simulated DRAM.

    Defaults describe a DDR3 machine with one DIMM: 4 KiB pages, two pages per
    row, eight banks per rank, two ranks per DIMM and 2^15 rows per bank.

    Attributes:
        page_size (int): Bytes per page frame, a power of two.
        pages_per_row (int): Page frames held by one DRAM row.
        banks_per_rank (int): Banks in every rank.
        ranks_per_dimm (int): Ranks on every DIMM.
        dimms (int): Number of DIMMs.
        rows_per_bank (int): Rows in every bank.
        channels (int): Memory channels. Reserved, fixed to 1.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    page_size: int = Field(default=4096, ge=1, description="Bytes per page frame.")
    pages_per_row: int = Field(default=2, ge=1, description="Page frames per row.")
    banks_per_rank: int = Field(default=8, ge=1, description="Banks per rank.")
    ranks_per_dimm: int = Field(default=2, ge=1, description="Ranks per DIMM.")
    dimms: int = Field(default=1, ge=1, description="Number of DIMMs.")
    rows_per_bank: int = Field(default=1 << 15, ge=1, description="Rows per bank.")
    channels: int = Field(default=1, ge=1, le=1, description="Channels (fixed to 1).")

    @model_validator(mode="before")
    @classmethod
    def check_declared_pages_per_dimm(cls, data: Any) -> Any:
        """
        Accept an explicit `pages_per_dimm` only if it equals the derived product.
        """
        if not isinstance(data, dict) or "pages_per_dimm" not in data:
            return data

        data = dict(data)
        declared = data.pop("pages_per_dimm")
        derived = (
            data.get("pages_per_row", 2)
            * data.get("banks_per_rank", 8)
            * data.get("ranks_per_dimm", 2)
        )
        if declared != derived:
            raise ValueError(
                f"pages_per_dimm={declared} does not match "
                f"pages_per_row * banks_per_rank * ranks_per_dimm = {derived}"
            )
        return data

    @model_validator(mode="after")
    def check_sizes(self) -> "DramGeometry":
        if self.page_size & (self.page_size - 1):
            raise ValueError(f"page_size must be a power of two, got {self.page_size}")
        if self.total_bytes > MAX_ADDRESS_SPACE:
            raise ValueError(
                f"Geometry describes {self.total_bytes} bytes, "
                "more than a 64-bit physical address space."
            )
        return self

    @property
    def row_bytes(self) -> int:
        return self.page_size * self.pages_per_row

    @property
    def pages_per_dimm(self) -> int:
        return self.pages_per_row * self.banks_per_rank * self.ranks_per_dimm

    @property
    def bank_units(self) -> int:
        """
        Number of distinct (dimm, rank, bank) triples.

        Returns:
            int: banks_per_rank * ranks_per_dimm * dimms.
        """
        return self.banks_per_rank * self.ranks_per_dimm * self.dimms

    @property
    def rowgroup_bytes(self) -> int:
        """
        Bytes covered by one row index across every bank of every DIMM.

        Returns:
            int: page_size * pages_per_dimm * dimms.
        """
        return self.page_size * self.pages_per_dimm * self.dimms

    @property
    def total_bytes(self) -> int:
        return self.rowgroup_bytes * self.rows_per_bank

    @property
    def total_frames(self) -> int:
        return self.total_bytes // self.page_size

    def check_address(self, pa: int) -> None:
        if not 0 <= pa < self.total_bytes:
            raise AddressOutOfRangeError(
                f"Physical address {pa:#x} outside [0, {self.total_bytes:#x})."
            )

    def check_row_address(self, address: RowAddress) -> None:
        bounds = (
            ("dimm", address.dimm, self.dimms),
            ("rank", address.rank, self.ranks_per_dimm),
            ("bank", address.bank, self.banks_per_rank),
            ("row", address.row, self.rows_per_bank),
        )
        for name, value, bound in bounds:
            if not 0 <= value < bound:
                raise LocationOutOfRangeError(
                    f"{name}={value} outside [0, {bound}) for this geometry."
                )

    def check_location(self, location: DramLocation) -> None:
        self.check_row_address(location.row_address)
        if not 0 <= location.offset < self.row_bytes:
            raise LocationOutOfRangeError(
                f"offset={location.offset} outside [0, {self.row_bytes})."
            )

    def unit_index(self, address: RowAddress) -> int:
        """
        Linear index of the (dimm, rank, bank) triple of a row address.

        Banks vary fastest, then ranks, then DIMMs.
        """
        return address.bank + self.banks_per_rank * (
            address.rank + self.ranks_per_dimm * address.dimm
        )

    def unit_coordinates(self, unit: int) -> Tuple[int, int, int]:
        """
        Inverse of `unit_index`.

        Returns:
            Tuple[int, int, int]: (dimm, rank, bank).
        """
        bank = unit % self.banks_per_rank
        rank = (unit // self.banks_per_rank) % self.ranks_per_dimm
        dimm = unit // (self.banks_per_rank * self.ranks_per_dimm)
        return dimm, rank, bank

    def row_address_of_unit(self, unit: int, row: int) -> RowAddress:
        dimm, rank, bank = self.unit_coordinates(unit)
        return RowAddress(dimm=dimm, rank=rank, bank=bank, row=row)


def row_index(pa: int, geometry: DramGeometry) -> int:
    """
    Row index of a physical address.

    Row(PA) = PA / (PageSize * PagesPerDIMM * DIMMs), using floor division.

    Args:
        pa (int): Physical address.
        geometry (DramGeometry): Simulated DRAM organization.

    Returns:
        int: Row index within its bank.

    Raises:
        AddressOutOfRangeError: If pa >= total_bytes.
    """
    geometry.check_address(pa)
    return pa // geometry.rowgroup_bytes
