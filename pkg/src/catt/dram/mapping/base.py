from abc import ABC, abstractmethod
from enum import StrEnum
from functools import cached_property
from typing import Any, ClassVar, Dict, List, Tuple

from numpy import arange, int64, ndarray

from catt.dram.geometry import DramGeometry
from catt.dram.location import DramLocation, RowAddress
from catt.utility.io.digest import canonical_digest


class SchemeId(StrEnum):
    """
    Identifiers of the supported physical-address to DRAM mappings.
    """

    LINEAR_ROWGROUP = "linear-rowgroup"
    CUSTOM_BIT_SWIZZLE = "custom-bit-swizzle"


class MappingScheme(ABC):
    """
    Bijection between physical addresses and DRAM coordinates.

    Every scheme first maps the physical address onto a "linear" address and then
    decomposes the linear address row-major: row index on top, then DIMM, rank and
    bank, and the byte offset within the row at the bottom. The linear-rowgroup
    scheme uses the identity; other schemes permute address bits to model vendor
    mappings that interleave ranks and banks differently.

    Instances are immutable and safe to share between threads.
    """

    scheme_id: ClassVar[SchemeId]

    def __init__(self, geometry: DramGeometry) -> None:
        """
        Args:
            geometry (DramGeometry): Simulated DRAM organization.
        """
        self.geometry = geometry
        self._row_bytes = geometry.row_bytes
        self._rowgroup_bytes = geometry.rowgroup_bytes
        self._page_size = geometry.page_size
        self._frame_coordinates: Tuple[ndarray, ndarray] | None = None

    @abstractmethod
    def to_linear(self, pa: int) -> int:
        """
        Map a physical address onto the row-major linear address space.
        """
        ...

    @abstractmethod
    def from_linear(self, linear: int) -> int:
        """
        Inverse of `to_linear`.
        """
        ...

    @abstractmethod
    def to_linear_array(self, addresses: ndarray) -> ndarray:
        """
        Vectorized `to_linear` over an int64 array of physical addresses.
        """
        ...

    def describe(self) -> Dict[str, Any]:
        """
        Scheme parameters, as stored in geometry files and hashed into the digest.
        """
        return {"scheme_id": self.scheme_id.value}

    @cached_property
    def digest(self) -> str:
        """
        Checksum binding profiles and results to this geometry and scheme.

        Returns:
            str: Hexadecimal SHA256 digest.
        """
        return canonical_digest(
            {"geometry": self.geometry.model_dump(), "scheme": self.describe()}
        )

    def decode(self, pa: int) -> DramLocation:
        """
        Decode a physical address into DRAM coordinates.

        Args:
            pa (int): Physical address.

        Returns:
            DramLocation: Coordinates of the byte at `pa`.

        Raises:
            AddressOutOfRangeError: If pa >= total_bytes.
        """
        self.geometry.check_address(pa)
        row, within = divmod(self.to_linear(pa), self._rowgroup_bytes)
        unit, offset = divmod(within, self._row_bytes)
        dimm, rank, bank = self.geometry.unit_coordinates(unit)
        return DramLocation(dimm=dimm, rank=rank, bank=bank, row=row, offset=offset)

    def encode(self, location: DramLocation) -> int:
        """
        Encode DRAM coordinates into a physical address.

        Args:
            location (DramLocation): Coordinates valid for the geometry.

        Returns:
            int: Physical address.

        Raises:
            LocationOutOfRangeError: If any coordinate exceeds its bound.
        """
        self.geometry.check_location(location)
        unit = self.geometry.unit_index(location.row_address)
        linear = (
            location.row * self._rowgroup_bytes
            + unit * self._row_bytes
            + location.offset
        )
        return self.from_linear(linear)

    def row_address(self, pa: int) -> RowAddress:
        return self.decode(pa).row_address

    def frame_row(self, pfn: int) -> RowAddress:
        """
        Row holding a page frame. A frame never straddles two rows.
        """
        return self.row_address(pfn * self._page_size)

    def locate_byte(self, address: RowAddress, offset: int) -> Tuple[int, int]:
        """
        Page frame and byte-in-page of a byte given by row and byte-in-row.

        Returns:
            Tuple[int, int]: (pfn, byte offset within the page).
        """
        return divmod(self.encode(DramLocation.at(address, offset)), self._page_size)

    def frames_in_row(self, address: RowAddress) -> List[int]:
        """
        Page frames stored in a row.

        Args:
            address (RowAddress): Row coordinates.

        Returns:
            List[int]: Exactly pages_per_row page frame numbers, ascending.

        Raises:
            LocationOutOfRangeError: If the coordinates are invalid.
        """
        self.geometry.check_row_address(address)
        frames = [
            self.encode(DramLocation.at(address, slot * self._page_size))
            // self._page_size
            for slot in range(self.geometry.pages_per_row)
        ]
        return sorted(frames)

    def frame_coordinates(self) -> Tuple[ndarray, ndarray]:
        """
        Bank unit and row index of every page frame, computed once.

        Returns:
            Tuple[ndarray, ndarray]: Two int64 arrays of length total_frames,
            (unit index, row index), indexed by PFN.
        """
        if self._frame_coordinates is None:
            addresses = arange(self.geometry.total_frames, dtype=int64) * self._page_size
            linear = self.to_linear_array(addresses)
            rows = linear // self._rowgroup_bytes
            units = (linear % self._rowgroup_bytes) // self._row_bytes
            self._frame_coordinates = (units, rows)
        return self._frame_coordinates

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.geometry!r})"
