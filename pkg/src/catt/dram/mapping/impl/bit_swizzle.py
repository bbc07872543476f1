from typing import Any, Dict, List, Sequence

from numpy import ndarray, zeros_like

from catt.dram.geometry import DramGeometry
from catt.dram.mapping.base import MappingScheme, SchemeId


def _log2_exact(value: int, name: str) -> int:
    if value < 1 or value & (value - 1):
        raise ValueError(f"{name} must be a power of two for bit swizzling, got {value}")
    return value.bit_length() - 1


class BitSwizzleMapping(MappingScheme):
    """
    Mapping defined by a permutation of physical address bits.

    `bit_table[j]` names the physical address bit that feeds bit j of the linear
    address, which is then decomposed row-major like the default scheme. Bits below
    the page shift must stay in place so a page frame never straddles two rows.
    """

    scheme_id = SchemeId.CUSTOM_BIT_SWIZZLE

    def __init__(self, geometry: DramGeometry, bit_table: Sequence[int]) -> None:
        """
        Args:
            geometry (DramGeometry): Simulated DRAM organization. Every count must be
                a power of two.
            bit_table (Sequence[int]): Permutation of range(address_bits).

        Raises:
            ValueError: If the geometry is not a power of two in size or the table is
                not a permutation that keeps the page offset bits fixed.
        """
        super().__init__(geometry)
        address_bits = _log2_exact(geometry.total_bytes, "total_bytes")
        page_shift = _log2_exact(geometry.page_size, "page_size")

        table = list(bit_table)
        if sorted(table) != list(range(address_bits)):
            raise ValueError(
                f"bit_table must be a permutation of 0..{address_bits - 1}, got {table}"
            )
        moved = [bit for bit in range(page_shift) if table[bit] != bit]
        if moved:
            raise ValueError(f"bit_table moves page offset bits {moved}")

        self.bit_table: List[int] = table
        self._inverse: List[int] = [0] * address_bits
        for linear_bit, physical_bit in enumerate(table):
            self._inverse[physical_bit] = linear_bit

    def to_linear(self, pa: int) -> int:
        linear = 0
        for linear_bit, physical_bit in enumerate(self.bit_table):
            linear |= ((pa >> physical_bit) & 1) << linear_bit
        return linear

    def from_linear(self, linear: int) -> int:
        pa = 0
        for physical_bit, linear_bit in enumerate(self._inverse):
            pa |= ((linear >> linear_bit) & 1) << physical_bit
        return pa

    def to_linear_array(self, addresses: ndarray) -> ndarray:
        linear = zeros_like(addresses)
        for linear_bit, physical_bit in enumerate(self.bit_table):
            linear |= ((addresses >> physical_bit) & 1) << linear_bit
        return linear

    def describe(self) -> Dict[str, Any]:
        return {"scheme_id": self.scheme_id.value, "bit_table": list(self.bit_table)}


def rank_bit_swizzle(geometry: DramGeometry, rank_bit: int = 20) -> List[int]:
    """
    Build a bit table in which one physical address bit selects the rank.

    On Ivy Bridge style controllers the 20th physical address bit decides the rank,
    so 0x2FFFFF and 0x300000 land on different ranks. The table swaps that bit with
    the lowest rank bit of the linear layout.

    Args:
        geometry (DramGeometry): Geometry with at least two ranks per DIMM.
        rank_bit (int): Physical address bit that selects the rank.

    Returns:
        List[int]: Permutation usable as `BitSwizzleMapping.bit_table`.
    """
    address_bits = _log2_exact(geometry.total_bytes, "total_bytes")
    if geometry.ranks_per_dimm < 2:
        raise ValueError("A rank bit needs at least two ranks per DIMM.")
    if not 0 <= rank_bit < address_bits:
        raise ValueError(f"rank_bit {rank_bit} outside 0..{address_bits - 1}")

    linear_rank_bit = _log2_exact(geometry.row_bytes, "row_bytes") + _log2_exact(
        geometry.banks_per_rank, "banks_per_rank"
    )
    table = list(range(address_bits))
    table[linear_rank_bit], table[rank_bit] = table[rank_bit], table[linear_rank_bit]
    return table
