from typing import List, Sequence

from catt.dram.geometry import DramGeometry
from catt.dram.location import DramLocation, RowAddress
from catt.dram.mapping.base import MappingScheme, SchemeId
from catt.dram.mapping.impl.bit_swizzle import BitSwizzleMapping, rank_bit_swizzle
from catt.dram.mapping.impl.linear_rowgroup import LinearRowgroupMapping


def build_mapping(
    geometry: DramGeometry,
    scheme_id: SchemeId | str = SchemeId.LINEAR_ROWGROUP,
    bit_table: Sequence[int] | None = None,
) -> MappingScheme:
    """
    Instantiate the mapping scheme named by `scheme_id`.

    Args:
        geometry (DramGeometry): Simulated DRAM organization.
        scheme_id (SchemeId | str): Scheme identifier.
        bit_table (Sequence[int] | None): Bit permutation, required by the swizzle
            scheme and rejected by the others.

    Returns:
        MappingScheme: Ready-to-use mapping.

    Raises:
        ValueError: On an unknown scheme or a misplaced bit table.
    """
    scheme = SchemeId(scheme_id)
    if scheme is SchemeId.LINEAR_ROWGROUP:
        if bit_table is not None:
            raise ValueError("The linear-rowgroup scheme takes no bit_table.")
        return LinearRowgroupMapping(geometry)
    if bit_table is None:
        raise ValueError("The custom-bit-swizzle scheme requires a bit_table.")
    return BitSwizzleMapping(geometry, bit_table)


def decode(pa: int, mapping: MappingScheme) -> DramLocation:
    return mapping.decode(pa)


def encode(location: DramLocation, mapping: MappingScheme) -> int:
    return mapping.encode(location)


def frames_in_row(address: RowAddress, mapping: MappingScheme) -> List[int]:
    return mapping.frames_in_row(address)


__all__ = [
    "BitSwizzleMapping",
    "LinearRowgroupMapping",
    "MappingScheme",
    "SchemeId",
    "build_mapping",
    "decode",
    "encode",
    "frames_in_row",
    "rank_bit_swizzle",
]
