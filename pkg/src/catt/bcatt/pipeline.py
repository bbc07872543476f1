from dataclasses import dataclass
from logging import getLogger
from typing import List, Tuple

from numpy import flatnonzero, ndarray, ones, zeros

from catt.bcatt.blacklist import Blacklist
from catt.bcatt.memory_map import MemoryMap, MemoryRegion, RegionKind
from catt.dram.geometry import DramGeometry
from catt.dram.mapping import MappingScheme
from catt.fault.cell import VulnerabilityProfile

logger = getLogger(__name__)


@dataclass(frozen=True)
class FrameAvailability:
    """
    Per-frame availability bitmap handed to the page allocator.

    Attributes:
        available (ndarray): Boolean array indexed by PFN.
    """

    available: ndarray

    @classmethod
    def full(cls, geometry: DramGeometry) -> "FrameAvailability":
        return cls(available=ones(geometry.total_frames, dtype=bool))

    @property
    def total_frames(self) -> int:
        return len(self.available)

    @property
    def count(self) -> int:
        return int(self.available.sum())

    def is_available(self, pfn: int) -> bool:
        return bool(self.available[pfn])

    def unavailable_frames(self) -> List[int]:
        return flatnonzero(~self.available).tolist()


def derive_blacklist(
    profile: VulnerabilityProfile, mapping: MappingScheme, whole_row: bool = False
) -> Blacklist:
    """
    Frames holding at least one vulnerable cell.

    Frames that only host aggressor rows stay usable.

    Args:
        profile (VulnerabilityProfile): Profile bound to `mapping`.
        mapping (MappingScheme): Address mapping.
        whole_row (bool): Blacklist every frame of a victim row instead of only the
            frames holding vulnerable cells.

    Raises:
        DigestMismatchError: If the profile belongs to another geometry.
    """
    profile.check_bound(mapping)
    if not whole_row:
        return Blacklist.of(profile.victim_frames(mapping))

    rows = {cell.row_address for cell in profile.cells}
    return Blacklist.of(pfn for row in rows for pfn in mapping.frames_in_row(row))


def _reserved_spans(blacklist: Blacklist, page_size: int) -> List[Tuple[int, int]]:
    return [(first * page_size, stop * page_size) for first, stop in blacklist.runs()]


def extend_map(memory_map: MemoryMap, blacklist: Blacklist, geometry: DramGeometry) -> MemoryMap:
    """
    Reserve every blacklisted frame in a memory map.

    Usable regions are cut around blacklisted frames and the result is coalesced,
    so extending twice with the same blacklist gives the same map.

    Args:
        memory_map (MemoryMap): Map tiling the whole physical address space.
        blacklist (Blacklist): Frames to reserve.
        geometry (DramGeometry): Simulated DRAM organization.

    Returns:
        MemoryMap: Extended map. It may hold more than 128 entries.

    Raises:
        PfnOutOfRangeError: If a blacklisted frame does not exist.
        GeometryMismatchError: If the map does not tile the address space.
    """
    blacklist.check_range(geometry)
    memory_map.check_covers(geometry)
    if not blacklist:
        return memory_map

    spans = _reserved_spans(blacklist, geometry.page_size)
    pieces: List[Tuple[int, int, RegionKind]] = []
    cursor = 0
    for region in memory_map.regions:
        if region.kind is RegionKind.RESERVED:
            pieces.append((region.base, region.end, region.kind))
            continue
        position = region.base
        while cursor < len(spans) and spans[cursor][1] <= region.base:
            cursor += 1
        index = cursor
        while index < len(spans) and spans[index][0] < region.end:
            start = max(spans[index][0], region.base)
            stop = min(spans[index][1], region.end)
            if start > position:
                pieces.append((position, start, RegionKind.USABLE))
            pieces.append((start, stop, RegionKind.RESERVED))
            position = stop
            index += 1
        if position < region.end:
            pieces.append((position, region.end, RegionKind.USABLE))

    merged: List[Tuple[int, int, RegionKind]] = []
    for start, stop, kind in pieces:
        if merged and merged[-1][2] is kind and merged[-1][1] == start:
            merged[-1] = (merged[-1][0], stop, kind)
        else:
            merged.append((start, stop, kind))

    extended = MemoryMap(
        regions=[
            MemoryRegion(base=start, length=stop - start, kind=kind)
            for start, stop, kind in merged
        ]
    )
    logger.info(
        "Extended memory map from %d to %d entries, %d frames blacklisted",
        memory_map.entries,
        extended.entries,
        len(blacklist),
    )
    return extended


def apply_map(memory_map: MemoryMap, geometry: DramGeometry) -> FrameAvailability:
    """
    Turn a memory map into the frame availability bitmap.

    A frame is available only if it lies entirely inside a usable region.

    Raises:
        GeometryMismatchError: If the map does not tile the address space.
    """
    memory_map.check_covers(geometry)
    page_size = geometry.page_size
    available = zeros(geometry.total_frames, dtype=bool)
    for region in memory_map.regions:
        if region.kind is not RegionKind.USABLE:
            continue
        first = -(-region.base // page_size)
        stop = region.end // page_size
        if stop > first:
            available[first:stop] = True
    return FrameAvailability(available=available)
