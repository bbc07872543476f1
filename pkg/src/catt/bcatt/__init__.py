from catt.bcatt.blacklist import Blacklist, load_blacklist, store_blacklist
from catt.bcatt.memory_map import (
    MemoryMap,
    MemoryRegion,
    RegionKind,
    load_memory_map,
    store_memory_map,
)
from catt.bcatt.overhead import OverheadReport, overhead_report
from catt.bcatt.pipeline import FrameAvailability, apply_map, derive_blacklist, extend_map


__all__ = [
    "Blacklist",
    "FrameAvailability",
    "MemoryMap",
    "MemoryRegion",
    "OverheadReport",
    "RegionKind",
    "apply_map",
    "derive_blacklist",
    "extend_map",
    "load_blacklist",
    "load_memory_map",
    "overhead_report",
    "store_blacklist",
    "store_memory_map",
]
