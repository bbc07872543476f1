from typing import Callable, Dict, List

from catt.dram.geometry import DramGeometry
from catt.dram.mapping import MappingScheme, build_mapping, rank_bit_swizzle
from catt.dram.mapping.base import SchemeId

# DDR3 defaults: 4 KiB pages, 2 pages per row, 8 banks, 2 ranks, 2^15 rows.
G0 = DramGeometry()

# Two DIMMs of the default organization, 2,097,152 page frames (8 GiB).
S1 = DramGeometry(dimms=2)

# DDR4 doubles the banks per rank.
DDR4 = DramGeometry(banks_per_rank=16)

# Desk-scale machine with the S1 bank layout and 256 rows per bank.
S1_MINI = DramGeometry(dimms=2, rows_per_bank=256)

# Two banks of 64 rows, 256 page frames, sized for exploit campaigns.
EXPLOIT_MINI = DramGeometry(banks_per_rank=2, ranks_per_dimm=1, rows_per_bank=64)


def _linear(geometry: DramGeometry) -> Callable[[], MappingScheme]:
    return lambda: build_mapping(geometry)


def _ivy_bridge() -> MappingScheme:
    return build_mapping(G0, SchemeId.CUSTOM_BIT_SWIZZLE, rank_bit_swizzle(G0, rank_bit=20))


_PRESETS: Dict[str, Callable[[], MappingScheme]] = {
    "g0": _linear(G0),
    "s1": _linear(S1),
    "ddr4": _linear(DDR4),
    "ivy-bridge": _ivy_bridge,
    "s1-mini": _linear(S1_MINI),
    "exploit-mini": _linear(EXPLOIT_MINI),
}


def preset_names() -> List[str]:
    return sorted(_PRESETS)


def is_preset(name: str) -> bool:
    return name.lower() in _PRESETS


def load_preset(name: str) -> MappingScheme:
    """
    Build the mapping of a named machine preset.

    Args:
        name (str): One of `preset_names()`, case-insensitive.

    Returns:
        MappingScheme: Mapping over the preset geometry.

    Raises:
        KeyError: If the preset is unknown.
    """
    try:
        factory = _PRESETS[name.lower()]
    except KeyError:
        raise KeyError(
            f"Unknown geometry preset '{name}'. Known presets: {', '.join(preset_names())}"
        ) from None
    return factory()
