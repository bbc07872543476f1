from logging import getLogger

from numpy import arange, int64, sort
from numpy.random import default_rng

from catt.dram.mapping import MappingScheme
from catt.fault.cell import Sidedness, VulnerabilityProfile, VulnerableCell
from catt.settings.fault import DEFAULT_THRESHOLD

logger = getLogger(__name__)


def synthesize_profile(
    mapping: MappingScheme,
    victims: int,
    seed: int = 0,
    threshold: int = DEFAULT_THRESHOLD,
    reliability: float = 1.0,
    sidedness: Sidedness = Sidedness.DOUBLE_REQUIRED,
) -> VulnerabilityProfile:
    """
    Generate a profile with exactly `victims` distinct victim frames.

    Each victim frame receives one vulnerable cell at a random byte and bit. Frames
    in the first and last row of a bank are never chosen, so every cell can be
    hammered from both sides.

    Args:
        mapping (MappingScheme): Mapping the profile is bound to.
        victims (int): Number of victim frames.
        seed (int): Seed of the placement.
        threshold (int): Activation threshold of every cell.
        reliability (float): Flip probability per qualifying epoch.
        sidedness (Sidedness): Aggressor requirement of every cell.

    Returns:
        VulnerabilityProfile: The generated profile.

    Raises:
        ValueError: If the geometry has fewer interior frames than `victims`.
    """
    geometry = mapping.geometry
    _, rows = mapping.frame_coordinates()
    interior = arange(geometry.total_frames, dtype=int64)[
        (rows > 0) & (rows < geometry.rows_per_bank - 1)
    ]
    if victims < 0 or victims > len(interior):
        raise ValueError(
            f"Cannot place {victims} victim frames among {len(interior)} interior frames."
        )

    rng = default_rng(seed)
    frames = sort(rng.choice(interior, size=victims, replace=False))
    bytes_in_page = rng.integers(0, geometry.page_size, size=victims)
    bits = rng.integers(0, 8, size=victims)

    cells = []
    for pfn, byte, bit in zip(frames.tolist(), bytes_in_page.tolist(), bits.tolist()):
        location = mapping.decode(pfn * geometry.page_size + byte)
        cells.append(
            VulnerableCell(
                dimm=location.dimm,
                rank=location.rank,
                bank=location.bank,
                row=location.row,
                byte_offset=location.offset,
                bit=bit,
                threshold=threshold,
                reliability=reliability,
                sidedness=sidedness,
            )
        )

    logger.info("Synthesized %d vulnerable cells with seed %d", victims, seed)
    return VulnerabilityProfile(geometry_digest=mapping.digest, cells=cells)
