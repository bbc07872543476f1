from enum import IntEnum

from numpy import argsort, full, int8, int16, int64, ndarray, ones, zeros

from catt.bcatt.pipeline import FrameAvailability
from catt.dram.mapping import MappingScheme
from catt.gcatt.domain import NO_DOMAIN


class FrameState(IntEnum):
    FREE = 0
    ALLOCATED = 1
    UNAVAILABLE = 2


class FrameTable:
    """
    Per-frame metadata indexed by PFN, the simulator's vmemmap.

    Attributes:
        state (ndarray): FrameState of every frame.
        domain (ndarray): Security domain of every frame, NO_DOMAIN when free.
        head_order (ndarray): Order of the allocated block starting at a frame, or -1.
        units (ndarray): Bank unit of every frame.
        rows (ndarray): Row index of every frame.
        row_frames (ndarray): Frames of every (unit, row), shape
            (bank_units, rows_per_bank, pages_per_row).
    """

    def __init__(self, mapping: MappingScheme, availability: FrameAvailability | None = None) -> None:
        geometry = mapping.geometry
        total = geometry.total_frames
        if availability is not None and availability.total_frames != total:
            raise ValueError(
                f"Availability covers {availability.total_frames} frames, geometry has {total}."
            )

        self.mapping = mapping
        self.total_frames = total
        available = availability.available if availability is not None else ones(total, dtype=bool)

        self.state: ndarray = zeros(total, dtype=int8)
        self.state[~available] = FrameState.UNAVAILABLE
        self.domain: ndarray = full(total, NO_DOMAIN, dtype=int16)
        self.head_order: ndarray = full(total, -1, dtype=int8)

        self.units, self.rows = mapping.frame_coordinates()
        keys = self.units * geometry.rows_per_bank + self.rows
        self.row_frames: ndarray = argsort(keys, kind="stable").astype(int64).reshape(
            geometry.bank_units, geometry.rows_per_bank, geometry.pages_per_row
        )
