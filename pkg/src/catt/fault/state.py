from collections import Counter, defaultdict
from dataclasses import dataclass
from logging import getLogger
from typing import Dict, Iterable, List, Set, Tuple

from numpy import frombuffer, ndarray, uint8, zeros
from numpy.random import default_rng

from catt.dram.location import RowAddress
from catt.dram.mapping import MappingScheme
from catt.errors import PfnOutOfRangeError
from catt.fault.cell import Sidedness, VulnerabilityProfile, VulnerableCell

logger = getLogger(__name__)


@dataclass(frozen=True, slots=True)
class FlipEvent:
    """
    One realized bit flip.

    Attributes:
        pa (int): Physical address of the flipped byte.
        bit (int): Bit within the byte.
        epoch (int): Refresh epoch the flip happened in.
        pfn (int): Page frame holding the byte.
        byte (int): Byte offset within the page frame.
        row (RowAddress): Victim row.
        cell (int): Index of the cell in the profile.
    """

    pa: int
    bit: int
    epoch: int
    pfn: int
    byte: int
    row: RowAddress
    cell: int

    @property
    def page_bit(self) -> int:
        """
        Bit position within the page frame, counting from bit 0 of byte 0.
        """
        return self.byte * 8 + self.bit


@dataclass(frozen=True, slots=True)
class _PlacedCell:
    cell: VulnerableCell
    pa: int
    pfn: int
    byte: int


class DramState:
    """
    Mutable contents and disturbance state of the simulated DRAM.

    Memory is stored sparsely per page frame; untouched frames read as zeros.
    Activating a row re-evaluates the vulnerable cells within the blast radius
    against the activation counters of the current refresh epoch. A cell is
    evaluated at most once per epoch, so a reliable cell flips once per qualifying
    epoch and an unreliable one gets a single Bernoulli draw seeded by
    (seed, epoch, cell index).

    Operations on one state must be serialized by the caller.
    """

    def __init__(
        self,
        mapping: MappingScheme,
        profile: VulnerabilityProfile | None = None,
        seed: int = 0,
        blast_radius: int = 1,
        refresh_window: int | None = None,
    ) -> None:
        """
        Args:
            mapping (MappingScheme): Address mapping of the simulated machine.
            profile (VulnerabilityProfile | None): Vulnerable cells; None means none.
            seed (int): Seed of the unreliable-cell draws.
            blast_radius (int): Rows on each side of an activated row that are disturbed.
            refresh_window (int | None): Activations after which the state refreshes
                itself. None leaves refreshes to the caller.

        Raises:
            DigestMismatchError: If the profile belongs to another geometry.
            ValueError: If blast_radius or refresh_window is not positive.
        """
        if blast_radius < 1:
            raise ValueError(f"blast_radius must be at least 1, got {blast_radius}")
        if refresh_window is not None and refresh_window < 1:
            raise ValueError(f"refresh_window must be at least 1, got {refresh_window}")

        self.mapping = mapping
        self.geometry = mapping.geometry
        self.seed = seed
        self.blast_radius = blast_radius
        self.refresh_window = refresh_window

        self.epoch = 0
        self.flips: List[FlipEvent] = []
        self._pages: Dict[int, ndarray] = {}
        self._counters: Counter[RowAddress] = Counter()
        self._epoch_activations = 0
        self._evaluated: Set[int] = set()

        self._cells: List[_PlacedCell] = []
        self._cells_by_row: Dict[RowAddress, List[int]] = defaultdict(list)
        if profile is not None:
            profile.check_bound(mapping)
            for index, cell in enumerate(profile.cells):
                pfn, byte = mapping.locate_byte(cell.row_address, cell.byte_offset)
                pa = pfn * self.geometry.page_size + byte
                self._cells.append(_PlacedCell(cell=cell, pa=pa, pfn=pfn, byte=byte))
                self._cells_by_row[cell.row_address].append(index)

    # Memory contents

    def frame(self, pfn: int) -> ndarray:
        """
        Mutable byte array of one page frame, materialized on first access.

        Raises:
            PfnOutOfRangeError: If pfn >= total_frames.
        """
        page = self._pages.get(pfn)
        if page is None:
            if not 0 <= pfn < self.geometry.total_frames:
                raise PfnOutOfRangeError(
                    f"PFN {pfn} outside [0, {self.geometry.total_frames})."
                )
            page = zeros(self.geometry.page_size, dtype=uint8)
            self._pages[pfn] = page
        return page

    def fill_frame(self, pfn: int, pattern: int) -> None:
        self.frame(pfn)[:] = pattern

    def write(self, pa: int, data: bytes) -> None:
        """
        Write bytes at a physical address. Writes may cross page boundaries.
        """
        self.geometry.check_address(pa)
        if not data:
            return
        self.geometry.check_address(pa + len(data) - 1)
        values = frombuffer(data, dtype=uint8)
        page_size = self.geometry.page_size
        written = 0
        while written < len(values):
            pfn, byte = divmod(pa + written, page_size)
            chunk = min(page_size - byte, len(values) - written)
            self.frame(pfn)[byte : byte + chunk] = values[written : written + chunk]
            written += chunk

    def frame_differs(self, pfn: int, pattern: int) -> bool:
        """
        Whether any byte of a frame differs from a fill pattern.
        """
        page = self._pages.get(pfn)
        if page is None:
            return pattern != 0
        return bool((page != pattern).any())

    # Activation dynamics

    def counter(self, row: RowAddress) -> int:
        return self._counters.get(row, 0)

    def activate(self, row: RowAddress, times: int = 1) -> None:
        """
        Activate a row `times` times and evaluate the cells it disturbs.

        With a refresh window, activations that do not fit in the current epoch
        spill over into the next ones.

        Raises:
            LocationOutOfRangeError: If the row does not exist.
        """
        self.geometry.check_row_address(row)
        if times < 0:
            raise ValueError(f"times must be non-negative, got {times}")

        while times > 0:
            batch = times
            if self.refresh_window is not None:
                batch = min(times, self.refresh_window - self._epoch_activations)
            self._counters[row] += batch
            self._epoch_activations += batch
            times -= batch
            self._evaluate_rows(self._disturbed_rows(row))
            if self.refresh_window is not None and self._epoch_activations >= self.refresh_window:
                self.refresh()

    def refresh(self) -> None:
        """
        End the current refresh epoch: counters reset, memory is untouched.
        """
        self._counters.clear()
        self._evaluated.clear()
        self._epoch_activations = 0
        self.epoch += 1

    def evaluate_flips(self) -> List[FlipEvent]:
        """
        Evaluate every vulnerable cell against the current epoch's counters.

        Returns:
            List[FlipEvent]: Flips realized by this evaluation.
        """
        start = len(self.flips)
        self._evaluate_rows(self._cells_by_row.keys())
        return self.flips[start:]

    def _disturbed_rows(self, row: RowAddress) -> Iterable[RowAddress]:
        rows = self.geometry.rows_per_bank
        for distance in range(1, self.blast_radius + 1):
            for victim in (row.row - distance, row.row + distance):
                if 0 <= victim < rows:
                    yield row.with_row(victim)

    def _pressure(self, victim: RowAddress) -> Tuple[int, int]:
        """
        Highest activation count among the rows below and above a victim row.
        """
        below = above = 0
        for distance in range(1, self.blast_radius + 1):
            below = max(below, self._counters.get(victim.with_row(victim.row - distance), 0))
            above = max(above, self._counters.get(victim.with_row(victim.row + distance), 0))
        return below, above

    def _evaluate_rows(self, rows: Iterable[RowAddress]) -> None:
        for victim in rows:
            indices = self._cells_by_row.get(victim)
            if not indices:
                continue
            below, above = self._pressure(victim)
            for index in indices:
                if index in self._evaluated:
                    continue
                placed = self._cells[index]
                threshold = placed.cell.threshold
                if placed.cell.sidedness is Sidedness.DOUBLE_REQUIRED:
                    qualifies = below >= threshold and above >= threshold
                else:
                    qualifies = below >= threshold or above >= threshold
                if not qualifies:
                    continue
                self._evaluated.add(index)
                if self._draw(index, placed.cell.reliability):
                    self._flip(index, placed)

    def _draw(self, index: int, reliability: float) -> bool:
        if reliability >= 1.0:
            return True
        rng = default_rng([self.seed, self.epoch, index])
        return bool(rng.random() < reliability)

    def _flip(self, index: int, placed: _PlacedCell) -> None:
        self.frame(placed.pfn)[placed.byte] ^= uint8(1 << placed.cell.bit)
        event = FlipEvent(
            pa=placed.pa,
            bit=placed.cell.bit,
            epoch=self.epoch,
            pfn=placed.pfn,
            byte=placed.byte,
            row=placed.cell.row_address,
            cell=index,
        )
        self.flips.append(event)
        logger.debug("Bit flip at %#x bit %d in %s (epoch %d)", event.pa, event.bit, event.row, event.epoch)
