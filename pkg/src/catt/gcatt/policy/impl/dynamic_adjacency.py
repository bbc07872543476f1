from typing import Dict

from numpy import arange, full, int16, ndarray, unique

from catt.errors import PartitionConfigError
from catt.gcatt.domain import NO_DOMAIN
from catt.gcatt.frame import FrameTable
from catt.gcatt.policy.base import PartitionPolicy, PolicyVariant

# Row owner marker for rows holding frames of several domains.
MIXED: int = -2


class DynamicAdjacencyPolicy(PartitionPolicy):
    """
    Refuse a frame when a row within guard_rows rows of it, in the same bank,
    holds a frame of another domain.

    Every process gets its own domain. Guard space is implicit: frames next to a
    foreign domain simply stay free.
    """

    variant = PolicyVariant.DYNAMIC_ADJACENCY
    per_process_domains = True

    def __init__(self, guard_rows: int = 1) -> None:
        if guard_rows < 1:
            raise PartitionConfigError(f"guard_rows must be at least 1, got {guard_rows}")
        super().__init__(guard_rows)
        self._owner: ndarray | None = None
        self._offsets = arange(-guard_rows, guard_rows + 1)
        self._masks: Dict[int, ndarray] = {}

    def bind(self, table: FrameTable) -> None:
        super().bind(table)
        geometry = table.mapping.geometry
        self._owner = full((geometry.bank_units, geometry.rows_per_bank), NO_DOMAIN, dtype=int16)
        self._masks.clear()

    def row_owner(self, unit: int, row: int) -> int:
        """
        Domain owning the allocated frames of a row, NO_DOMAIN, or MIXED.
        """
        return int(self._owner[unit, row])

    def allowed(self, domain: int, first: int, count: int) -> ndarray:
        mask = self._masks.get(domain)
        if mask is None:
            mask = self._frame_mask(domain)
            self._masks[domain] = mask
        return mask[first : first + count]

    def _frame_mask(self, domain: int) -> ndarray:
        table = self.table
        rows_per_bank = self._owner.shape[1]
        neighbours = table.rows[:, None] + self._offsets[None, :]
        inside = (neighbours >= 0) & (neighbours < rows_per_bank)
        owners = self._owner[table.units[:, None], neighbours.clip(0, rows_per_bank - 1)]
        foreign = inside & (owners != NO_DOMAIN) & (owners != domain)
        return ~foreign.any(axis=1)

    def on_allocate(self, first: int, count: int, domain: int) -> None:
        self._refresh_rows(first, count)

    def on_free(self, first: int, count: int) -> None:
        self._refresh_rows(first, count)

    def _refresh_rows(self, first: int, count: int) -> None:
        table = self.table
        cells = set(
            zip(
                table.units[first : first + count].tolist(),
                table.rows[first : first + count].tolist(),
            )
        )
        for unit, row in cells:
            domains = table.domain[table.row_frames[unit, row]]
            owners = unique(domains[domains != NO_DOMAIN])
            if len(owners) == 0:
                self._owner[unit, row] = NO_DOMAIN
            elif len(owners) == 1:
                self._owner[unit, row] = owners[0]
            else:
                self._owner[unit, row] = MIXED
        self._masks.clear()

    def describe(self) -> str:
        return f"{self.variant}(guard_rows={self.guard_rows})"
