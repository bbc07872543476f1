from logging import getLogger

from numpy import ndarray

from catt.dram.geometry import DramGeometry
from catt.errors import PartitionConfigError
from catt.gcatt.domain import KERNEL_DOMAIN
from catt.gcatt.frame import FrameTable
from catt.gcatt.policy.base import PartitionPolicy, PolicyVariant
from catt.settings.allocator import DEFAULT_KERNEL_BASE

logger = getLogger(__name__)


def resolve_split_row(rows_per_bank: int, guard_rows: int, split_row: int | None = None) -> int:
    """
    First guard row of a kernel-user split, rows_per_bank // 2 unless requested.

    Raises:
        PartitionConfigError: If either part of the bank would be empty.
    """
    if split_row is None:
        split_row = rows_per_bank // 2
    if split_row < 1 or split_row + guard_rows >= rows_per_bank:
        raise PartitionConfigError(
            f"split_row {split_row} with {guard_rows} guard rows leaves no user "
            f"or kernel part in a {rows_per_bank}-row bank."
        )
    return split_row


class KernelUserSplitPolicy(PartitionPolicy):
    """
    Divide every bank into a kernel part and a user part separated by guard rows.

    Rows [0, split_row) form the lower part and [split_row + guard_rows, rows_per_bank)
    the upper part. The kernel gets the lower part when the row holding
    `kernel_base` lies below split_row, the upper part otherwise. Guard rows belong
    to nobody. Every non-kernel domain shares the user part.
    """

    variant = PolicyVariant.KERNEL_USER_SPLIT

    def __init__(
        self,
        guard_rows: int = 1,
        kernel_base: int = DEFAULT_KERNEL_BASE,
        split_row: int | None = None,
    ) -> None:
        if guard_rows < 1:
            raise PartitionConfigError(f"guard_rows must be at least 1, got {guard_rows}")
        super().__init__(guard_rows)
        self.kernel_base = kernel_base
        self.requested_split_row = split_row
        self.split_row: int | None = None
        self.kernel_is_lower = True
        self._kernel_frames: ndarray | None = None
        self._user_frames: ndarray | None = None

    def bind(self, table: FrameTable) -> None:
        super().bind(table)
        geometry = table.mapping.geometry
        split_row = resolve_split_row(
            geometry.rows_per_bank, self.guard_rows, self.requested_split_row
        )

        self.split_row = split_row
        self.kernel_is_lower = table.mapping.row_address(self.kernel_base).row < split_row
        lower = table.rows < split_row
        upper = table.rows >= split_row + self.guard_rows
        self._kernel_frames = lower if self.kernel_is_lower else upper
        self._user_frames = upper if self.kernel_is_lower else lower
        logger.debug(
            "Kernel-user split at row %d (%d guard rows), kernel in the %s part",
            split_row,
            self.guard_rows,
            "lower" if self.kernel_is_lower else "upper",
        )

    def in_kernel_part(self, row: int) -> bool:
        if self.kernel_is_lower:
            return row < self.split_row
        return row >= self.split_row + self.guard_rows

    def in_user_part(self, row: int) -> bool:
        if self.kernel_is_lower:
            return row >= self.split_row + self.guard_rows
        return row < self.split_row

    def is_guard_row(self, row: int) -> bool:
        return not self.in_kernel_part(row) and not self.in_user_part(row)

    def allowed(self, domain: int, first: int, count: int) -> ndarray:
        if self._kernel_frames is None:
            raise RuntimeError("KernelUserSplitPolicy is not bound to a frame table.")
        part = self._kernel_frames if domain == KERNEL_DOMAIN else self._user_frames
        return part[first : first + count]

    def overhead(self, geometry: DramGeometry) -> float:
        return self.guard_rows / geometry.rows_per_bank

    def describe(self) -> str:
        return f"{self.variant}(guard_rows={self.guard_rows}, kernel_base={self.kernel_base:#x})"
