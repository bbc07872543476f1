from abc import ABC, abstractmethod
from enum import StrEnum
from typing import ClassVar

from numpy import ndarray

from catt.dram.geometry import DramGeometry
from catt.errors import PartitionConfigError
from catt.gcatt.frame import FrameTable


class PolicyVariant(StrEnum):
    NONE = "none"
    KERNEL_USER_SPLIT = "kernel-user-split"
    DYNAMIC_ADJACENCY = "dynamic-adjacency"


class PartitionPolicy(ABC):
    """
    Placement rule consulted by the buddy allocator before handing out a block.

    The allocator calls `bind` once, then asks `allowed` which frames of a range
    may be given to a domain, and reports every allocation and release so that
    stateful policies can track ownership.
    """

    variant: ClassVar[PolicyVariant]
    per_process_domains: ClassVar[bool] = False

    def __init__(self, guard_rows: int = 0) -> None:
        self.guard_rows = guard_rows
        self._table: FrameTable | None = None

    def bind(self, table: FrameTable) -> None:
        self._table = table

    @property
    def table(self) -> FrameTable:
        if self._table is None:
            raise RuntimeError(f"{type(self).__name__} is not bound to a frame table.")
        return self._table

    @abstractmethod
    def allowed(self, domain: int, first: int, count: int) -> ndarray:
        """
        Which frames of [first, first + count) may be allocated to `domain`.

        Returns:
            ndarray: Boolean array of length `count`.
        """
        ...

    def check(self, first: int, order: int, domain: int) -> bool:
        """
        Whether a whole block may be allocated to `domain`.
        """
        return bool(self.allowed(domain, first, 1 << order).all())

    def on_allocate(self, first: int, count: int, domain: int) -> None:
        pass

    def on_free(self, first: int, count: int) -> None:
        pass

    def check_blast_radius(self, blast_radius: int) -> None:
        """
        Raises:
            PartitionConfigError: If the guard is narrower than the disturbance reach.
        """
        if self.guard_rows < blast_radius:
            raise PartitionConfigError(
                f"{self.variant} needs guard_rows >= blast radius ({blast_radius}), "
                f"got {self.guard_rows}."
            )

    def overhead(self, geometry: DramGeometry) -> float:
        """
        Fraction of memory the policy makes permanently unallocatable.
        """
        return 0.0

    def describe(self) -> str:
        return str(self.variant)
