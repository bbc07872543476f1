from bisect import bisect_left, insort
from dataclasses import dataclass, field
from logging import getLogger
from typing import Dict, List

from numpy import flatnonzero

from catt.bcatt.pipeline import FrameAvailability
from catt.dram.mapping import MappingScheme
from catt.errors import (
    DoubleFreeError,
    OutOfMemoryError,
    PfnOutOfRangeError,
    ProcessNotRegisteredError,
    RangeNotAllocatedError,
)
from catt.gcatt.domain import (
    FIRST_PROCESS_DOMAIN,
    KERNEL_DOMAIN,
    NO_DOMAIN,
    USER_DOMAIN,
    AllocFlags,
    domain_name,
)
from catt.gcatt.frame import FrameState, FrameTable
from catt.gcatt.policy import NoPartitionPolicy, PartitionPolicy
from catt.gcatt.trace import AllocationTrace

logger = getLogger(__name__)

DEFAULT_MAX_ORDER: int = 11


@dataclass
class Process:
    """
    A simulated process and its page table.

    Attributes:
        pid (int): Process identifier.
        domain (int): Security domain of the pages it faults in.
        page_table (Dict[int, int]): Virtual page number to PFN.
    """

    pid: int
    domain: int
    page_table: Dict[int, int] = field(default_factory=dict)


class BuddyAllocator:
    """
    Power-of-two page frame allocator with per-frame security domains.

    Free blocks are kept in one ascending list per order. A request takes the
    lowest-addressed block of the smallest sufficient order that the partitioning
    policy accepts; inside a larger block the lowest accepted sub-block is carved
    out. When no accepted block exists the request fails even if other blocks are
    free. Freed blocks coalesce with their buddies as far as possible and lose
    their domain.

    Mutating operations must be serialized by the caller.
    """

    def __init__(
        self,
        mapping: MappingScheme,
        availability: FrameAvailability | None = None,
        policy: PartitionPolicy | None = None,
        max_order: int = DEFAULT_MAX_ORDER,
        trace: AllocationTrace | None = None,
    ) -> None:
        """
        Args:
            mapping (MappingScheme): Address mapping of the machine.
            availability (FrameAvailability | None): Frames the memory map allows.
                None makes every frame available.
            policy (PartitionPolicy | None): Partitioning policy, none by default.
            max_order (int): Largest block order.
            trace (AllocationTrace | None): Log receiving every alloc and free.
        """
        if max_order < 0:
            raise ValueError(f"max_order must be non-negative, got {max_order}")

        self.mapping = mapping
        self.max_order = max_order
        self.table = FrameTable(mapping, availability)
        self.policy = policy if policy is not None else NoPartitionPolicy()
        self.policy.bind(self.table)
        self.trace = trace

        self._free: List[List[int]] = [[] for _ in range(max_order + 1)]
        self._free_order: Dict[int, int] = {}
        self._processes: Dict[int, Process] = {}
        self._next_process_domain = FIRST_PROCESS_DOMAIN

        self._seed_free_lists()
        logger.debug(
            "Allocator ready: %d free frames, policy %s",
            self.free_frames,
            self.policy.describe(),
        )

    def _seed_free_lists(self) -> None:
        free = flatnonzero(self.table.state == FrameState.FREE)
        if len(free) == 0:
            return
        breaks = flatnonzero(free[1:] != free[:-1] + 1) + 1
        starts = [int(free[0])] + free[breaks].tolist()
        stops = (free[breaks - 1] + 1).tolist() + [int(free[-1]) + 1]
        for start, stop in zip(starts, stops):
            while start < stop:
                order = self.max_order
                while order > 0 and (start % (1 << order) or start + (1 << order) > stop):
                    order -= 1
                self._push(start, order)
                start += 1 << order

    def _push(self, start: int, order: int) -> None:
        insort(self._free[order], start)
        self._free_order[start] = order

    def _remove(self, start: int, order: int) -> None:
        blocks = self._free[order]
        del blocks[bisect_left(blocks, start)]
        del self._free_order[start]

    # Introspection

    @property
    def free_frames(self) -> int:
        return sum(len(blocks) << order for order, blocks in enumerate(self._free))

    def free_blocks(self) -> Dict[int, List[int]]:
        """
        Copy of the free lists, keyed by order, empty orders omitted.
        """
        return {order: list(blocks) for order, blocks in enumerate(self._free) if blocks}

    def free_block_order(self, start: int) -> int | None:
        return self._free_order.get(start)

    def allocation_order(self, pfn: int) -> int | None:
        order = int(self.table.head_order[pfn])
        return order if order >= 0 else None

    # Allocation

    def resolve_domain(self, flags: AllocFlags) -> int:
        """
        Security domain of a request: kernel, the shared user domain, or the
        requesting process's own domain when the policy isolates processes.
        """
        if flags.kernel:
            return KERNEL_DOMAIN
        if flags.pid is not None and self.policy.per_process_domains:
            return self.process(flags.pid).domain
        return USER_DOMAIN

    def alloc(self, order: int, flags: AllocFlags) -> int:
        """
        Allocate a block of 2^order frames for the requester described by `flags`.

        Returns:
            int: First PFN of the block.

        Raises:
            OutOfMemoryError: If no policy-compliant block exists.
            ProcessNotRegisteredError: If flags name an unknown process.
        """
        return self.alloc_for_domain(order, self.resolve_domain(flags))

    def alloc_for_domain(self, order: int, domain: int) -> int:
        """
        Allocate a block of 2^order frames owned by `domain`.

        Raises:
            OutOfMemoryError: If no policy-compliant block exists.
            ValueError: If order exceeds max_order or the domain is invalid.
        """
        if not 0 <= order <= self.max_order:
            raise ValueError(f"order must lie in [0, {self.max_order}], got {order}")
        if domain < 0:
            raise ValueError(f"Cannot allocate for domain {domain}.")

        size = 1 << order
        for block_order in range(order, self.max_order + 1):
            block_size = 1 << block_order
            for start in self._free[block_order]:
                allowed = self.policy.allowed(domain, start, block_size)
                if block_order == order:
                    if not allowed.all():
                        continue
                    target = start
                else:
                    fits = allowed.reshape(-1, size).all(axis=1)
                    if not fits.any():
                        continue
                    target = start + int(fits.argmax()) * size
                self._carve(start, block_order, target, order)
                self._mark_allocated(target, order, domain)
                if self.trace is not None:
                    self.trace.record_alloc(order, domain, target)
                return target

        if self.trace is not None:
            self.trace.record_alloc(order, domain, None)
        logger.debug("No order-%d block for %s", order, domain_name(domain))
        raise OutOfMemoryError(
            f"No free order-{order} block satisfies the {self.policy.variant} policy "
            f"for domain {domain_name(domain)}."
        )

    def _carve(self, start: int, order: int, target: int, target_order: int) -> None:
        self._remove(start, order)
        while order > target_order:
            order -= 1
            half = 1 << order
            if target >= start + half:
                self._push(start, order)
                start += half
            else:
                self._push(start + half, order)

    def _mark_allocated(self, first: int, order: int, domain: int) -> None:
        count = 1 << order
        self.table.state[first : first + count] = FrameState.ALLOCATED
        self.table.domain[first : first + count] = domain
        self.table.head_order[first] = order
        self.policy.on_allocate(first, count, domain)

    def free(self, first: int, order: int | None = None) -> None:
        """
        Release an allocated block and coalesce it with free buddies.

        Args:
            first (int): First PFN of the block, as returned by `alloc`.
            order (int | None): Order of the block; the recorded order when None.

        Raises:
            PfnOutOfRangeError: If `first` is not a frame of the machine.
            DoubleFreeError: If the block is already free.
            RangeNotAllocatedError: If no allocation of that order starts at `first`.
        """
        if not 0 <= first < self.table.total_frames:
            raise PfnOutOfRangeError(f"PFN {first} outside [0, {self.table.total_frames}).")
        if self.table.state[first] == FrameState.FREE:
            raise DoubleFreeError(f"PFN {first} is already free.")

        recorded = int(self.table.head_order[first])
        if recorded < 0 or (order is not None and order != recorded):
            raise RangeNotAllocatedError(
                f"No order-{order if order is not None else '?'} allocation starts at PFN {first}."
            )

        count = 1 << recorded
        self.table.state[first : first + count] = FrameState.FREE
        self.table.domain[first : first + count] = NO_DOMAIN
        self.table.head_order[first] = -1
        self.policy.on_free(first, count)
        if self.trace is not None:
            self.trace.record_free(first, recorded)

        start, block_order = first, recorded
        while block_order < self.max_order:
            buddy = start ^ (1 << block_order)
            if self._free_order.get(buddy) != block_order:
                break
            self._remove(buddy, block_order)
            start = min(start, buddy)
            block_order += 1
        self._push(start, block_order)

    # Processes

    def register_process(self, pid: int) -> int:
        """
        Make a process known to the allocator.

        Returns:
            int: Domain of the pages the process will fault in.
        """
        if pid in self._processes:
            return self._processes[pid].domain
        if self.policy.per_process_domains:
            domain = self._next_process_domain
            self._next_process_domain += 1
        else:
            domain = USER_DOMAIN
        self._processes[pid] = Process(pid=pid, domain=domain)
        logger.debug("Registered process %d in domain %s", pid, domain_name(domain))
        return domain

    def process(self, pid: int) -> Process:
        try:
            return self._processes[pid]
        except KeyError:
            raise ProcessNotRegisteredError(f"Process {pid} is not registered.") from None

    def fault_in(self, pid: int, virtual_page: int) -> int:
        """
        Serve a page fault: back a virtual page of a process with a fresh frame.

        A page that is already mapped keeps its frame.

        Returns:
            int: PFN backing the page.

        Raises:
            ProcessNotRegisteredError: If the process is unknown.
            OutOfMemoryError: If the policy leaves no frame for the process.
        """
        process = self.process(pid)
        if virtual_page in process.page_table:
            return process.page_table[virtual_page]
        pfn = self.alloc_for_domain(0, process.domain)
        process.page_table[virtual_page] = pfn
        return pfn

    def unmap(self, pid: int, virtual_page: int) -> None:
        """
        Drop a page of a process and free its frame.

        Raises:
            ProcessNotRegisteredError: If the process is unknown.
            RangeNotAllocatedError: If the page is not mapped.
        """
        process = self.process(pid)
        try:
            pfn = process.page_table.pop(virtual_page)
        except KeyError:
            raise RangeNotAllocatedError(
                f"Virtual page {virtual_page} of process {pid} is not mapped."
            ) from None
        self.free(pfn, 0)

    def exit_process(self, pid: int) -> None:
        """
        Free every frame of a process and forget it.
        """
        process = self.process(pid)
        for pfn in process.page_table.values():
            self.free(pfn, 0)
        del self._processes[pid]
        logger.debug("Process %d exited, %d frames released", pid, len(process.page_table))
