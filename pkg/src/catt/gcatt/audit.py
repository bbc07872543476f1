from typing import List

from numpy import flatnonzero, full, int16, unique

from catt.bcatt.pipeline import FrameAvailability
from catt.gcatt.allocator import BuddyAllocator
from catt.gcatt.domain import NO_DOMAIN
from catt.gcatt.frame import FrameState


def audit_buddy(allocator: BuddyAllocator) -> List[str]:
    """
    Check that the free lists partition exactly the free frames into aligned,
    disjoint and maximally coalesced blocks.

    Returns:
        List[str]: Violations, empty when sound.
    """
    violations = []
    table = allocator.table
    covered = full(table.total_frames, False)
    for order, blocks in allocator.free_blocks().items():
        size = 1 << order
        for start in blocks:
            if start % size:
                violations.append(f"order-{order} block at {start} is misaligned")
            if covered[start : start + size].any():
                violations.append(f"order-{order} block at {start} overlaps another block")
            covered[start : start + size] = True
            if (table.state[start : start + size] != FrameState.FREE).any():
                violations.append(f"order-{order} block at {start} holds non-free frames")
            if order < allocator.max_order:
                buddy = start ^ size
                if allocator.free_block_order(buddy) == order:
                    violations.append(f"order-{order} blocks {start} and {buddy} not coalesced")

    stray = flatnonzero((table.state == FrameState.FREE) & ~covered)
    if len(stray):
        violations.append(f"{len(stray)} free frames missing from free lists, first {stray[0]}")
    return violations


def audit_domains(allocator: BuddyAllocator) -> List[str]:
    """
    Check that free frames carry no domain and allocated frames carry one.
    """
    table = allocator.table
    violations = []
    tagged_free = flatnonzero((table.state != FrameState.ALLOCATED) & (table.domain != NO_DOMAIN))
    if len(tagged_free):
        violations.append(f"{len(tagged_free)} unallocated frames carry a domain, first {tagged_free[0]}")
    untagged = flatnonzero((table.state == FrameState.ALLOCATED) & (table.domain == NO_DOMAIN))
    if len(untagged):
        violations.append(f"{len(untagged)} allocated frames carry no domain, first {untagged[0]}")
    return violations


def audit_isolation(allocator: BuddyAllocator, guard_rows: int) -> List[str]:
    """
    Check that frames of different domains are never within guard_rows rows of each
    other in the same bank, i.e. their row distance is at least guard_rows + 1.
    """
    table = allocator.table
    geometry = allocator.mapping.geometry
    owner = full((geometry.bank_units, geometry.rows_per_bank), NO_DOMAIN, dtype=int16)
    violations = []

    allocated = flatnonzero(table.state == FrameState.ALLOCATED)
    for pfn in allocated.tolist():
        unit, row = int(table.units[pfn]), int(table.rows[pfn])
        domain = int(table.domain[pfn])
        current = int(owner[unit, row])
        if current not in (NO_DOMAIN, domain):
            violations.append(f"row {row} of unit {unit} holds domains {current} and {domain}")
        owner[unit, row] = domain

    for unit in range(geometry.bank_units):
        rows = flatnonzero(owner[unit] != NO_DOMAIN)
        for row in rows.tolist():
            domain = int(owner[unit, row])
            window = owner[unit, row + 1 : row + guard_rows + 1]
            foreign = unique(window[(window != NO_DOMAIN) & (window != domain)])
            for other in foreign.tolist():
                violations.append(
                    f"unit {unit}: domain {domain} in row {row} within {guard_rows} rows of domain {other}"
                )
    return violations


def audit_composition(allocator: BuddyAllocator, availability: FrameAvailability) -> List[str]:
    """
    Check that frames the memory map made unavailable are never free or allocated.
    """
    table = allocator.table
    leaked = flatnonzero(~availability.available & (table.state != FrameState.UNAVAILABLE))
    if len(leaked):
        return [f"{len(leaked)} unavailable frames entered the allocator, first {leaked[0]}"]
    return []


def audit_all(
    allocator: BuddyAllocator,
    guard_rows: int | None = None,
    availability: FrameAvailability | None = None,
) -> List[str]:
    """
    Run every applicable audit.

    Args:
        allocator (BuddyAllocator): Allocator to inspect.
        guard_rows (int | None): Isolation distance; isolation is skipped when None.
        availability (FrameAvailability | None): Memory-map bitmap; composition is
            skipped when None.
    """
    violations = audit_buddy(allocator) + audit_domains(allocator)
    if guard_rows is not None:
        violations += audit_isolation(allocator, guard_rows)
    if availability is not None:
        violations += audit_composition(allocator, availability)
    return violations
