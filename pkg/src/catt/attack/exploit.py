from collections import Counter
from logging import getLogger
from math import ceil, floor
from typing import List, Set, Tuple

from numpy import array, int64, ndarray, zeros
from numpy.random import default_rng

from catt.attack.machine import Machine
from catt.attack.pte import is_designated, write_page_table
from catt.dram.location import RowAddress
from catt.errors import OutOfMemoryError
from catt.fault.state import FlipEvent
from catt.gcatt.domain import AllocFlags
from catt.gcatt.frame import FrameState
from catt.settings.attack import ExploitConfig
from catt.statistics.models import AttemptRecord, FlipClass

logger = getLogger(__name__)

ATTACKER_PID: int = 100


def _spray(machine: Machine, config: ExploitConfig) -> Tuple[List[int], bool]:
    """
    Fault in order-0 pages for the attacker until spray_fraction of the available
    memory is mapped or the allocator refuses.

    Returns:
        Tuple[List[int], bool]: Frames obtained, and whether the spray was cut short.
    """
    allocator = machine.allocator
    wanted = floor(config.spray_fraction * machine.availability.count)
    frames = []
    for virtual_page in range(wanted):
        try:
            frames.append(allocator.fault_in(ATTACKER_PID, virtual_page))
        except OutOfMemoryError:
            logger.debug("Spray stopped after %d of %d pages", len(frames), wanted)
            return frames, True
    return frames, False


def _candidate_rows(machine: Machine, owned: ndarray, single_sided: bool) -> List[RowAddress]:
    """
    Victim rows the attacker can hammer, scanning every bank upwards.

    A row qualifies when the attacker owns it and its aggressor rows entirely and
    the row below it is not already a chosen victim.
    """
    table = machine.allocator.table
    geometry = machine.mapping.geometry
    full_rows = owned[table.row_frames].all(axis=2)
    candidates = []
    for unit in range(geometry.bank_units):
        previous = -2
        for row in range(1, geometry.rows_per_bank - 1):
            if row - 1 == previous:
                continue
            sides = full_rows[unit, row - 1] and (single_sided or full_rows[unit, row + 1])
            if full_rows[unit, row] and sides:
                candidates.append(geometry.row_address_of_unit(unit, row))
                previous = row
    return candidates


def _classify(machine: Machine, flip: FlipEvent, attacker_domain: int, page_tables: Set[int]) -> FlipClass:
    table = machine.allocator.table
    pfn = flip.pfn
    if not machine.is_available(pfn):
        return FlipClass.UNAVAILABLE
    if pfn in page_tables:
        return FlipClass.PAGE_TABLE
    if table.state[pfn] == FrameState.ALLOCATED:
        if int(table.domain[pfn]) == attacker_domain:
            return FlipClass.ATTACKER
        return FlipClass.OTHER_DOMAIN
    if machine.is_guard_frame(pfn):
        return FlipClass.GUARD
    return FlipClass.FREE


def run_exploit(machine: Machine, config: ExploitConfig, seed: int, attempt: int = 0) -> AttemptRecord:
    """
    One page-table spray attempt.

    The attacker maps spray_fraction of the available memory, keeps only the
    aggressor rows around the victim rows it can sandwich and frees the rest. The
    kernel then fills pte_fraction of the free memory with page tables through
    ordinary kernel allocations. Finally the attacker hammers the neighbours of one
    victim row picked at random. The attempt succeeds when a flip lands in a
    designated bit of a kernel page table.

    Args:
        machine (Machine): Freshly built machine, used up by the attempt.
        config (ExploitConfig): Exploit parameters.
        seed (int): Seed of the target choice.
        attempt (int): Index within the campaign.

    Returns:
        AttemptRecord: Outcome of the attempt. Allocation failures make a failed
        attempt, not an error.
    """
    allocator = machine.allocator
    dram = machine.dram
    table = allocator.table
    rng = default_rng(seed)

    attacker_domain = allocator.register_process(ATTACKER_PID)
    sprayed, truncated = _spray(machine, config)
    owned = zeros(table.total_frames, dtype=bool)
    owned[sprayed] = True

    candidates = _candidate_rows(machine, owned, config.single_sided)
    record = AttemptRecord(
        attempt=attempt,
        seed=seed,
        sprayed=len(sprayed),
        spray_truncated=truncated,
        candidate_rows=len(candidates),
    )
    if not candidates:
        return record

    keep = zeros(table.total_frames, dtype=bool)
    for row in candidates:
        unit = machine.mapping.geometry.unit_index(row)
        keep[table.row_frames[unit, row.row - 1]] = True
        if not config.single_sided:
            keep[table.row_frames[unit, row.row + 1]] = True
    process = allocator.process(ATTACKER_PID)
    for virtual_page, pfn in list(process.page_table.items()):
        if not keep[pfn]:
            allocator.unmap(ATTACKER_PID, virtual_page)
    kept = array(sorted(process.page_table.values()), dtype=int64)

    page_tables: Set[int] = set()
    wanted = ceil(config.pte_fraction * allocator.free_frames)
    kernel = AllocFlags.for_kernel()
    for _ in range(wanted):
        try:
            pfn = allocator.alloc(0, kernel)
        except OutOfMemoryError:
            break
        write_page_table(dram, pfn, kept)
        page_tables.add(pfn)

    target = candidates[int(rng.integers(len(candidates)))]
    mark = len(dram.flips)
    dram.refresh()
    dram.activate(target.with_row(target.row - 1), config.hammer_count)
    if not config.single_sided:
        dram.activate(target.with_row(target.row + 1), config.hammer_count)
    dram.refresh()

    classes: Counter[str] = Counter()
    success = False
    cross_domain = 0
    for flip in dram.flips[mark:]:
        kind = _classify(machine, flip, attacker_domain, page_tables)
        classes[kind] += 1
        if kind in (FlipClass.PAGE_TABLE, FlipClass.OTHER_DOMAIN):
            cross_domain += 1
        if kind is FlipClass.PAGE_TABLE and is_designated(flip.page_bit):
            success = True

    return record.model_copy(
        update={
            "success": success,
            "flips": sum(classes.values()) - classes[FlipClass.UNAVAILABLE],
            "unavailable_flips": classes[FlipClass.UNAVAILABLE],
            "cross_domain_flips": cross_domain,
            "page_tables": len(page_tables),
            "target": str(target),
            "flip_classes": {str(kind): count for kind, count in sorted(classes.items())},
        }
    )
