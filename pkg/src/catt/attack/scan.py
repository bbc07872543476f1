from logging import getLogger
from typing import List, Tuple

from numpy import flatnonzero, zeros

from catt.attack.machine import Machine
from catt.errors import OutOfMemoryError
from catt.gcatt.domain import AllocFlags
from catt.settings.attack import ScanConfig

logger = getLogger(__name__)

SCANNER_PID: int = 1


def _claim_memory(machine: Machine) -> List[Tuple[int, int]]:
    """
    Allocate every frame the scanner process can get, largest blocks first.

    Returns:
        List[Tuple[int, int]]: (first PFN, order) of every block obtained.
    """
    allocator = machine.allocator
    allocator.register_process(SCANNER_PID)
    flags = AllocFlags.for_user(SCANNER_PID)
    blocks = []
    for order in range(allocator.max_order, -1, -1):
        while True:
            try:
                blocks.append((allocator.alloc(order, flags), order))
            except OutOfMemoryError:
                break
    return blocks


def scan(machine: Machine, config: ScanConfig) -> List[int]:
    """
    Double-sided scan for victim frames.

    The scanner allocates all the memory it can. For every row it fully or partly
    owns whose two neighbours it also owns, it fills its frames of that row with the
    pattern, activates both neighbours hammer_count times within one refresh epoch,
    refreshes and reports the frames that changed. Frames the scanner cannot
    allocate are never tested.

    Args:
        machine (Machine): Freshly built machine.
        config (ScanConfig): Scan parameters.

    Returns:
        List[int]: Victim PFNs, ascending.
    """
    allocator = machine.allocator
    dram = machine.dram
    table = allocator.table
    geometry = machine.mapping.geometry

    blocks = _claim_memory(machine)
    owned = zeros(table.total_frames, dtype=bool)
    for first, order in blocks:
        owned[first : first + (1 << order)] = True
    owned_rows = owned[table.row_frames].any(axis=2)
    logger.info(
        "Scanning %d owned frames for %d run(s), %d activations per side",
        int(owned.sum()),
        config.coverage_runs,
        config.hammer_count,
    )

    found = set()
    dram.refresh()
    for run in range(config.coverage_runs):
        for unit in range(geometry.bank_units):
            testable = owned_rows[unit, 1:-1] & owned_rows[unit, :-2] & owned_rows[unit, 2:]
            for row in (flatnonzero(testable) + 1).tolist():
                victims = [pfn for pfn in table.row_frames[unit, row].tolist() if owned[pfn]]
                for pfn in victims:
                    dram.fill_frame(pfn, config.pattern)
                aggressor = geometry.row_address_of_unit(unit, row)
                dram.activate(aggressor.with_row(row - 1), config.hammer_count)
                dram.activate(aggressor.with_row(row + 1), config.hammer_count)
                dram.refresh()
                found.update(pfn for pfn in victims if dram.frame_differs(pfn, config.pattern))
        logger.debug("Scan run %d: %d victim frames so far", run + 1, len(found))

    for first, _ in blocks:
        allocator.free(first)
    allocator.exit_process(SCANNER_PID)

    logger.info("Scan found %d victim frames", len(found))
    return sorted(found)
