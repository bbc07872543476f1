from dataclasses import dataclass, field
from logging import getLogger
from typing import List, Tuple

from numpy.random import default_rng

from catt.bcatt.pipeline import FrameAvailability
from catt.errors import OutOfMemoryError
from catt.gcatt.allocator import BuddyAllocator
from catt.gcatt.audit import audit_all
from catt.gcatt.domain import AllocFlags

logger = getLogger(__name__)

# Request sizes of the workload, weighted towards single frames.
ORDERS: Tuple[int, ...] = (0, 0, 0, 0, 1, 1, 2, 3)


@dataclass
class WorkloadReport:
    """
    Counters of a random allocation workload.

    Attributes:
        operations (int): Operations issued.
        allocations (int): Successful allocations.
        frees (int): Blocks released.
        denials (int): Allocations refused for lack of a compliant block.
        audits (int): Audits run.
        violations (List[str]): Audit findings, empty when every audit passed.
    """

    operations: int = 0
    allocations: int = 0
    frees: int = 0
    denials: int = 0
    audits: int = 0
    violations: List[str] = field(default_factory=list)


def run_workload(
    allocator: BuddyAllocator,
    operations: int,
    seed: int = 0,
    processes: int = 4,
    kernel_share: float = 0.3,
    audit_every: int = 1000,
    guard_rows: int | None = None,
    availability: FrameAvailability | None = None,
) -> WorkloadReport:
    """
    Drive an allocator with seeded random kernel and user allocations and frees,
    auditing it periodically and once at the end.

    Args:
        allocator (BuddyAllocator): Allocator under test.
        operations (int): Number of alloc or free operations.
        seed (int): Workload seed.
        processes (int): User processes issuing requests.
        kernel_share (float): Probability that an allocation is a kernel request.
        audit_every (int): Operations between audits, 0 to audit only at the end.
        guard_rows (int | None): Isolation distance checked by the audits.
        availability (FrameAvailability | None): Memory map checked by the audits.

    Returns:
        WorkloadReport: Counters and audit findings.
    """
    rng = default_rng(seed)
    pids = list(range(1, processes + 1))
    for pid in pids:
        allocator.register_process(pid)

    report = WorkloadReport()
    live: List[Tuple[int, int]] = []
    for step in range(operations):
        if live and rng.random() < 0.45:
            index = int(rng.integers(len(live)))
            live[index], live[-1] = live[-1], live[index]
            first, order = live.pop()
            allocator.free(first, order)
            report.frees += 1
        else:
            order = ORDERS[int(rng.integers(len(ORDERS)))]
            if rng.random() < kernel_share:
                flags = AllocFlags.for_kernel()
            else:
                flags = AllocFlags.for_user(pids[int(rng.integers(len(pids)))])
            try:
                live.append((allocator.alloc(order, flags), order))
                report.allocations += 1
            except OutOfMemoryError:
                report.denials += 1
        report.operations += 1

        if audit_every and (step + 1) % audit_every == 0:
            _audit(allocator, report, guard_rows, availability)

    _audit(allocator, report, guard_rows, availability)
    logger.info(
        "Workload done: %d allocations, %d frees, %d denials, %d audits, %d violations",
        report.allocations,
        report.frees,
        report.denials,
        report.audits,
        len(report.violations),
    )
    return report


def _audit(
    allocator: BuddyAllocator,
    report: WorkloadReport,
    guard_rows: int | None,
    availability: FrameAvailability | None,
) -> None:
    findings = audit_all(allocator, guard_rows=guard_rows, availability=availability)
    report.audits += 1
    if findings:
        logger.error("Audit %d after %d operations failed: %s", report.audits, report.operations, findings[0])
        report.violations.extend(findings)
