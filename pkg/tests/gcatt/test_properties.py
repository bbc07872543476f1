import pytest
from numpy import ones, zeros

from catt.bcatt.memory_map import MemoryMap
from catt.bcatt.pipeline import FrameAvailability, apply_map, derive_blacklist, extend_map
from catt.gcatt.allocator import BuddyAllocator
from catt.gcatt.audit import audit_buddy, audit_composition, audit_domains, audit_isolation
from catt.gcatt.domain import AllocFlags
from catt.gcatt.frame import FrameState
from catt.gcatt.policy import DynamicAdjacencyPolicy, KernelUserSplitPolicy, NoPartitionPolicy
from catt.gcatt.workload import run_workload

POLICIES = {
    "none": lambda: NoPartitionPolicy(),
    "split": lambda: KernelUserSplitPolicy(guard_rows=1, kernel_base=0),
    "dynamic": lambda: DynamicAdjacencyPolicy(guard_rows=1),
}


@pytest.fixture(scope="module")
def availability(exploit_mini, calibration_profile):
    blacklist = derive_blacklist(calibration_profile, exploit_mini)
    geometry = exploit_mini.geometry
    return apply_map(extend_map(MemoryMap.all_usable(geometry), blacklist, geometry), geometry)


def _check(exploit_mini, availability, name, operations, seed):
    allocator = BuddyAllocator(exploit_mini, availability=availability, policy=POLICIES[name]())
    guard_rows = None if name == "none" else 1
    report = run_workload(
        allocator,
        operations,
        seed=seed,
        audit_every=1000,
        guard_rows=guard_rows,
        availability=availability,
    )

    assert report.violations == []
    assert report.operations == operations
    assert report.allocations > 0
    assert report.frees > 0
    assert report.audits == operations // 1000 + 1
    return report


@pytest.mark.parametrize("name", sorted(POLICIES))
def test_short_workload_keeps_invariants(exploit_mini, availability, name):
    _check(exploit_mini, availability, name, operations=3000, seed=5)


@pytest.mark.slow
@pytest.mark.parametrize("name", sorted(POLICIES))
def test_long_workload_keeps_invariants(exploit_mini, availability, name):
    report = _check(exploit_mini, availability, name, operations=100_000, seed=2017)

    if name != "none":
        assert report.denials > 0


def test_isolation_audit_flags_unpartitioned_neighbours(small):
    allocator = BuddyAllocator(small)
    allocator.alloc(1, AllocFlags.for_kernel())
    allocator.alloc(1, AllocFlags.for_user())

    assert audit_isolation(allocator, guard_rows=1) == [
        "unit 0: domain 0 in row 0 within 1 rows of domain 1"
    ]
    assert audit_isolation(allocator, guard_rows=0) == []
    assert audit_buddy(allocator) == []
    assert audit_domains(allocator) == []


def test_mixed_row_is_flagged(small):
    allocator = BuddyAllocator(small)
    allocator.alloc(0, AllocFlags.for_kernel())
    allocator.alloc(0, AllocFlags.for_user())

    assert audit_isolation(allocator, guard_rows=1) == ["row 0 of unit 0 holds domains 0 and 1"]


def test_domain_audit_flags_tagged_free_frame(small):
    allocator = BuddyAllocator(small)
    allocator.table.domain[3] = 1

    assert audit_domains(allocator) == ["1 unallocated frames carry a domain, first 3"]


def test_buddy_audit_flags_hidden_allocation(small):
    allocator = BuddyAllocator(small)
    allocator.table.state[0] = FrameState.ALLOCATED

    assert audit_buddy(allocator) == ["order-5 block at 0 holds non-free frames"]


def test_composition_audit_flags_leaked_frames(small):
    allocator = BuddyAllocator(small)

    assert audit_composition(allocator, FrameAvailability(available=zeros(32, dtype=bool))) == [
        "32 unavailable frames entered the allocator, first 0"
    ]
    assert audit_composition(allocator, FrameAvailability(available=ones(32, dtype=bool))) == []
