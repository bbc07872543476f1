import pytest

from catt.errors import InputParseError, OutOfMemoryError
from catt.gcatt.allocator import BuddyAllocator
from catt.gcatt.domain import AllocFlags
from catt.gcatt.policy import KernelUserSplitPolicy
from catt.gcatt.trace import AllocationTrace, TraceEvent, replay
from catt.gcatt.workload import run_workload


def _split(mapping, trace=None) -> BuddyAllocator:
    return BuddyAllocator(mapping, policy=KernelUserSplitPolicy(guard_rows=1, kernel_base=0), trace=trace)


def test_operations_are_recorded(small):
    trace = AllocationTrace()
    allocator = _split(small, trace)

    kernel = allocator.alloc(0, AllocFlags.for_kernel())
    allocator.alloc(1, AllocFlags.for_user())
    allocator.free(kernel)

    assert trace.lines() == [
        "alloc 0 0 -> 0",
        "alloc 1 1 -> 18",
        "free 0 0",
    ]


def test_denial_is_recorded(small):
    trace = AllocationTrace()
    allocator = _split(small, trace)

    with pytest.raises(OutOfMemoryError):
        allocator.alloc(5, AllocFlags.for_kernel())

    assert trace.lines() == ["alloc 5 0 -> OOM"]


def test_trace_file_round_trip(small, tmp_path):
    trace = AllocationTrace()
    run_workload(_split(small, trace), operations=200, seed=3, audit_every=0)
    path = tmp_path / "alloc.trace"

    trace.write(path)
    parsed = AllocationTrace.read(path)

    assert parsed.events == trace.events
    assert len(parsed) == len(trace)


def test_replay_reproduces_a_workload(small):
    trace = AllocationTrace()
    run_workload(_split(small, trace), operations=500, seed=11, audit_every=0)

    assert replay(trace, _split(small)) == []


def test_replay_reports_divergence(small):
    trace = AllocationTrace([TraceEvent("alloc", 0, 0, 5), TraceEvent("free", 0, None, 9)])

    divergences = replay(trace, _split(small))

    assert len(divergences) == 2
    assert divergences[0].startswith("event 0: 'alloc 0 0 -> 5' replayed as 0")
    assert divergences[1].startswith("event 1: 'free 9 0' failed")


def test_blank_lines_are_skipped():
    trace = AllocationTrace.parse(["alloc 2 3 -> 8", "", "free 8 2", "  "])

    assert trace.events == [TraceEvent("alloc", 2, 3, 8), TraceEvent("free", 2, None, 8)]


@pytest.mark.parametrize("line", ["alloc 0 -> 3", "free 3", "malloc 0 0 -> 1", "alloc 0 0 -> -1"])
def test_malformed_line(line):
    with pytest.raises(InputParseError):
        AllocationTrace.parse([line])


def test_missing_trace_file(tmp_path):
    with pytest.raises(InputParseError):
        AllocationTrace.read(tmp_path / "absent.trace")
