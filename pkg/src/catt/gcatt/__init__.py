from catt.gcatt.allocator import BuddyAllocator, Process
from catt.gcatt.domain import (
    KERNEL_DOMAIN,
    NO_DOMAIN,
    USER_DOMAIN,
    AllocFlags,
)
from catt.gcatt.overhead import gcatt_overhead, render_gcatt_overhead
from catt.gcatt.policy import PartitionPolicy, PolicyVariant, build_policy
from catt.gcatt.trace import AllocationTrace, replay


__all__ = [
    "KERNEL_DOMAIN",
    "NO_DOMAIN",
    "USER_DOMAIN",
    "AllocFlags",
    "AllocationTrace",
    "BuddyAllocator",
    "PartitionPolicy",
    "PolicyVariant",
    "Process",
    "build_policy",
    "gcatt_overhead",
    "render_gcatt_overhead",
    "replay",
]
