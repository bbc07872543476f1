from catt.gcatt.policy.base import PartitionPolicy, PolicyVariant
from catt.gcatt.policy.impl.dynamic_adjacency import DynamicAdjacencyPolicy
from catt.gcatt.policy.impl.kernel_user_split import KernelUserSplitPolicy
from catt.gcatt.policy.impl.none import NoPartitionPolicy
from catt.settings.allocator import DEFAULT_KERNEL_BASE


def build_policy(
    variant: PolicyVariant | str,
    guard_rows: int = 1,
    kernel_base: int = DEFAULT_KERNEL_BASE,
    split_row: int | None = None,
) -> PartitionPolicy:
    """
    Instantiate a partitioning policy by name.

    Args:
        variant (PolicyVariant | str): Policy name.
        guard_rows (int): Rows separating domains; ignored by the none policy.
        kernel_base (int): Physical address of the kernel image (split policy).
        split_row (int | None): First guard row (split policy).

    Returns:
        PartitionPolicy: Unbound policy instance.
    """
    match PolicyVariant(variant):
        case PolicyVariant.NONE:
            return NoPartitionPolicy()
        case PolicyVariant.KERNEL_USER_SPLIT:
            return KernelUserSplitPolicy(
                guard_rows=guard_rows, kernel_base=kernel_base, split_row=split_row
            )
        case PolicyVariant.DYNAMIC_ADJACENCY:
            return DynamicAdjacencyPolicy(guard_rows=guard_rows)


__all__ = [
    "DynamicAdjacencyPolicy",
    "KernelUserSplitPolicy",
    "NoPartitionPolicy",
    "PartitionPolicy",
    "PolicyVariant",
    "build_policy",
]
