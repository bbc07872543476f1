from catt.bcatt.overhead import format_percentage
from catt.dram.geometry import DramGeometry
from catt.gcatt.policy import PartitionPolicy


def gcatt_overhead(policy: PartitionPolicy, geometry: DramGeometry) -> float:
    """
    Fraction of memory lost to guard rows.

    The kernel-user split loses guard_rows / rows_per_bank of every bank. The other
    policies reserve nothing up front.
    """
    return policy.overhead(geometry)


def render_gcatt_overhead(fraction: float) -> str:
    """
    Render a guard-row overhead, e.g. 2^-15 -> '0.003%'.
    """
    return format_percentage(fraction, decimals=3)
