from numpy import ndarray, ones

from catt.gcatt.policy.base import PartitionPolicy, PolicyVariant


class NoPartitionPolicy(PartitionPolicy):
    """
    Every free frame may go to every domain.
    """

    variant = PolicyVariant.NONE

    def allowed(self, domain: int, first: int, count: int) -> ndarray:
        return ones(count, dtype=bool)

    def check_blast_radius(self, blast_radius: int) -> None:
        pass
