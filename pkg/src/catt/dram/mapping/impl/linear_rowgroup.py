from numpy import ndarray

from catt.dram.mapping.base import MappingScheme, SchemeId


class LinearRowgroupMapping(MappingScheme):
    """
    Default mapping: rows are major, DIMM/rank/bank interleave beneath them.

    This is the only simple layout consistent with
    Row(PA) = PA / (PageSize * PagesPerDIMM * DIMMs).
    """

    scheme_id = SchemeId.LINEAR_ROWGROUP

    def to_linear(self, pa: int) -> int:
        return pa

    def from_linear(self, linear: int) -> int:
        return linear

    def to_linear_array(self, addresses: ndarray) -> ndarray:
        return addresses
