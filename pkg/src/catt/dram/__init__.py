from catt.dram.geometry import DramGeometry, row_index
from catt.dram.location import DramLocation, RowAddress


__all__ = [
    "DramGeometry",
    "DramLocation",
    "RowAddress",
    "row_index",
]
