from dataclasses import dataclass


@dataclass(frozen=True, slots=True, order=True)
class RowAddress:
    """
    A single DRAM row, identified by its bank coordinates and row index.

    Adjacency is only defined between rows sharing (dimm, rank, bank).
    """

    dimm: int
    rank: int
    bank: int
    row: int

    def same_bank(self, other: "RowAddress") -> bool:
        return (self.dimm, self.rank, self.bank) == (other.dimm, other.rank, other.bank)

    def with_row(self, row: int) -> "RowAddress":
        return RowAddress(dimm=self.dimm, rank=self.rank, bank=self.bank, row=row)

    def distance(self, other: "RowAddress") -> int | None:
        """
        Row distance to another row in the same bank.

        Returns:
            int | None: |row difference|, or None when the banks differ.
        """
        if not self.same_bank(other):
            return None
        return abs(self.row - other.row)

    def __str__(self) -> str:
        return f"d{self.dimm}.r{self.rank}.b{self.bank:02d}.row{self.row:06d}"


@dataclass(frozen=True, slots=True, order=True)
class DramLocation:
    """
    Decoded coordinates of a physical address.

    Attributes:
        dimm (int): DIMM index.
        rank (int): Rank index within the DIMM.
        bank (int): Bank index within the rank.
        row (int): Row index within the bank.
        offset (int): Byte offset within the row.
    """

    dimm: int
    rank: int
    bank: int
    row: int
    offset: int

    @property
    def row_address(self) -> RowAddress:
        return RowAddress(dimm=self.dimm, rank=self.rank, bank=self.bank, row=self.row)

    @classmethod
    def at(cls, address: RowAddress, offset: int) -> "DramLocation":
        return cls(
            dimm=address.dimm,
            rank=address.rank,
            bank=address.bank,
            row=address.row,
            offset=offset,
        )
