from bisect import bisect_left
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Tuple

from pandas import read_csv
from pandas.errors import EmptyDataError, ParserError

from catt.dram.geometry import DramGeometry
from catt.errors import InputParseError, PfnOutOfRangeError

# Largest PFN that fits the signed 64-bit frame arrays.
MAX_PFN = (1 << 63) - 1


@dataclass(frozen=True, slots=True)
class Blacklist:
    """
    Sorted set of page frame numbers excluded from use.
    """

    pfns: Tuple[int, ...] = ()

    @classmethod
    def of(cls, frames: Iterable[int]) -> "Blacklist":
        return cls(pfns=tuple(sorted({int(pfn) for pfn in frames})))

    def __len__(self) -> int:
        return len(self.pfns)

    def __iter__(self) -> Iterator[int]:
        return iter(self.pfns)

    def __contains__(self, pfn: object) -> bool:
        index = bisect_left(self.pfns, pfn)
        return index < len(self.pfns) and self.pfns[index] == pfn

    def union(self, other: "Blacklist") -> "Blacklist":
        return Blacklist.of(self.pfns + other.pfns)

    def check_range(self, geometry: DramGeometry) -> None:
        """
        Raises:
            PfnOutOfRangeError: If a PFN does not exist in the geometry.
        """
        if self.pfns and (self.pfns[0] < 0 or self.pfns[-1] >= geometry.total_frames):
            culprit = self.pfns[0] if self.pfns[0] < 0 else self.pfns[-1]
            raise PfnOutOfRangeError(
                f"PFN {culprit} outside [0, {geometry.total_frames})."
            )

    def runs(self) -> Iterator[Tuple[int, int]]:
        """
        Maximal runs of consecutive PFNs as half-open (first, stop) pairs.
        """
        if not self.pfns:
            return
        first = previous = self.pfns[0]
        for pfn in self.pfns[1:]:
            if pfn != previous + 1:
                yield first, previous + 1
                first = pfn
            previous = pfn
        yield first, previous + 1


def load_blacklist(path: Path) -> Blacklist:
    """
    Load PFNs from a text file with one decimal PFN per line.

    An empty file is an empty blacklist.

    Raises:
        InputParseError: If the file is unreadable or holds a non-integer entry.
        PfnOutOfRangeError: If an entry is too large to be a frame number.
    """
    try:
        dataframe = read_csv(path, header=None, dtype=str, skip_blank_lines=True)
    except EmptyDataError:
        return Blacklist()
    except (OSError, ParserError) as error:
        raise InputParseError(f"Cannot read PFN list {path}: {error}") from error

    if dataframe.shape[1] != 1:
        raise InputParseError(f"PFN list {path} must hold one PFN per line.")
    column = dataframe[0].str.strip()
    decimal = column.str.fullmatch(r"\d+")
    if not decimal.all():
        entry = column[~decimal].index[0]
        raise InputParseError(
            f"PFN list {path} holds a non-decimal entry {column[entry]!r} (entry {entry + 1})."
        )
    pfns = column.map(int)
    oversized = pfns > MAX_PFN
    if oversized.any():
        entry = pfns[oversized].index[0]
        raise PfnOutOfRangeError(
            f"PFN list {path} entry {entry + 1} ({column[entry]}) is not a frame number."
        )
    return Blacklist.of(pfns.tolist())


def store_blacklist(blacklist: Blacklist, path: Path) -> None:
    """
    Write one decimal PFN per line, ascending. An empty blacklist is an empty file.
    """
    Path(path).write_text("".join(f"{pfn}\n" for pfn in blacklist), encoding="utf-8")
