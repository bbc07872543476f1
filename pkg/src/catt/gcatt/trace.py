from dataclasses import dataclass
from pathlib import Path
from re import compile as compile_pattern
from typing import TYPE_CHECKING, Iterable, List

from catt.errors import AllocatorError, InputParseError, OutOfMemoryError, PfnOutOfRangeError

if TYPE_CHECKING:
    from catt.gcatt.allocator import BuddyAllocator

_ALLOC_LINE = compile_pattern(r"alloc (\d+) (\d+) -> (\d+|OOM)")
_FREE_LINE = compile_pattern(r"free (\d+) (\d+)")


@dataclass(frozen=True, slots=True)
class TraceEvent:
    """
    One allocator operation. `pfn` is None for an allocation that ran out of memory.
    """

    kind: str
    order: int
    domain: int | None
    pfn: int | None

    def render(self) -> str:
        if self.kind == "alloc":
            outcome = "OOM" if self.pfn is None else str(self.pfn)
            return f"alloc {self.order} {self.domain} -> {outcome}"
        return f"free {self.pfn} {self.order}"


class AllocationTrace:
    """
    Append-only log of allocator operations.

    Lines read `alloc <order> <domain> -> <pfn>|OOM` and `free <pfn> <order>`.
    """

    def __init__(self, events: Iterable[TraceEvent] = ()) -> None:
        self.events: List[TraceEvent] = list(events)

    def __len__(self) -> int:
        return len(self.events)

    def record_alloc(self, order: int, domain: int, pfn: int | None) -> None:
        self.events.append(TraceEvent(kind="alloc", order=order, domain=domain, pfn=pfn))

    def record_free(self, pfn: int, order: int) -> None:
        self.events.append(TraceEvent(kind="free", order=order, domain=None, pfn=pfn))

    def lines(self) -> List[str]:
        return [event.render() for event in self.events]

    def write(self, path: Path) -> None:
        Path(path).write_text("".join(f"{line}\n" for line in self.lines()), encoding="utf-8")

    @classmethod
    def parse(cls, lines: Iterable[str]) -> "AllocationTrace":
        """
        Raises:
            InputParseError: On a line in neither format.
        """
        events = []
        for number, raw in enumerate(lines, start=1):
            line = raw.strip()
            if not line:
                continue
            if match := _ALLOC_LINE.fullmatch(line):
                order, domain, outcome = match.groups()
                pfn = None if outcome == "OOM" else int(outcome)
                events.append(TraceEvent("alloc", int(order), int(domain), pfn))
            elif match := _FREE_LINE.fullmatch(line):
                pfn, order = match.groups()
                events.append(TraceEvent("free", int(order), None, int(pfn)))
            else:
                raise InputParseError(f"Trace line {number} is malformed: '{line}'")
        return cls(events)

    @classmethod
    def read(cls, path: Path) -> "AllocationTrace":
        try:
            return cls.parse(Path(path).read_text(encoding="utf-8").splitlines())
        except OSError as error:
            raise InputParseError(f"Cannot read trace {path}: {error}") from error


def replay(trace: AllocationTrace, allocator: "BuddyAllocator") -> List[str]:
    """
    Re-run a trace on a fresh allocator and report every divergence.

    Args:
        trace (AllocationTrace): Recorded operations.
        allocator (BuddyAllocator): Allocator in its initial state, built with the
            same geometry, availability and policy as the recorded one.

    Returns:
        List[str]: One message per operation whose outcome differs. Empty when the
        replay reproduces the trace.
    """
    divergences = []
    for index, event in enumerate(trace.events):
        if event.kind == "alloc":
            try:
                pfn: int | None = allocator.alloc_for_domain(event.order, event.domain)
            except OutOfMemoryError:
                pfn = None
            if pfn != event.pfn:
                divergences.append(f"event {index}: '{event.render()}' replayed as {pfn}")
        else:
            try:
                allocator.free(event.pfn, event.order)
            except (AllocatorError, PfnOutOfRangeError) as error:
                divergences.append(f"event {index}: '{event.render()}' failed: {error}")
    return divergences
