from numpy import arange, ndarray, uint64

from catt.fault.state import DramState

PTE_PRESENT: int = 1 << 0
PTE_WRITABLE: int = 1 << 1
PTE_USER: int = 1 << 2
PFN_SHIFT: int = 12
PFN_MASK: int = ((1 << 40) - 1) << PFN_SHIFT
ENTRY_BYTES: int = 8

# Bits whose corruption hands an attacker control: permissions and the frame number.
DESIGNATED_BITS: int = PTE_WRITABLE | PTE_USER | PFN_MASK


def make_entry(pfn: int | ndarray, writable: bool = True, user: bool = False) -> int | ndarray:
    """
    Present page-table entry for one frame, or for a uint64 array of frames.
    """
    entry = ((pfn << PFN_SHIFT) & PFN_MASK) | PTE_PRESENT
    if writable:
        entry |= PTE_WRITABLE
    if user:
        entry |= PTE_USER
    return entry


def is_designated(page_bit: int) -> bool:
    """
    Whether a bit of a page-table page lies in the permission or frame-number
    field of its entry.

    Args:
        page_bit (int): Bit position within the page, byte * 8 + bit.
    """
    return bool((DESIGNATED_BITS >> (page_bit % (ENTRY_BYTES * 8))) & 1)


def write_page_table(dram: DramState, pfn: int, targets: ndarray) -> None:
    """
    Fill a frame with present, writable entries mapping `targets` in turn.

    Args:
        dram (DramState): Memory to write.
        pfn (int): Frame receiving the page table.
        targets (ndarray): Frames the entries point to, reused cyclically.
    """
    page_size = dram.geometry.page_size
    frames = targets[arange(page_size // ENTRY_BYTES) % len(targets)].astype(uint64)
    dram.write(pfn * page_size, make_entry(frames).astype("<u8").tobytes())
