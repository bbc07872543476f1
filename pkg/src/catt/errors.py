EXIT_OK: int = 0
EXIT_PARSE: int = 2
EXIT_MISMATCH: int = 3


class CattError(Exception):
    """
    Base class for every error raised by the simulator.

    Attributes:
        exit_code (int): Process exit code the CLI reports for this error.
    """

    exit_code: int = 1


class InputParseError(CattError):
    """
    An input file (geometry, profile, memory map, scenario, result) could not be parsed
    or violates its own structural invariants.
    """

    exit_code = EXIT_PARSE


class MismatchError(CattError):
    """
    Inputs parse individually but are semantically incompatible with each other.
    """

    exit_code = EXIT_MISMATCH


class DigestMismatchError(MismatchError):
    """
    A profile or result is bound to a different geometry digest than the one in use.
    """


class GeometryMismatchError(MismatchError):
    """
    An object references coordinates or sizes that do not exist in the geometry.
    """


class AddressOutOfRangeError(MismatchError, ValueError):
    """
    A physical address lies outside [0, total_bytes).
    """


class LocationOutOfRangeError(MismatchError, ValueError):
    """
    A DRAM coordinate exceeds the corresponding geometry bound.
    """


class PfnOutOfRangeError(MismatchError, ValueError):
    """
    A page frame number lies outside [0, total_frames).
    """


class PartitionConfigError(MismatchError, ValueError):
    """
    Guard rows or the split row of a partition policy do not fit the geometry or
    the blast radius.
    """


class AllocatorError(CattError):
    """
    Base class for page allocator failures.
    """


class OutOfMemoryError(AllocatorError):
    """
    No free block satisfies both the requested order and the partitioning policy.
    """


class DoubleFreeError(AllocatorError):
    """
    The range being freed is already free.
    """


class RangeNotAllocatedError(AllocatorError):
    """
    The range being freed does not match a live allocation.
    """


class ProcessNotRegisteredError(AllocatorError):
    """
    A page fault was raised for a process the allocator does not know.
    """
