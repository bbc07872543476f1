from dataclasses import dataclass

# Security domain identifiers stored in the frame table.
NO_DOMAIN: int = -1
KERNEL_DOMAIN: int = 0
USER_DOMAIN: int = 1
FIRST_PROCESS_DOMAIN: int = 2


def domain_name(domain: int) -> str:
    if domain == NO_DOMAIN:
        return "none"
    if domain == KERNEL_DOMAIN:
        return "kernel"
    if domain == USER_DOMAIN:
        return "user"
    return f"process-domain-{domain}"


@dataclass(frozen=True, slots=True)
class AllocFlags:
    """
    Requester descriptor of an allocation, from which the security domain is derived.

    Attributes:
        kernel (bool): Kernel allocation rather than a user page fault.
        pid (int | None): Faulting process, for user allocations.
    """

    kernel: bool = False
    pid: int | None = None

    @classmethod
    def for_kernel(cls) -> "AllocFlags":
        return cls(kernel=True)

    @classmethod
    def for_user(cls, pid: int | None = None) -> "AllocFlags":
        return cls(kernel=False, pid=pid)
