from dataclasses import dataclass
from logging import getLogger

from catt.attack.scenario import DefenseKind, Scenario
from catt.bcatt.blacklist import Blacklist
from catt.bcatt.memory_map import MemoryMap
from catt.bcatt.pipeline import FrameAvailability, apply_map, derive_blacklist, extend_map
from catt.dram.mapping import MappingScheme
from catt.fault.cell import VulnerabilityProfile
from catt.fault.state import DramState
from catt.gcatt.allocator import DEFAULT_MAX_ORDER, BuddyAllocator
from catt.gcatt.overhead import gcatt_overhead
from catt.gcatt.policy import KernelUserSplitPolicy, PartitionPolicy, build_policy
from catt.gcatt.policy.impl.kernel_user_split import resolve_split_row
from catt.settings.allocator import DEFAULT_KERNEL_BASE

logger = getLogger(__name__)


@dataclass
class Machine:
    """
    One simulated machine: DRAM contents and fault model, page allocator and the
    memory map that fed it.
    """

    mapping: MappingScheme
    profile: VulnerabilityProfile
    defense: DefenseKind
    dram: DramState
    allocator: BuddyAllocator
    availability: FrameAvailability
    blacklist: Blacklist

    @property
    def policy(self) -> PartitionPolicy:
        return self.allocator.policy

    def is_available(self, pfn: int) -> bool:
        return self.availability.is_available(pfn)

    def is_guard_frame(self, pfn: int) -> bool:
        """
        Whether a frame lies in a guard row of the kernel-user split.
        """
        policy = self.policy
        if not isinstance(policy, KernelUserSplitPolicy):
            return False
        return policy.is_guard_row(int(self.allocator.table.rows[pfn]))


@dataclass(frozen=True)
class MachineBlueprint:
    """
    Picklable recipe for identical machines, one per campaign attempt.

    Attributes:
        mapping (MappingScheme): Address mapping.
        profile (VulnerabilityProfile): Vulnerable cells.
        defense (DefenseKind): Defense configuration.
        guard_rows (int): Rows separating domains under G-CATT.
        kernel_base (int): Physical address of the kernel image.
        split_row (int | None): First guard row of the kernel-user split.
        blast_radius (int): Rows on each side disturbed by an activation.
        max_order (int): Largest buddy block order.
        whole_row_blacklist (bool): Blacklist whole victim rows.
        refresh_window (int | None): Automatic refresh interval in activations.
        blacklist (Blacklist | None): Blacklist to apply instead of the one derived
            from the profile.
    """

    mapping: MappingScheme
    profile: VulnerabilityProfile
    defense: DefenseKind = DefenseKind.NONE
    guard_rows: int = 1
    kernel_base: int = DEFAULT_KERNEL_BASE
    split_row: int | None = None
    blast_radius: int = 1
    max_order: int = DEFAULT_MAX_ORDER
    whole_row_blacklist: bool = False
    refresh_window: int | None = None
    blacklist: Blacklist | None = None

    def __post_init__(self) -> None:
        policy = self.new_policy()
        if isinstance(policy, KernelUserSplitPolicy):
            resolve_split_row(self.mapping.geometry.rows_per_bank, self.guard_rows, self.split_row)

    @classmethod
    def from_scenario(
        cls,
        scenario: Scenario,
        mapping: MappingScheme,
        profile: VulnerabilityProfile,
        refresh_window: int | None = None,
    ) -> "MachineBlueprint":
        return cls(
            mapping=mapping,
            profile=profile,
            defense=scenario.defense,
            guard_rows=scenario.guard_rows,
            kernel_base=scenario.kernel_base,
            split_row=scenario.split_row,
            blast_radius=scenario.blast_radius,
            max_order=scenario.max_order,
            whole_row_blacklist=scenario.whole_row_blacklist,
            refresh_window=refresh_window,
        )

    def effective_blacklist(self) -> Blacklist:
        if not self.defense.blacklists:
            return Blacklist()
        if self.blacklist is not None:
            return self.blacklist
        return derive_blacklist(self.profile, self.mapping, whole_row=self.whole_row_blacklist)

    def new_policy(self) -> PartitionPolicy:
        policy = build_policy(
            self.defense.policy,
            guard_rows=self.guard_rows,
            kernel_base=self.kernel_base,
            split_row=self.split_row,
        )
        policy.check_blast_radius(self.blast_radius)
        return policy

    def memory_overhead(self) -> float:
        """
        Fraction of memory given up by the defenses: blacklisted frames plus guard rows.
        """
        geometry = self.mapping.geometry
        blacklisted = len(self.effective_blacklist()) / geometry.total_frames
        return blacklisted + gcatt_overhead(self.new_policy(), geometry)

    def build(self, seed: int = 0) -> Machine:
        """
        Assemble a fresh machine.

        Args:
            seed (int): Seed of the fault model's unreliable-cell draws.

        Returns:
            Machine: Machine with all available frames free.
        """
        geometry = self.mapping.geometry
        blacklist = self.effective_blacklist()
        memory_map = extend_map(MemoryMap.all_usable(geometry), blacklist, geometry)
        availability = apply_map(memory_map, geometry)
        allocator = BuddyAllocator(
            self.mapping,
            availability=availability,
            policy=self.new_policy(),
            max_order=self.max_order,
        )
        dram = DramState(
            self.mapping,
            self.profile,
            seed=seed,
            blast_radius=self.blast_radius,
            refresh_window=self.refresh_window,
        )
        return Machine(
            mapping=self.mapping,
            profile=self.profile,
            defense=self.defense,
            dram=dram,
            allocator=allocator,
            availability=availability,
            blacklist=blacklist,
        )
