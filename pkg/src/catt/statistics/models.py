from enum import StrEnum
from typing import Dict, List

from pydantic import BaseModel, ConfigDict, Field, model_validator


class FlipClass(StrEnum):
    """
    Ownership classes of a flipped frame.
    """

    ATTACKER = "attacker"
    PAGE_TABLE = "page-table"
    OTHER_DOMAIN = "other-domain"
    FREE = "free"
    GUARD = "guard"
    UNAVAILABLE = "unavailable"


class AttemptRecord(BaseModel):
    """
    Outcome of one exploit attempt.

    Attributes:
        attempt (int): Index within the campaign.
        seed (int): Seed derived for this attempt.
        success (bool): A flip hit a designated bit of a kernel page table.
        flips (int): Flips in available frames.
        unavailable_flips (int): Flips in blacklisted frames, not counted in `flips`.
        cross_domain_flips (int): Flips in frames owned by another domain than the attacker's.
        sprayed (int): Pages the attacker obtained.
        spray_truncated (bool): The spray stopped early for lack of memory.
        candidate_rows (int): Victim rows the attacker could sandwich.
        page_tables (int): Page-table pages the kernel allocated.
        target (str | None): Victim row that was hammered.
        flip_classes (Dict[str, int]): Flips per ownership class, unavailable frames included.
    """

    model_config = ConfigDict(extra="forbid")

    attempt: int = Field(..., ge=0)
    seed: int = Field(..., ge=0)
    success: bool = False
    flips: int = Field(default=0, ge=0)
    unavailable_flips: int = Field(default=0, ge=0)
    cross_domain_flips: int = Field(default=0, ge=0)
    sprayed: int = Field(default=0, ge=0)
    spray_truncated: bool = False
    candidate_rows: int = Field(default=0, ge=0)
    page_tables: int = Field(default=0, ge=0)
    target: str | None = None
    flip_classes: Dict[str, int] = Field(default_factory=dict)


class AttackResult(BaseModel):
    """
    Aggregate of an exploit campaign.

    Attributes:
        scenario (str): Scenario label.
        defense (str): Defense configuration.
        single_sided (bool): One aggressor row per victim row.
        attempts (int): Attempts run.
        successes (int): Successful attempts.
        flips_total (int): Flips in available frames over all attempts.
        unavailable_flips (int): Flips in blacklisted frames over all attempts.
        cross_domain_flips (int): Flips crossing a security domain.
        memory_overhead (float): Fraction of memory the defenses give up.
        scan_victims (int | None): Victim frames found by the scan, when one ran.
        flip_classes (Dict[str, int]): Flips per ownership class.
        log (List[AttemptRecord]): Per-attempt outcomes, ordered by attempt.
    """

    model_config = ConfigDict(extra="forbid")

    scenario: str = ""
    defense: str = "none"
    single_sided: bool = False
    attempts: int = Field(default=0, ge=0)
    successes: int = Field(default=0, ge=0)
    flips_total: int = Field(default=0, ge=0)
    unavailable_flips: int = Field(default=0, ge=0)
    cross_domain_flips: int = Field(default=0, ge=0)
    memory_overhead: float = Field(default=0.0, ge=0.0)
    scan_victims: int | None = None
    flip_classes: Dict[str, int] = Field(default_factory=dict)
    log: List[AttemptRecord] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_counts(self) -> "AttackResult":
        if self.successes > self.attempts:
            raise ValueError(f"{self.successes} successes in {self.attempts} attempts")
        if self.cross_domain_flips > self.flips_total:
            raise ValueError(
                f"{self.cross_domain_flips} cross-domain flips exceed {self.flips_total} flips"
            )
        return self

    @property
    def success_rate(self) -> float:
        return self.successes / self.attempts if self.attempts else 0.0

    @classmethod
    def aggregate(
        cls,
        records: List[AttemptRecord],
        scenario: str = "",
        defense: str = "none",
        single_sided: bool = False,
        memory_overhead: float = 0.0,
    ) -> "AttackResult":
        """
        Merge attempt records, ordered by attempt index.
        """
        ordered = sorted(records, key=lambda record: record.attempt)
        classes: Dict[str, int] = {}
        for record in ordered:
            for name, count in record.flip_classes.items():
                classes[name] = classes.get(name, 0) + count
        return cls(
            scenario=scenario,
            defense=defense,
            single_sided=single_sided,
            attempts=len(ordered),
            successes=sum(record.success for record in ordered),
            flips_total=sum(record.flips for record in ordered),
            unavailable_flips=sum(record.unavailable_flips for record in ordered),
            cross_domain_flips=sum(record.cross_domain_flips for record in ordered),
            memory_overhead=memory_overhead,
            flip_classes=dict(sorted(classes.items())),
            log=ordered,
        )
