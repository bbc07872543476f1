from catt.attack.machine import MachineBlueprint
from catt.attack.scan import scan
from catt.attack.scenario import DefenseKind
from catt.bcatt.pipeline import derive_blacklist
from catt.fault.cell import Sidedness, VulnerabilityProfile
from catt.settings.attack import ScanConfig
from tests.conftest import make_cell, make_profile

CONFIG = ScanConfig(hammer_count=1000, pattern=0xFF, coverage_runs=1)


def test_unprotected_scan_finds_every_victim(s1_mini, s1_profile) -> None:
    machine = MachineBlueprint(mapping=s1_mini, profile=s1_profile).build()

    victims = scan(machine, CONFIG)

    assert len(victims) == 133
    assert victims == list(derive_blacklist(s1_profile, s1_mini).pfns)


def test_scan_returns_memory_to_the_allocator(s1_mini, s1_profile) -> None:
    machine = MachineBlueprint(mapping=s1_mini, profile=s1_profile).build()

    scan(machine, CONFIG)

    assert machine.allocator.free_frames == s1_mini.geometry.total_frames
    assert machine.allocator.free_blocks() == {11: list(range(0, 16384, 2048))}


def test_blacklisted_machine_shows_no_victims(s1_mini, s1_profile) -> None:
    machine = MachineBlueprint(mapping=s1_mini, profile=s1_profile, defense=DefenseKind.BCATT).build()

    assert len(machine.blacklist) == 133
    assert scan(machine, CONFIG) == []


def test_empty_profile_shows_no_victims(s1_mini) -> None:
    profile = VulnerabilityProfile(geometry_digest=s1_mini.digest)
    machine = MachineBlueprint(mapping=s1_mini, profile=profile).build()

    assert scan(machine, CONFIG) == []


def test_weak_hammering_misses_victims(s1_mini, s1_profile) -> None:
    machine = MachineBlueprint(mapping=s1_mini, profile=s1_profile).build()

    assert scan(machine, ScanConfig(hammer_count=999)) == []


def test_unreliable_cells_are_seeded(exploit_mini, calibration_profile) -> None:
    blueprint = MachineBlueprint(mapping=exploit_mini, profile=calibration_profile, kernel_base=0)
    config = ScanConfig(hammer_count=1000)

    first = scan(blueprint.build(seed=4), config)
    second = scan(blueprint.build(seed=4), config)

    assert first == second
    # Frames 54 and 200 hold reliable cells, the others flip with probability 0.5.
    assert {54, 200} <= set(first) <= {36, 54, 68, 100, 200}


def test_coverage_runs_find_unreliable_cells(exploit_mini, calibration_profile) -> None:
    blueprint = MachineBlueprint(mapping=exploit_mini, profile=calibration_profile, kernel_base=0)

    found = scan(blueprint.build(seed=1), ScanConfig(hammer_count=1000, coverage_runs=20))

    assert found == [36, 54, 68, 100, 200]


def test_edge_rows_are_never_tested(small) -> None:
    profile = make_profile(
        small,
        make_cell(0, sidedness=Sidedness.SINGLE_SUFFICIENT),
        make_cell(15, sidedness=Sidedness.SINGLE_SUFFICIENT),
        make_cell(7),
    )
    machine = MachineBlueprint(mapping=small, profile=profile, kernel_base=0).build()

    assert scan(machine, ScanConfig(hammer_count=1000)) == [14]
