import json
from pathlib import Path

import pytest
from pydantic import ValidationError

from catt.attack.machine import MachineBlueprint
from catt.attack.scenario import DefenseKind, MachineRef, Scenario, SynthesizedProfile, load_scenario
from catt.errors import DigestMismatchError, InputParseError, PartitionConfigError
from catt.gcatt.policy import PolicyVariant

SHIPPED = ["s1-unprotected", "s1-bcatt", "s1-gcatt", "s1-gcatt-dynamic"]


@pytest.mark.parametrize("name", SHIPPED)
def test_shipped_scenarios_load(scenario_folder: Path, name: str) -> None:
    scenario = load_scenario(scenario_folder / f"{name}.json")

    assert scenario.name == name
    assert scenario.kernel_base == 0
    assert scenario.exploit is not None
    assert scenario.exploit.seed == 2017
    mapping, profile = scenario.machine.resolve(scenario_folder)
    assert len(profile.cells) == 5
    assert mapping.geometry.total_frames == 256


def test_defense_kinds() -> None:
    assert DefenseKind.BCATT.blacklists
    assert DefenseKind.BOTH.blacklists
    assert not DefenseKind.GCATT_SPLIT.blacklists
    assert DefenseKind.NONE.policy is PolicyVariant.NONE
    assert DefenseKind.BOTH.policy is PolicyVariant.KERNEL_USER_SPLIT
    assert DefenseKind.GCATT_DYNAMIC.policy is PolicyVariant.DYNAMIC_ADJACENCY


def test_scenario_needs_an_action() -> None:
    with pytest.raises(ValidationError):
        Scenario(name="idle", geometry="g0")


def test_guard_narrower_than_blast_radius() -> None:
    with pytest.raises(ValidationError):
        Scenario(
            name="thin",
            geometry="g0",
            defense=DefenseKind.GCATT_SPLIT,
            guard_rows=1,
            blast_radius=2,
            exploit={"attempts": 1},
        )
    Scenario(name="wide", geometry="g0", guard_rows=1, blast_radius=2, exploit={"attempts": 1})


def test_unknown_fields_rejected(tmp_path: Path) -> None:
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps({"name": "x", "geometry": "g0", "scan": {}, "color": "red"}))

    with pytest.raises(InputParseError):
        load_scenario(path)


def test_missing_scenario(tmp_path: Path) -> None:
    with pytest.raises(InputParseError):
        load_scenario(tmp_path / "absent.json")


def test_synthesized_profile(scenario_folder: Path) -> None:
    reference = MachineRef(geometry="exploit-mini.json", profile=SynthesizedProfile(victims=4, seed=9))

    mapping, profile = reference.resolve(scenario_folder)
    again = reference.resolve(scenario_folder)[1]

    assert len(profile.cells) == 4
    assert profile == again
    assert profile.geometry_digest == mapping.digest


def test_synthesis_beyond_capacity(scenario_folder: Path) -> None:
    reference = MachineRef(geometry="exploit-mini.json", profile=SynthesizedProfile(victims=10_000))

    with pytest.raises(InputParseError):
        reference.resolve(scenario_folder)


def test_profile_of_another_geometry(scenario_folder: Path) -> None:
    reference = MachineRef(geometry="exploit-mini.json", profile="s1-profile.json")

    with pytest.raises(DigestMismatchError):
        reference.resolve(scenario_folder)


def test_preset_without_profile(scenario_folder: Path) -> None:
    mapping, profile = MachineRef(geometry="g0").resolve(scenario_folder)

    assert profile.cells == []
    assert profile.geometry_digest == mapping.digest


def test_blueprint_from_scenario(scenario_folder: Path) -> None:
    scenario = load_scenario(scenario_folder / "s1-gcatt.json")
    mapping, profile = scenario.machine.resolve(scenario_folder)

    blueprint = MachineBlueprint.from_scenario(scenario, mapping, profile, refresh_window=5000)
    machine = blueprint.build()

    assert blueprint.defense is DefenseKind.GCATT_SPLIT
    assert machine.policy.variant is PolicyVariant.KERNEL_USER_SPLIT
    assert machine.dram.refresh_window == 5000
    assert machine.is_guard_frame(128)
    assert not machine.is_guard_frame(0)
    assert machine.availability.count == 256


@pytest.mark.parametrize(
    "fields",
    [
        {"defense": DefenseKind.GCATT_SPLIT, "split_row": 63},
        {"defense": DefenseKind.GCATT_DYNAMIC, "blast_radius": 2},
        {"defense": DefenseKind.GCATT_SPLIT, "guard_rows": 2, "split_row": 62},
    ],
)
def test_blueprint_rejects_unusable_partitions(exploit_mini, calibration_profile, fields) -> None:
    with pytest.raises(PartitionConfigError):
        MachineBlueprint(mapping=exploit_mini, profile=calibration_profile, kernel_base=0, **fields)
