import pytest

from catt.attack.campaign import attempt_seeds, run_campaign, single_sided_check
from catt.attack.machine import MachineBlueprint
from catt.attack.scenario import DefenseKind, load_scenario
from catt.fault.cell import Sidedness, VulnerabilityProfile
from catt.settings.attack import ExploitConfig
from catt.statistics.models import AttackResult
from tests.conftest import make_cell, make_profile


@pytest.fixture(scope="module")
def single_sided_profile(exploit_mini) -> VulnerabilityProfile:
    cells = [
        make_cell(row, bank=bank, byte_offset=2, bit=3, sidedness=Sidedness.SINGLE_SUFFICIENT)
        for bank in (0, 1)
        for row in range(1, 30, 2)
    ]
    return make_profile(exploit_mini, *cells)


def _scenario_campaign(scenario_folder, name: str, attempts: int | None = None) -> AttackResult:
    scenario = load_scenario(scenario_folder / f"{name}.json")
    mapping, profile = scenario.machine.resolve(scenario_folder)
    config = scenario.exploit
    if attempts is not None:
        config = config.model_copy(update={"attempts": attempts})
    blueprint = MachineBlueprint.from_scenario(scenario, mapping, profile)
    return run_campaign(blueprint, config, scenario=scenario.name, progress_interval=0)


def test_attempt_seeds_are_reproducible() -> None:
    seeds = attempt_seeds(2017, 50)

    assert seeds == attempt_seeds(2017, 50)
    assert seeds[:10] == attempt_seeds(2017, 10)
    assert len(set(seeds)) == 50
    assert all(0 <= seed < 1 << 64 for seed in seeds)
    assert seeds != attempt_seeds(2018, 50)


def test_campaign_is_deterministic(exploit_mini, calibration_profile) -> None:
    blueprint = MachineBlueprint(mapping=exploit_mini, profile=calibration_profile, kernel_base=0)
    config = ExploitConfig(attempts=12, seed=7, hammer_count=1000)

    first = run_campaign(blueprint, config, scenario="calibration")
    second = run_campaign(blueprint, config, scenario="calibration")

    assert first == second
    assert first.attempts == 12
    assert [record.attempt for record in first.log] == list(range(12))
    assert [record.seed for record in first.log] == attempt_seeds(7, 12)


def test_worker_processes_do_not_change_the_outcome(exploit_mini, single_sided_profile) -> None:
    blueprint = MachineBlueprint(mapping=exploit_mini, profile=single_sided_profile, kernel_base=0)
    config = ExploitConfig(attempts=6, seed=3, hammer_count=1000)

    serial = run_campaign(blueprint, config, threads=1)
    parallel = run_campaign(blueprint, config, threads=2)

    assert parallel == serial
    assert serial.successes == 6


def test_result_carries_the_defense(exploit_mini, calibration_profile) -> None:
    blueprint = MachineBlueprint(
        mapping=exploit_mini, profile=calibration_profile, defense=DefenseKind.BCATT, kernel_base=0
    )

    result = run_campaign(blueprint, ExploitConfig(attempts=3, hammer_count=1000), scenario="b")

    assert result.scenario == "b"
    assert result.defense == "bcatt"
    assert result.memory_overhead == pytest.approx(5 / 256)
    assert result.flips_total == 0


def test_split_overhead_is_reported(exploit_mini, calibration_profile) -> None:
    blueprint = MachineBlueprint(
        mapping=exploit_mini,
        profile=calibration_profile,
        defense=DefenseKind.GCATT_SPLIT,
        kernel_base=0,
    )

    assert blueprint.memory_overhead() == pytest.approx(1 / 64)


def test_single_sided_check(exploit_mini, single_sided_profile) -> None:
    config = ExploitConfig(attempts=10, seed=5, hammer_count=1000)
    unprotected = MachineBlueprint(mapping=exploit_mini, profile=single_sided_profile, kernel_base=0)

    result = single_sided_check(unprotected, config)

    assert result.single_sided
    assert result.successes >= 1
    for defense in (DefenseKind.BCATT, DefenseKind.GCATT_SPLIT, DefenseKind.GCATT_DYNAMIC):
        protected = MachineBlueprint(
            mapping=exploit_mini, profile=single_sided_profile, defense=defense, kernel_base=0
        )
        defended = single_sided_check(protected, config)
        assert defended.successes == 0
        assert defended.cross_domain_flips == 0


def test_short_unprotected_campaign(scenario_folder) -> None:
    result = _scenario_campaign(scenario_folder, "s1-unprotected", attempts=40)

    assert result.scenario == "s1-unprotected"
    assert result.attempts == 40
    assert result.cross_domain_flips <= result.flips_total
    assert all(record.candidate_rows == 30 for record in result.log)


@pytest.mark.slow
def test_unprotected_success_rate(scenario_folder) -> None:
    result = _scenario_campaign(scenario_folder, "s1-unprotected")

    assert result.attempts == 10_000
    assert 300 <= result.successes <= 700


@pytest.mark.slow
def test_blacklisting_leaves_nothing_to_flip(scenario_folder) -> None:
    result = _scenario_campaign(scenario_folder, "s1-bcatt")

    assert result.attempts == 3500
    assert result.successes == 0
    assert result.flips_total == 0


@pytest.mark.slow
@pytest.mark.parametrize("name", ["s1-gcatt", "s1-gcatt-dynamic"])
def test_partitioning_stops_cross_domain_flips(scenario_folder, name) -> None:
    result = _scenario_campaign(scenario_folder, name)

    assert result.attempts == 3500
    assert result.successes == 0
    assert result.cross_domain_flips == 0
