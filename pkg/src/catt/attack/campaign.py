from concurrent.futures import ProcessPoolExecutor
from functools import partial
from logging import getLogger
from typing import List, Tuple

from numpy import uint64
from numpy.random import SeedSequence

from catt.attack.exploit import run_exploit
from catt.attack.machine import MachineBlueprint
from catt.settings.attack import ExploitConfig
from catt.statistics.models import AttackResult, AttemptRecord

logger = getLogger(__name__)


def attempt_seeds(seed: int, attempts: int) -> List[int]:
    """
    Independent per-attempt seeds spawned from the campaign seed.

    Args:
        seed (int): Campaign seed.
        attempts (int): Number of attempts.

    Returns:
        List[int]: One 64-bit seed per attempt, identical for a given campaign seed.
    """
    children = SeedSequence(seed).spawn(attempts)
    return [int(child.generate_state(1, dtype=uint64)[0]) for child in children]


def _run_attempt(blueprint: MachineBlueprint, config: ExploitConfig, job: Tuple[int, int]) -> AttemptRecord:
    attempt, seed = job
    machine = blueprint.build(seed)
    return run_exploit(machine, config, seed, attempt)


def run_campaign(
    blueprint: MachineBlueprint,
    config: ExploitConfig,
    threads: int = 1,
    scenario: str = "",
    progress_interval: int = 500,
) -> AttackResult:
    """
    Run config.attempts independent exploit attempts, each on a fresh machine.

    Attempts are distributed over worker processes when threads > 1. Results are
    merged by attempt index, so the outcome depends only on the seed.

    Args:
        blueprint (MachineBlueprint): Recipe of the attacked machine.
        config (ExploitConfig): Exploit parameters.
        threads (int): Worker processes.
        scenario (str): Label of the result.
        progress_interval (int): Log progress every N attempts. Set to 0 to disable.

    Returns:
        AttackResult: Aggregated outcome with the per-attempt log.
    """
    jobs = list(enumerate(attempt_seeds(config.seed, config.attempts)))
    worker = partial(_run_attempt, blueprint, config)
    logger.info(
        "Starting campaign '%s': %d attempts against %s%s",
        scenario,
        config.attempts,
        blueprint.defense,
        " (single-sided)" if config.single_sided else "",
    )

    records: List[AttemptRecord] = []
    if threads > 1:
        chunk = max(1, len(jobs) // (threads * 8))
        with ProcessPoolExecutor(max_workers=threads) as executor:
            for record in executor.map(worker, jobs, chunksize=chunk):
                records.append(record)
                _log_progress(len(records), config.attempts, progress_interval)
    else:
        for job in jobs:
            records.append(worker(job))
            _log_progress(len(records), config.attempts, progress_interval)

    truncated = sum(record.spray_truncated for record in records)
    if truncated:
        logger.warning("Spray truncated in %d of %d attempts", truncated, len(records))

    result = AttackResult.aggregate(
        records,
        scenario=scenario,
        defense=str(blueprint.defense),
        single_sided=config.single_sided,
        memory_overhead=blueprint.memory_overhead(),
    )
    logger.info(
        "Campaign '%s' complete: %d/%d successes, %d flips, %d cross-domain, %d unavailable",
        scenario,
        result.successes,
        result.attempts,
        result.flips_total,
        result.cross_domain_flips,
        result.unavailable_flips,
    )
    return result


def single_sided_check(
    blueprint: MachineBlueprint,
    config: ExploitConfig,
    threads: int = 1,
    scenario: str = "",
    progress_interval: int = 500,
) -> AttackResult:
    """
    Repeat a campaign hammering only the row below each victim.
    """
    one_sided = config.model_copy(update={"single_sided": True})
    return run_campaign(blueprint, one_sided, threads, scenario, progress_interval)


def _log_progress(done: int, total: int, interval: int) -> None:
    if interval > 0 and done % interval == 0:
        logger.info("Progress: %d/%d attempts completed", done, total)
