from csv import writer as csv_writer
from logging import getLogger
from pathlib import Path
from typing import List

from pydantic import BaseModel, ConfigDict, ValidationError

from catt.bcatt.overhead import format_percentage
from catt.errors import InputParseError
from catt.statistics.manifest import RunManifest
from catt.statistics.models import AttackResult

logger = getLogger(__name__)


class ResultFile(BaseModel):
    """
    On-disk attack result: the manifest and the aggregated campaign.
    """

    model_config = ConfigDict(extra="forbid")

    manifest: RunManifest
    result: AttackResult


def render_attack_table(results: List[AttackResult]) -> str:
    """
    Fixed-width security evaluation table: victims found by the scan, exploit
    successes and tries, flips and the memory given up.

    Args:
        results (List[AttackResult]): One row per result, in order.

    Returns:
        str: Header, separator and one line per result, newline-terminated.
    """
    header = (
        f"{'Scenario':<20}{'Defense':<15}{'Victims':>9}{'Success':>9}{'Tries':>8}"
        f"{'Flips':>8}{'Cross':>8}{'Overhead':>11}"
    )
    lines = [header, "-" * len(header)]
    for result in results:
        victims = "-" if result.scan_victims is None else str(result.scan_victims)
        tries = "-" if result.attempts == 0 else str(result.attempts)
        lines.append(
            f"{result.scenario:<20}{result.defense:<15}{victims:>9}{result.successes:>9}{tries:>8}"
            f"{result.flips_total:>8}{result.cross_domain_flips:>8}"
            f"{format_percentage(result.memory_overhead):>11}"
        )
    return "\n".join(lines) + "\n"


def render_comparison(results: List[AttackResult]) -> str:
    """
    Fixed-width comparison across defenses, one row per result.
    """
    header = f"{'Defense':<15}{'Flips':>8}{'Cross-domain':>14}{'Successes/Attempts':>20}{'Overhead':>11}"
    lines = [header, "-" * len(header)]
    for result in results:
        ratio = f"{result.successes}/{result.attempts}"
        lines.append(
            f"{result.defense:<15}{result.flips_total:>8}{result.cross_domain_flips:>14}"
            f"{ratio:>20}{format_percentage(result.memory_overhead):>11}"
        )
    return "\n".join(lines) + "\n"


def result_json(result_file: ResultFile) -> str:
    return result_file.model_dump_json(indent=2) + "\n"


def save_attack_result(result_file: ResultFile, out: Path) -> List[Path]:
    """
    Write the result JSON, the text table next to it and the per-attempt CSV.

    Args:
        result_file (ResultFile): Manifest and result.
        out (Path): JSON destination; the table goes to `<out>.txt` and the attempt
            log to `<out>.csv` with the suffix replaced.

    Returns:
        List[Path]: Files written.
    """
    out.parent.mkdir(parents=True, exist_ok=True)
    table_path = out.with_suffix(".txt")
    csv_path = out.with_suffix(".csv")

    out.write_text(result_json(result_file), encoding="utf-8")
    table_path.write_text(render_attack_table([result_file.result]), encoding="utf-8")
    _save_attempt_csv(result_file.result, csv_path)

    logger.info("Result saved to %s", out)
    return [out, table_path, csv_path]


def _save_attempt_csv(result: AttackResult, csv_path: Path) -> None:
    with open(csv_path, "w", newline="", encoding="utf-8") as file:
        writer = csv_writer(file)
        writer.writerow(
            [
                "Attempt",
                "Seed",
                "Success",
                "Flips",
                "Cross-domain",
                "Unavailable",
                "Sprayed",
                "Truncated",
                "Candidates",
                "Page tables",
                "Target",
            ]
        )
        for record in result.log:
            writer.writerow(
                [
                    record.attempt,
                    record.seed,
                    record.success,
                    record.flips,
                    record.cross_domain_flips,
                    record.unavailable_flips,
                    record.sprayed,
                    record.spray_truncated,
                    record.candidate_rows,
                    record.page_tables,
                    record.target or "",
                ]
            )

    logger.debug("Attempt log saved to %s", csv_path)


def load_result(path: Path) -> ResultFile:
    """
    Parse a result file written by the attack command.

    Raises:
        InputParseError: If the file is unreadable or not a result file.
    """
    try:
        return ResultFile.model_validate_json(Path(path).read_text(encoding="utf-8"))
    except OSError as error:
        raise InputParseError(f"Cannot read result {path}: {error}") from error
    except ValidationError as error:
        raise InputParseError(f"Invalid result {path}: {error}") from error
