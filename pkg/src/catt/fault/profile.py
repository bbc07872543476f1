from json import dumps
from logging import getLogger
from pathlib import Path

from pydantic import ValidationError

from catt.dram.mapping import MappingScheme
from catt.errors import InputParseError
from catt.fault.cell import VulnerabilityProfile

logger = getLogger(__name__)


def load_profile(path: Path, mapping: MappingScheme | None = None) -> VulnerabilityProfile:
    """
    Load a vulnerability profile from JSON.

    Args:
        path (Path): Profile file.
        mapping (MappingScheme | None): When given, the profile must be bound to it.

    Returns:
        VulnerabilityProfile: The parsed profile.

    Raises:
        InputParseError: If the file is unreadable, malformed or lists a cell twice.
        DigestMismatchError: If the profile belongs to another geometry.
        LocationOutOfRangeError: If a cell lies outside the geometry.
    """
    try:
        profile = VulnerabilityProfile.model_validate_json(
            Path(path).read_text(encoding="utf-8")
        )
    except OSError as error:
        raise InputParseError(f"Cannot read profile {path}: {error}") from error
    except ValidationError as error:
        raise InputParseError(f"Invalid profile {path}: {error}") from error

    if mapping is not None:
        profile.check_bound(mapping)

    logger.debug("Loaded %d vulnerable cells from %s", len(profile.cells), path)
    return profile


def store_profile(profile: VulnerabilityProfile, path: Path) -> None:
    """
    Write a vulnerability profile as indented JSON, cells in sorted order.
    """
    Path(path).write_text(
        dumps(profile.model_dump(mode="json"), indent=2) + "\n", encoding="utf-8"
    )
