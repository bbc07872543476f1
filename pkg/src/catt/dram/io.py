from json import dumps
from logging import getLogger
from pathlib import Path
from typing import List

from pydantic import ValidationError

from catt.dram.geometry import DramGeometry
from catt.dram.mapping import MappingScheme, build_mapping
from catt.dram.mapping.base import SchemeId
from catt.dram.presets import is_preset, load_preset
from catt.errors import InputParseError

logger = getLogger(__name__)


class GeometryFile(DramGeometry):
    """
    On-disk geometry description: the geometry fields plus the mapping scheme.

    Attributes:
        scheme_id (SchemeId): Mapping scheme, linear-rowgroup when omitted.
        bit_table (List[int] | None): Bit permutation of the swizzle scheme.
    """

    scheme_id: SchemeId = SchemeId.LINEAR_ROWGROUP
    bit_table: List[int] | None = None

    def geometry(self) -> DramGeometry:
        return DramGeometry(**self.model_dump(exclude={"scheme_id", "bit_table"}))


def load_geometry(path: Path) -> MappingScheme:
    """
    Load a geometry JSON file and build its mapping scheme.

    Args:
        path (Path): Geometry file.

    Returns:
        MappingScheme: Mapping over the loaded geometry.

    Raises:
        InputParseError: If the file is missing, malformed, carries unknown fields
            or describes an invalid scheme.
    """
    try:
        document = GeometryFile.model_validate_json(Path(path).read_text(encoding="utf-8"))
        mapping = build_mapping(document.geometry(), document.scheme_id, document.bit_table)
    except OSError as error:
        raise InputParseError(f"Cannot read geometry file {path}: {error}") from error
    except (ValidationError, ValueError) as error:
        raise InputParseError(f"Invalid geometry file {path}: {error}") from error

    logger.debug("Loaded geometry %s (%s) from %s", document.geometry(), mapping.scheme_id, path)
    return mapping


def resolve_geometry(reference: str | Path, base_folder: Path | None = None) -> MappingScheme:
    """
    Resolve a geometry reference that is either a preset name or a file path.

    Relative paths are resolved against `base_folder` when given.
    """
    if isinstance(reference, str) and is_preset(reference):
        return load_preset(reference)
    path = Path(reference)
    if base_folder is not None and not path.is_absolute():
        path = base_folder / path
    return load_geometry(path)


def store_geometry(mapping: MappingScheme, path: Path) -> None:
    """
    Write a mapping's geometry and scheme as JSON.

    Args:
        mapping (MappingScheme): Mapping to store.
        path (Path): Destination file.
    """
    payload = {**mapping.geometry.model_dump(), **mapping.describe()}
    Path(path).write_text(dumps(payload, indent=2) + "\n", encoding="utf-8")
