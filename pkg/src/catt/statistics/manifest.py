from datetime import datetime, timezone
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import List

from pydantic import BaseModel, ConfigDict, Field

from catt.errors import DigestMismatchError


def tool_version() -> str:
    try:
        return version("catt-sim")
    except PackageNotFoundError:
        return "0.0.0+local"


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


class RunManifest(BaseModel):
    """
    Reproducibility envelope of a result: what produced it and from which inputs.

    Attributes:
        tool_version (str): Installed version of catt-sim.
        command (str): Subcommand that produced the result.
        geometry_digest (str): Digest of the geometry and mapping in use.
        profile_digest (str | None): Digest of the vulnerability profile in use.
        seed (int | None): Campaign or workload seed.
        defense (str | None): Defense configuration.
        started_at (datetime): UTC start of the run.
        finished_at (datetime | None): UTC end of the run.
        scan_geometry_digest (str | None): Geometry digest of a separately scanned machine.
        scan_profile_digest (str | None): Profile digest of a separately scanned machine.
    """

    model_config = ConfigDict(extra="forbid")

    tool_version: str = Field(default_factory=tool_version)
    command: str
    geometry_digest: str
    profile_digest: str | None = None
    seed: int | None = None
    defense: str | None = None
    started_at: datetime = Field(default_factory=utc_now)
    finished_at: datetime | None = None
    scan_geometry_digest: str | None = None
    scan_profile_digest: str | None = None

    def finish(self) -> "RunManifest":
        return self.model_copy(update={"finished_at": utc_now()})

    def reproducible_dump(self) -> dict:
        """
        Manifest fields without timestamps, equal for two runs of the same inputs.
        """
        return self.model_dump(mode="json", exclude={"started_at", "finished_at"})

    def to_json(self) -> str:
        return self.model_dump_json(indent=2) + "\n"


def sidecar_path(out: Path) -> Path:
    """
    Manifest written next to a text or list output, e.g. victims.txt -> victims.txt.manifest.json.
    """
    return out.with_name(out.name + ".manifest.json")


def store_manifest(manifest: RunManifest, out: Path) -> Path:
    path = sidecar_path(out)
    path.write_text(manifest.to_json(), encoding="utf-8")
    return path


def check_same_geometry(manifests: List[RunManifest]) -> str:
    """
    Geometry digest shared by every manifest.

    Raises:
        DigestMismatchError: If the manifests disagree.
    """
    digests = {manifest.geometry_digest for manifest in manifests}
    if len(digests) != 1:
        raise DigestMismatchError(
            f"Results come from {len(digests)} different geometries: {', '.join(sorted(digests))}"
        )
    return digests.pop()
