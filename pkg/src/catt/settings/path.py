from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field


class PathSettings(BaseModel):
    """
    Configuration settings related to default data file paths.

    Paths are resolved relative to the working directory unless
    explicitly overridden.

    Attributes:
        scenario_folder (Path):
            Directory searched for scenarios given by name.

        results_folder (Path):
            Directory where commands write results when no output path is given.
    """

    model_config = ConfigDict(extra="ignore")

    scenario_folder: Path = Field(
        default=Path("scenarios"),
        description="Directory searched for scenarios given by name.",
    )

    results_folder: Path = Field(
        default=Path("results"),
        description="Directory where commands write results by default.",
    )

    def scenario_file(self, reference: Path) -> Path:
        """
        Locate a scenario given either as a file or as a name in the scenario folder.

        Args:
            reference (Path): File path, or a scenario name with or without `.json`.

        Returns:
            Path: The existing file, or `reference` unchanged when nothing matches.
        """
        if reference.exists():
            return reference
        candidate = self.scenario_folder / reference
        if candidate.suffix != ".json":
            candidate = candidate.with_name(f"{candidate.name}.json")
        return candidate if candidate.exists() else reference

    def result_file(self, name: str) -> Path:
        return self.results_folder / name
