from pathlib import Path

import pytest

from catt.dram.geometry import DramGeometry
from catt.dram.io import load_geometry
from catt.dram.mapping import MappingScheme, build_mapping
from catt.dram.presets import load_preset
from catt.fault.cell import Sidedness, VulnerabilityProfile, VulnerableCell
from catt.fault.profile import load_profile

SCENARIO_FOLDER = Path(__file__).resolve().parents[1] / "scenarios"


@pytest.fixture(scope="session")
def scenario_folder() -> Path:
    return SCENARIO_FOLDER


@pytest.fixture(scope="session")
def g0() -> MappingScheme:
    return load_preset("g0")


@pytest.fixture(scope="session")
def s1() -> MappingScheme:
    return load_preset("s1")


@pytest.fixture(scope="session")
def exploit_mini() -> MappingScheme:
    """
    Two banks of 64 rows: row r holds frames 4r, 4r+1 in bank 0 and 4r+2, 4r+3 in bank 1.
    """
    return load_geometry(SCENARIO_FOLDER / "exploit-mini.json")


@pytest.fixture(scope="session")
def s1_mini() -> MappingScheme:
    return load_geometry(SCENARIO_FOLDER / "s1-mini.json")


@pytest.fixture
def small() -> MappingScheme:
    """
    One bank of 16 rows with two frames per row: frames 2r and 2r+1 sit in row r.
    """
    return build_mapping(DramGeometry(banks_per_rank=1, ranks_per_dimm=1, rows_per_bank=16))


@pytest.fixture(scope="session")
def calibration_profile(exploit_mini: MappingScheme) -> VulnerabilityProfile:
    return load_profile(SCENARIO_FOLDER / "calibration-profile.json", exploit_mini)


@pytest.fixture(scope="session")
def s1_profile(s1_mini: MappingScheme) -> VulnerabilityProfile:
    return load_profile(SCENARIO_FOLDER / "s1-profile.json", s1_mini)


def make_cell(
    row: int,
    bank: int = 0,
    byte_offset: int = 0,
    bit: int = 0,
    threshold: int = 1000,
    reliability: float = 1.0,
    sidedness: Sidedness = Sidedness.DOUBLE_REQUIRED,
    rank: int = 0,
    dimm: int = 0,
) -> VulnerableCell:
    return VulnerableCell(
        dimm=dimm,
        rank=rank,
        bank=bank,
        row=row,
        byte_offset=byte_offset,
        bit=bit,
        threshold=threshold,
        reliability=reliability,
        sidedness=sidedness,
    )


def make_profile(mapping: MappingScheme, *cells: VulnerableCell) -> VulnerabilityProfile:
    return VulnerabilityProfile(geometry_digest=mapping.digest, cells=list(cells))
