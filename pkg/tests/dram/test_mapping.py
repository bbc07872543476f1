from typing import List

import pytest
from numpy import arange, int64
from numpy.random import default_rng

from catt.dram.geometry import DramGeometry, row_index
from catt.dram.io import load_geometry, resolve_geometry, store_geometry
from catt.dram.location import DramLocation, RowAddress
from catt.dram.mapping import MappingScheme, SchemeId, build_mapping, rank_bit_swizzle
from catt.dram.presets import load_preset, preset_names
from catt.errors import InputParseError, LocationOutOfRangeError


def test_decode_examples(g0: MappingScheme) -> None:
    assert g0.decode(0) == DramLocation(0, 0, 0, 0, 0)
    assert g0.decode(8192) == DramLocation(0, 0, 1, 0, 0)
    assert g0.decode(131072) == DramLocation(0, 0, 0, 1, 0)


def test_encode_examples(g0: MappingScheme) -> None:
    assert g0.encode(DramLocation(0, 0, 0, 0, 0)) == 0
    assert g0.encode(DramLocation(0, 0, 1, 0, 0)) == 8192
    assert g0.encode(DramLocation(0, 1, 0, 0, 0)) == 65536


def test_encode_rejects_invalid_location(g0: MappingScheme) -> None:
    with pytest.raises(LocationOutOfRangeError):
        g0.encode(DramLocation(0, 2, 0, 0, 0))
    with pytest.raises(LocationOutOfRangeError):
        g0.encode(DramLocation(0, 0, 0, 0, 8192))


def test_frames_in_row_examples(g0: MappingScheme) -> None:
    assert g0.frames_in_row(RowAddress(0, 0, 0, 0)) == [0, 1]
    assert g0.frames_in_row(RowAddress(0, 0, 0, 1)) == [32, 33]
    assert g0.frames_in_row(RowAddress(0, 0, 1, 0)) == [2, 3]


def test_frames_in_row_rejects_invalid_bank(g0: MappingScheme) -> None:
    with pytest.raises(LocationOutOfRangeError):
        g0.frames_in_row(RowAddress(0, 0, 8, 0))


MINI = DramGeometry(rows_per_bank=8)


def _mini_mappings() -> List[MappingScheme]:
    return [
        build_mapping(MINI),
        build_mapping(MINI, SchemeId.CUSTOM_BIT_SWIZZLE, rank_bit_swizzle(MINI, rank_bit=19)),
    ]


@pytest.mark.slow
@pytest.mark.parametrize("mapping", _mini_mappings(), ids=["linear", "swizzle"])
def test_every_address_of_mini_geometry_round_trips(mapping: MappingScheme) -> None:
    assert MINI.total_bytes == 1 << 20
    rows = mapping.to_linear_array(arange(MINI.total_bytes, dtype=int64)) // MINI.rowgroup_bytes

    for pa in range(MINI.total_bytes):
        location = mapping.decode(pa)
        assert mapping.encode(location) == pa
        assert location.row == rows[pa]


@pytest.mark.slow
def test_row_formula_matches_decode_on_every_address() -> None:
    mapping = build_mapping(MINI)
    for pa in range(MINI.total_bytes):
        assert mapping.decode(pa).row == row_index(pa, MINI)


@pytest.mark.parametrize("mapping", _mini_mappings(), ids=["linear", "swizzle"])
def test_page_edges_of_mini_geometry_round_trip(mapping: MappingScheme) -> None:
    for pfn in range(MINI.total_frames):
        for pa in (pfn * MINI.page_size, (pfn + 1) * MINI.page_size - 1):
            location = mapping.decode(pa)
            assert mapping.encode(location) == pa
            assert mapping.frame_row(pfn) == location.row_address


def test_swizzle_moves_rows_of_mini_geometry() -> None:
    linear, swizzle = _mini_mappings()
    assert swizzle.decode(1 << 19).row != linear.decode(1 << 19).row
    assert swizzle.decode(1 << 19).rank != linear.decode(1 << 19).rank
    assert row_index(1 << 19, MINI) == linear.decode(1 << 19).row == 4


@pytest.mark.parametrize("preset", ["g0", "ivy-bridge"])
def test_random_addresses_round_trip(preset: str) -> None:
    mapping = load_preset(preset)
    for pa in default_rng(7).integers(0, mapping.geometry.total_bytes, size=100_000).tolist():
        assert mapping.encode(mapping.decode(pa)) == pa


def test_frame_coordinates_agree_with_decode() -> None:
    mapping = load_preset("ivy-bridge")
    units, rows = mapping.frame_coordinates()
    for pfn in default_rng(3).integers(0, mapping.geometry.total_frames, size=500).tolist():
        address = mapping.frame_row(pfn)
        assert units[pfn] == mapping.geometry.unit_index(address)
        assert rows[pfn] == address.row


def test_adjacent_rows_only_within_a_bank(g0: MappingScheme) -> None:
    first = g0.decode(0).row_address
    other_bank = g0.decode(8192).row_address
    next_row = g0.decode(131072).row_address
    assert first.distance(next_row) == 1
    assert first.distance(other_bank) is None


def test_ivy_bridge_rank_bit() -> None:
    mapping = load_preset("ivy-bridge")
    assert mapping.decode(0x2FFFFF).rank != mapping.decode(0x300000).rank


def test_swizzle_rejects_non_permutation() -> None:
    with pytest.raises(ValueError):
        build_mapping(DramGeometry(), SchemeId.CUSTOM_BIT_SWIZZLE, [0] * 28)


def test_swizzle_keeps_page_offset_bits() -> None:
    table = list(range(28))
    table[0], table[20] = table[20], table[0]
    with pytest.raises(ValueError):
        build_mapping(DramGeometry(), SchemeId.CUSTOM_BIT_SWIZZLE, table)


def test_digest_depends_on_scheme(g0: MappingScheme) -> None:
    assert g0.digest == load_preset("g0").digest
    assert g0.digest != load_preset("ivy-bridge").digest
    assert g0.digest != load_preset("s1").digest


def test_geometry_file_round_trip(tmp_path, g0: MappingScheme) -> None:
    path = tmp_path / "ivy.json"
    ivy = load_preset("ivy-bridge")
    store_geometry(ivy, path)
    assert load_geometry(path).digest == ivy.digest
    assert resolve_geometry("ivy.json", tmp_path).digest == ivy.digest
    assert resolve_geometry("g0").digest == g0.digest


def test_geometry_file_with_unknown_field(tmp_path) -> None:
    path = tmp_path / "geometry.json"
    path.write_text('{"page_size": 4096, "colour": "blue"}', encoding="utf-8")
    with pytest.raises(InputParseError):
        load_geometry(path)


def test_unknown_preset() -> None:
    assert "exploit-mini" in preset_names()
    with pytest.raises(KeyError):
        load_preset("ddr9")
    with pytest.raises(InputParseError):
        resolve_geometry("ddr9")
