import csv
import json
from pathlib import Path

import pytest
from pydantic import ValidationError

from catt.errors import DigestMismatchError, InputParseError
from catt.statistics.export import (
    ResultFile,
    load_result,
    render_attack_table,
    render_comparison,
    save_attack_result,
)
from catt.statistics.manifest import RunManifest, check_same_geometry, sidecar_path, store_manifest
from catt.statistics.models import AttackResult, AttemptRecord
from catt.statistics.report import merge_results, report

DIGEST = "31d420cc194d843c9beb75eeba20dd7e89c387c10a488940cd9b0d44c3d7a2c0"
OTHER_DIGEST = "71223f97f2c2b64219c2747fc31037c47389179cd4696a9153d738f49ccf0eb3"


def _result(defense: str, successes: int, attempts: int, **fields) -> AttackResult:
    return AttackResult(
        scenario=fields.pop("scenario", f"s1-{defense}"),
        defense=defense,
        successes=successes,
        attempts=attempts,
        **fields,
    )


def _file(result: AttackResult, digest: str = DIGEST) -> ResultFile:
    return ResultFile(
        manifest=RunManifest(command="attack", geometry_digest=digest, seed=2017, defense=result.defense),
        result=result,
    )


def test_attack_table() -> None:
    table = render_attack_table(
        [
            _result(
                "none",
                512,
                10000,
                scenario="s1-unprotected",
                scan_victims=133,
                flips_total=2051,
                cross_domain_flips=1030,
            ),
            _result("bcatt", 0, 0, scenario="scan-only", scan_victims=0, memory_overhead=5 / 256),
        ]
    )

    assert table.splitlines() == [
        "Scenario            Defense          Victims  Success   Tries   Flips   Cross   Overhead",
        "-" * 88,
        "s1-unprotected      none                 133      512   10000    2051    1030    0.0000%",
        "scan-only           bcatt                  0        0       -       0       0    1.9531%",
    ]
    assert table.endswith("\n")


def test_attack_table_without_scan() -> None:
    row = render_attack_table([_result("none", 1, 2)]).splitlines()[2]

    assert row.split()[:3] == ["s1-none", "none", "-"]


def test_comparison_table() -> None:
    table = render_comparison(
        [
            _result("none", 500, 10000, flips_total=12, cross_domain_flips=5),
            _result("bcatt", 0, 3500, memory_overhead=5 / 256),
        ]
    )

    assert table == (
        "Defense           Flips  Cross-domain  Successes/Attempts   Overhead\n"
        + "-" * 68
        + "\n"
        "none                 12             5           500/10000    0.0000%\n"
        "bcatt                 0             0              0/3500    1.9531%\n"
    )


def test_result_counts_are_consistent() -> None:
    with pytest.raises(ValidationError):
        AttackResult(attempts=1, successes=2)
    with pytest.raises(ValidationError):
        AttackResult(flips_total=1, cross_domain_flips=2)
    assert AttackResult().success_rate == 0.0
    assert _result("none", 1, 4).success_rate == 0.25


def test_aggregate_orders_and_sums() -> None:
    records = [
        AttemptRecord(
            attempt=1,
            seed=11,
            flips=2,
            unavailable_flips=2,
            cross_domain_flips=1,
            flip_classes={"page-table": 1, "free": 1, "unavailable": 2},
        ),
        AttemptRecord(attempt=0, seed=10, success=True, flips=3, cross_domain_flips=3, flip_classes={"page-table": 3}),
    ]

    result = AttackResult.aggregate(records, scenario="x", defense="none", memory_overhead=0.5)

    assert [record.attempt for record in result.log] == [0, 1]
    assert (result.attempts, result.successes, result.flips_total, result.cross_domain_flips) == (2, 1, 5, 4)
    assert result.unavailable_flips == 2
    assert result.flip_classes == {"free": 1, "page-table": 4, "unavailable": 2}
    assert result.memory_overhead == 0.5


def test_save_and_load(tmp_path: Path) -> None:
    records = [
        AttemptRecord(attempt=0, seed=10, success=True, flips=1, cross_domain_flips=1, target="dimm0/rank0/bank0/row9"),
        AttemptRecord(attempt=1, seed=11),
    ]
    result = AttackResult.aggregate(records, scenario="calibration", defense="none")
    out = tmp_path / "results" / "calibration.json"

    result_file = _file(result)

    written = save_attack_result(result_file, out)

    assert written == [out, out.with_suffix(".txt"), out.with_suffix(".csv")]
    assert load_result(out) == result_file
    assert out.with_suffix(".txt").read_text() == render_attack_table([result])
    with open(out.with_suffix(".csv"), newline="") as file:
        rows = list(csv.reader(file))
    assert rows[0][:6] == ["Attempt", "Seed", "Success", "Flips", "Cross-domain", "Unavailable"]
    assert rows[1][:3] == ["0", "10", "True"]
    assert rows[2][-1] == ""
    assert len(rows) == 3


def test_load_rejects_other_files(tmp_path: Path) -> None:
    path = tmp_path / "not-a-result.json"
    path.write_text(json.dumps({"cells": []}))

    with pytest.raises(InputParseError):
        load_result(path)
    with pytest.raises(InputParseError):
        load_result(tmp_path / "absent.json")


def test_manifest_sidecar(tmp_path: Path) -> None:
    out = tmp_path / "victims.txt"
    manifest = RunManifest(command="scan", geometry_digest=DIGEST, profile_digest=OTHER_DIGEST).finish()

    path = store_manifest(manifest, out)

    assert path == sidecar_path(out) == tmp_path / "victims.txt.manifest.json"
    stored = RunManifest.model_validate_json(path.read_text())
    assert stored == manifest
    assert stored.finished_at is not None
    assert stored.finished_at >= stored.started_at


def test_reproducible_dump_ignores_time() -> None:
    first = RunManifest(command="attack", geometry_digest=DIGEST, seed=1)
    second = RunManifest(command="attack", geometry_digest=DIGEST, seed=1).finish()

    assert first.reproducible_dump() == second.reproducible_dump()
    assert "started_at" not in first.reproducible_dump()
    assert first.reproducible_dump()["tool_version"]


def test_same_geometry_check() -> None:
    manifests = [RunManifest(command="attack", geometry_digest=DIGEST) for _ in range(3)]

    assert check_same_geometry(manifests) == DIGEST
    with pytest.raises(DigestMismatchError):
        check_same_geometry(manifests + [RunManifest(command="attack", geometry_digest=OTHER_DIGEST)])


def test_merge_keeps_input_order() -> None:
    files = [_file(_result(defense, 0, 10)) for defense in ("gcatt-split", "none", "bcatt")]

    lines = merge_results(files).splitlines()

    assert [line.split()[0] for line in lines[2:]] == ["gcatt-split", "none", "bcatt"]


def test_merge_rejects_mixed_geometries() -> None:
    files = [_file(_result("none", 0, 10)), _file(_result("bcatt", 0, 10), OTHER_DIGEST)]

    with pytest.raises(DigestMismatchError):
        merge_results(files)
    with pytest.raises(ValueError):
        merge_results([])


def test_report_reads_files(tmp_path: Path) -> None:
    paths = []
    for defense in ("none", "bcatt"):
        path = tmp_path / f"{defense}.json"
        save_attack_result(_file(_result(defense, 1, 10)), path)
        paths.append(path)

    table = report(paths)

    assert len(table.splitlines()) == 4
    assert "1/10" in table
