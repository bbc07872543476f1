from contextlib import contextmanager
from dataclasses import replace
from logging import getLogger
from pathlib import Path
from typing import Annotated, Any, Dict, Iterator, List, Optional, Tuple

import typer
from pydantic import ValidationError

from catt.attack.campaign import run_campaign
from catt.attack.machine import MachineBlueprint
from catt.attack.scan import scan as run_scan
from catt.attack.scenario import DefenseKind, MachineRef, Scenario, load_scenario
from catt.bcatt.blacklist import Blacklist, load_blacklist, store_blacklist
from catt.bcatt.memory_map import MemoryMap, capacity_note, load_memory_map, store_memory_map
from catt.bcatt.overhead import overhead_report
from catt.bcatt.pipeline import derive_blacklist, extend_map
from catt.dram.io import resolve_geometry
from catt.dram.mapping import MappingScheme
from catt.errors import CattError, InputParseError
from catt.fault.cell import Sidedness, VulnerabilityProfile
from catt.fault.profile import load_profile, store_profile
from catt.fault.synth import synthesize_profile
from catt.gcatt.overhead import gcatt_overhead, render_gcatt_overhead
from catt.gcatt.policy import PolicyVariant
from catt.gcatt.trace import AllocationTrace
from catt.gcatt.workload import run_workload
from catt.logging.logger import get_logger
from catt.settings import Settings
from catt.settings.attack import ScanConfig
from catt.statistics.export import ResultFile, render_attack_table, save_attack_result
from catt.statistics.manifest import RunManifest, store_manifest
from catt.statistics.models import AttackResult
from catt.statistics.report import report as merge_reports

logger = getLogger(__name__)

app = typer.Typer(
    name="catt",
    help="Simulate rowhammer attacks and the B-CATT and G-CATT defenses.",
    no_args_is_help=True,
    add_completion=False,
)


@contextmanager
def _exit_on_error() -> Iterator[None]:
    """
    Turn library errors into the process exit code they carry.
    """
    try:
        yield
    except CattError as error:
        logger.error("%s", error)
        raise typer.Exit(code=error.exit_code) from error
    except ValidationError as error:
        logger.error("Invalid parameters: %s", error)
        raise typer.Exit(code=InputParseError.exit_code) from error


def _settings(context: typer.Context) -> Settings:
    return context.obj


def _load_machine(geometry: str, profile: Optional[Path]) -> Tuple[MappingScheme, VulnerabilityProfile]:
    mapping = resolve_geometry(geometry)
    if profile is None:
        return mapping, VulnerabilityProfile(geometry_digest=mapping.digest)
    return mapping, load_profile(profile, mapping)


def _blueprint(
    settings: Settings,
    mapping: MappingScheme,
    profile: VulnerabilityProfile,
    defense: DefenseKind,
    guard_rows: Optional[int],
) -> MachineBlueprint:
    allocator = settings.allocator
    return MachineBlueprint(
        mapping=mapping,
        profile=profile,
        defense=defense,
        guard_rows=guard_rows if guard_rows is not None else allocator.guard_rows,
        kernel_base=allocator.kernel_base,
        split_row=allocator.split_row,
        blast_radius=settings.fault.blast_radius,
        max_order=allocator.max_order,
        refresh_window=settings.fault.refresh_window,
    )


def _machine_label(geometry: str) -> str:
    return Path(geometry).stem


GeometryOption = Annotated[
    Optional[str], typer.Option("--geometry", help="Geometry preset name or JSON file.")
]
ProfileOption = Annotated[
    Optional[Path], typer.Option("--profile", help="Vulnerability profile JSON file.")
]
DefenseOption = Annotated[
    Optional[DefenseKind], typer.Option("--defense", help="Defense configuration.")
]
GuardRowsOption = Annotated[
    Optional[int], typer.Option("--guard-rows", min=1, help="Rows separating security domains.")
]
SeedOption = Annotated[Optional[int], typer.Option("--seed", min=0, help="Seed (u64).")]
OutOption = Annotated[Path, typer.Option("--out", help="Output file.")]
ResultOption = Annotated[
    Optional[Path],
    typer.Option("--out", help="Output file, placed in the results folder when omitted."),
]
SCENARIO_HELP = "Scenario JSON file, or the name of one in the scenario folder."


@app.callback()
def main(context: typer.Context) -> None:
    """
    Configure settings and logging shared by every command.
    """
    with _exit_on_error():
        settings = Settings()
    get_logger(settings.logging)
    context.obj = settings


@app.command("scan")
def scan_command(
    context: typer.Context,
    out: ResultOption = None,
    geometry: GeometryOption = None,
    profile: ProfileOption = None,
    scenario: Annotated[
        Optional[Path],
        typer.Option("--scenario", help=f"Scan the machine of a scenario. {SCENARIO_HELP}"),
    ] = None,
    defense: DefenseOption = None,
    guard_rows: GuardRowsOption = None,
    seed: SeedOption = None,
    hammer_count: Annotated[
        Optional[int], typer.Option("--hammer-count", min=1, help="Activations per side.")
    ] = None,
    runs: Annotated[Optional[int], typer.Option("--runs", min=1, help="Scan repetitions.")] = None,
) -> None:
    """
    Run the double-sided scan and write the victim PFNs, one per line.
    """
    settings = _settings(context)
    with _exit_on_error():
        config = settings.scan
        if scenario is not None:
            scenario = settings.path.scenario_file(scenario)
            loaded = load_scenario(scenario)
            reference = loaded.scan_machine or loaded.machine
            mapping, vulnerable = reference.resolve(scenario.parent)
            blueprint = MachineBlueprint.from_scenario(
                loaded, mapping, vulnerable, settings.fault.refresh_window
            )
            config = loaded.scan or config
        elif geometry is not None:
            mapping, vulnerable = _load_machine(geometry, profile)
            blueprint = _blueprint(settings, mapping, vulnerable, DefenseKind.NONE, guard_rows)
        else:
            raise InputParseError("scan needs --geometry or --scenario.")

        overrides = {}
        if defense is not None:
            overrides["defense"] = defense
        if guard_rows is not None:
            overrides["guard_rows"] = guard_rows
        if overrides:
            blueprint = replace(blueprint, **overrides)
        if hammer_count is not None or runs is not None:
            config = ScanConfig(
                hammer_count=hammer_count or config.hammer_count,
                pattern=config.pattern,
                coverage_runs=runs or config.coverage_runs,
            )

        manifest = RunManifest(
            command="scan",
            geometry_digest=mapping.digest,
            profile_digest=vulnerable.digest,
            seed=seed or 0,
            defense=str(blueprint.defense),
        )
        victims = run_scan(blueprint.build(seed or 0), config)

        out = out or settings.path.result_file("victims.txt")
        out.parent.mkdir(parents=True, exist_ok=True)
        store_blacklist(Blacklist.of(victims), out)
        store_manifest(manifest.finish(), out)
    typer.echo(f"{len(victims)} victim frames")


@app.command("blacklist")
def blacklist_command(
    geometry: Annotated[str, typer.Option("--geometry", help="Geometry preset name or JSON file.")],
    out: OutOption,
    scans: Annotated[
        Optional[List[Path]],
        typer.Option("--scan", help="Scan output (repeatable, results are united)."),
    ] = None,
    profile: Annotated[
        Optional[Path], typer.Option("--profile", help="Blacklist the victim frames of a profile.")
    ] = None,
    base_map: Annotated[
        Optional[Path], typer.Option("--base-map", help="Memory map to extend.")
    ] = None,
    whole_row: Annotated[
        bool, typer.Option("--whole-row", help="Blacklist whole victim rows of --profile.")
    ] = False,
    label: Annotated[Optional[str], typer.Option("--label", help="Machine label.")] = None,
) -> None:
    """
    Extend a memory map with the frames found vulnerable and report the overhead.
    """
    with _exit_on_error():
        mapping = resolve_geometry(geometry)
        blacklist = Blacklist()
        for path in scans or []:
            blacklist = blacklist.union(load_blacklist(path))
        profile_digest = None
        if profile is not None:
            vulnerable = load_profile(profile, mapping)
            profile_digest = vulnerable.digest
            blacklist = blacklist.union(derive_blacklist(vulnerable, mapping, whole_row=whole_row))
        blacklist.check_range(mapping.geometry)

        original = (
            load_memory_map(base_map)
            if base_map is not None
            else MemoryMap.all_usable(mapping.geometry)
        )
        original.check_covers(mapping.geometry)
        extended = extend_map(original, blacklist, mapping.geometry)
        report = overhead_report(blacklist, mapping.geometry)
        logger.info("Memory map grew from %s", capacity_note(original, extended))

        manifest = RunManifest(
            command="blacklist", geometry_digest=mapping.digest, profile_digest=profile_digest
        )
        out.parent.mkdir(parents=True, exist_ok=True)
        store_memory_map(extended, out)
        store_manifest(manifest.finish(), out)
    typer.echo(report.table(label or _machine_label(geometry)), nl=False)


@app.command("alloc-sim")
def alloc_sim_command(
    context: typer.Context,
    geometry: Annotated[str, typer.Option("--geometry", help="Geometry preset name or JSON file.")],
    profile: ProfileOption = None,
    defense: Annotated[
        DefenseKind, typer.Option("--defense", help="Defense configuration.")
    ] = DefenseKind.GCATT_SPLIT,
    guard_rows: GuardRowsOption = None,
    seed: Annotated[int, typer.Option("--seed", min=0, help="Workload seed.")] = 0,
    operations: Annotated[
        int, typer.Option("--operations", min=1, help="Alloc and free operations.")
    ] = 10_000,
    audit_every: Annotated[
        int, typer.Option("--audit-every", min=0, help="Operations between audits.")
    ] = 1000,
    out: Annotated[
        Optional[Path], typer.Option("--out", help="Allocation trace destination.")
    ] = None,
) -> None:
    """
    Drive the allocator with a seeded random workload and audit its invariants.
    """
    settings = _settings(context)
    with _exit_on_error():
        mapping, vulnerable = _load_machine(geometry, profile)
        blueprint = _blueprint(settings, mapping, vulnerable, defense, guard_rows)
        machine = blueprint.build(seed)
        trace = AllocationTrace() if out is not None else None
        machine.allocator.trace = trace
        manifest = RunManifest(
            command="alloc-sim",
            geometry_digest=mapping.digest,
            profile_digest=vulnerable.digest,
            seed=seed,
            defense=str(defense),
        )

        isolated = machine.policy.variant is not PolicyVariant.NONE
        outcome = run_workload(
            machine.allocator,
            operations,
            seed=seed,
            audit_every=audit_every,
            guard_rows=blueprint.guard_rows if isolated else None,
            availability=machine.availability,
        )
        blacklisted = overhead_report(machine.blacklist, mapping.geometry)
        guards = gcatt_overhead(machine.policy, mapping.geometry)

        if outcome.violations:
            logger.error("%d audit violations", len(outcome.violations))
            raise typer.Exit(code=1)
        if trace is not None:
            out.parent.mkdir(parents=True, exist_ok=True)
            trace.write(out)
            store_manifest(manifest.finish(), out)

    typer.echo(
        f"operations {outcome.operations}  allocations {outcome.allocations}  "
        f"frees {outcome.frees}  denials {outcome.denials}  audits {outcome.audits}"
    )
    typer.echo(f"B-CATT overhead {blacklisted.percentage}")
    typer.echo(f"G-CATT overhead {render_gcatt_overhead(guards)}")


@app.command("attack")
def attack_command(
    context: typer.Context,
    scenario: Annotated[Path, typer.Option("--scenario", help=SCENARIO_HELP)],
    out: ResultOption = None,
    seed: SeedOption = None,
    attempts: Annotated[
        Optional[int], typer.Option("--attempts", min=1, help="Override the campaign length.")
    ] = None,
    single_sided: Annotated[
        bool, typer.Option("--single-sided", help="Hammer one aggressor row per victim.")
    ] = False,
) -> None:
    """
    Run a scenario: optional scan, then the exploit campaign. Writes the result
    JSON, a text table and the attempt log.
    """
    settings = _settings(context)
    with _exit_on_error():
        scenario = settings.path.scenario_file(scenario)
        loaded = load_scenario(scenario)
        mapping, vulnerable = loaded.machine.resolve(scenario.parent)
        blueprint = MachineBlueprint.from_scenario(
            loaded, mapping, vulnerable, settings.fault.refresh_window
        )
        manifest = RunManifest(
            command="attack",
            geometry_digest=mapping.digest,
            profile_digest=vulnerable.digest,
            defense=str(loaded.defense),
        )

        victims = None
        if loaded.scan is not None:
            victims, scan_manifest = _scenario_scan(loaded, scenario.parent, settings, seed or 0)
            manifest = manifest.model_copy(update=scan_manifest)

        if loaded.exploit is not None:
            updates = {"single_sided": single_sided or loaded.exploit.single_sided}
            if seed is not None:
                updates["seed"] = seed
            if attempts is not None:
                updates["attempts"] = attempts
            config = loaded.exploit.model_copy(update=updates)
            result = run_campaign(
                blueprint,
                config,
                threads=settings.threads,
                scenario=loaded.name,
                progress_interval=settings.logging.progress_interval,
            )
            manifest = manifest.model_copy(update={"seed": config.seed})
        else:
            result = AttackResult(
                scenario=loaded.name,
                defense=str(loaded.defense),
                memory_overhead=blueprint.memory_overhead(),
            )
        result = result.model_copy(update={"scan_victims": victims})

        out = out or settings.path.result_file(f"{loaded.name}.json")
        save_attack_result(ResultFile(manifest=manifest.finish(), result=result), out)
    typer.echo(render_attack_table([result]), nl=False)


def _scenario_scan(
    scenario: Scenario, base_folder: Path, settings: Settings, seed: int
) -> Tuple[int, Dict[str, Any]]:
    """
    Scan the scenario's scan machine, or the attacked one when it has none.

    Returns:
        Tuple[int, Dict[str, Any]]: Victims found and the manifest fields describing the scan.
    """
    reference: MachineRef = scenario.scan_machine or scenario.machine
    mapping, vulnerable = reference.resolve(base_folder)
    blueprint = MachineBlueprint.from_scenario(
        scenario, mapping, vulnerable, settings.fault.refresh_window
    )
    victims = run_scan(blueprint.build(seed), scenario.scan)
    fields = {}
    if scenario.scan_machine is not None:
        fields = {
            "scan_geometry_digest": mapping.digest,
            "scan_profile_digest": vulnerable.digest,
        }
    return len(victims), fields


@app.command("report")
def report_command(
    results: Annotated[List[Path], typer.Argument(help="Result files of the attack command.")],
    out: Annotated[
        Optional[Path], typer.Option("--out", help="Also write the table to this file.")
    ] = None,
) -> None:
    """
    Merge attack results obtained on the same geometry into one comparison table.
    """
    with _exit_on_error():
        table = merge_reports(results)
        if out is not None:
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text(table, encoding="utf-8")
    typer.echo(table, nl=False)


@app.command("synth-profile")
def synth_profile_command(
    context: typer.Context,
    geometry: Annotated[str, typer.Option("--geometry", help="Geometry preset name or JSON file.")],
    victims: Annotated[int, typer.Option("--victims", min=0, help="Victim frames.")],
    out: OutOption,
    seed: Annotated[int, typer.Option("--seed", min=0, help="Placement seed.")] = 0,
    threshold: Annotated[
        Optional[int], typer.Option("--threshold", min=1, help="Activation threshold.")
    ] = None,
    reliability: Annotated[
        float, typer.Option("--reliability", min=0.0, max=1.0, help="Flip probability.")
    ] = 1.0,
    sidedness: Annotated[
        Sidedness, typer.Option("--sidedness", help="Aggressor requirement.")
    ] = Sidedness.DOUBLE_REQUIRED,
) -> None:
    """
    Generate a seeded vulnerability profile with a given number of victim frames.
    """
    settings = _settings(context)
    with _exit_on_error():
        mapping = resolve_geometry(geometry)
        try:
            profile = synthesize_profile(
                mapping,
                victims,
                seed=seed,
                threshold=threshold or settings.fault.threshold,
                reliability=reliability,
                sidedness=sidedness,
            )
        except ValueError as error:
            raise InputParseError(str(error)) from error
        out.parent.mkdir(parents=True, exist_ok=True)
        store_profile(profile, out)
    typer.echo(f"{len(profile.cells)} cells, digest {profile.digest}")

