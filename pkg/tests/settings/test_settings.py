import json
from logging import INFO, LogRecord, getLogger
from pathlib import Path

import pytest
from pydantic import ValidationError

from catt.logging.format import ConsoleFormatter, JsonFormatter, SimpleFormatter, get_formatter
from catt.logging.logger import get_logger
from catt.settings import Settings
from catt.settings.logging import LogFormat, LoggingSettings, LogLevel


@pytest.fixture(autouse=True)
def isolated(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
    monkeypatch.chdir(tmp_path)
    for name in (
        "CATT_SIM_THREADS",
        "CATT_SIM_LOGGING__LEVEL",
        "CATT_SIM_ALLOCATOR__GUARD_ROWS",
        "CATT_SIM_FAULT__BLAST_RADIUS",
    ):
        monkeypatch.delenv(name, raising=False)


def _record(message: str = "flip at %#x", *args) -> LogRecord:
    return LogRecord("catt.fault.state", INFO, "state.py", 42, message, args or (0x9000,), None)


def test_defaults() -> None:
    settings = Settings()

    assert settings.threads == 1
    assert settings.logging.level is LogLevel.INFO
    assert settings.logging.format is LogFormat.CONSOLE
    assert settings.allocator.guard_rows == 1
    assert settings.allocator.kernel_base == 0x100000
    assert settings.fault.blast_radius == 1
    assert settings.fault.refresh_window is None
    assert settings.path.scenario_folder == Path("scenarios")
    assert settings.path.results_folder == Path("results")


def test_environment_overrides(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("CATT_SIM_THREADS", "4")
    monkeypatch.setenv("CATT_SIM_LOGGING__LEVEL", "DEBUG")
    monkeypatch.setenv("CATT_SIM_ALLOCATOR__GUARD_ROWS", "2")

    settings = Settings()

    assert settings.threads == 4
    assert settings.logging.level is LogLevel.DEBUG
    assert settings.allocator.guard_rows == 2


def test_dotenv_file(tmp_path: Path) -> None:
    (tmp_path / ".env").write_text(
        "CATT_SIM_THREADS=3\nCATT_SIM_FAULT__BLAST_RADIUS=2\nCATT_SIM_ALLOCATOR__GUARD_ROWS=2\n"
    )

    settings = Settings()

    assert settings.threads == 3
    assert settings.fault.blast_radius == 2


def test_invalid_values(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("CATT_SIM_THREADS", "0")
    with pytest.raises(ValidationError):
        Settings()

    monkeypatch.setenv("CATT_SIM_THREADS", "1")
    settings = Settings()
    with pytest.raises(ValidationError):
        settings.threads = -1


def test_guard_rows_must_cover_blast_radius(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("CATT_SIM_FAULT__BLAST_RADIUS", "2")
    with pytest.raises(ValidationError, match="blast_radius"):
        Settings()

    monkeypatch.setenv("CATT_SIM_ALLOCATOR__GUARD_ROWS", "2")
    assert Settings().allocator.guard_rows == 2


def test_scenario_by_name(tmp_path: Path) -> None:
    folder = tmp_path / "mine"
    folder.mkdir()
    (folder / "s1-bcatt.json").write_text("{}")
    settings = Settings(path={"scenario_folder": folder, "results_folder": "out"})

    assert settings.path.scenario_file(Path("s1-bcatt")) == folder / "s1-bcatt.json"
    assert settings.path.scenario_file(Path("s1-bcatt.json")) == folder / "s1-bcatt.json"
    assert settings.path.scenario_file(Path("missing")) == Path("missing")
    assert settings.path.result_file("s1-bcatt.json") == Path("out") / "s1-bcatt.json"


def test_formatter_lookup() -> None:
    assert isinstance(get_formatter("json"), JsonFormatter)
    assert isinstance(get_formatter(LogFormat.SIMPLE), SimpleFormatter)
    assert isinstance(get_formatter("CONSOLE"), ConsoleFormatter)
    assert isinstance(get_formatter("fancy"), ConsoleFormatter)


def test_json_formatter() -> None:
    payload = json.loads(JsonFormatter().format(_record()))

    assert payload["level"] == "INFO"
    assert payload["message"] == "flip at 0x9000"
    assert payload["logger"] == "catt.fault.state"
    assert payload["line"] == 42
    assert payload["timestamp"].endswith("+00:00")


def test_console_and_simple_formatters() -> None:
    console = ConsoleFormatter().format(_record())

    assert console.startswith("[")
    assert console.endswith("] INFO - catt.fault.state - flip at 0x9000")
    assert SimpleFormatter().format(_record()) == "INFO: flip at 0x9000"


def test_get_logger_installs_one_handler() -> None:
    root = getLogger()
    saved = (root.level, list(root.handlers))
    try:
        logger = get_logger(LoggingSettings(level=LogLevel.WARNING, format=LogFormat.JSON))
        get_logger(LoggingSettings(level=LogLevel.WARNING, format=LogFormat.JSON))

        assert logger.name == "catt"
        assert len(root.handlers) == 1
        assert isinstance(root.handlers[0].formatter, JsonFormatter)
        assert root.level == 30
    finally:
        root.setLevel(saved[0])
        root.handlers[:] = saved[1]
