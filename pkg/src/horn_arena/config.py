from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .runner import ConfigError, ResourceLimits, limits_for_profile

SEED_ENV = "HORN_ARENA_SEED"


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


@dataclass(frozen=True)
class RunConfig:
    """Settings for one run; loaded from a JSON file and overridden by flags."""

    corpus_roots: tuple = ()
    out_dir: str = "."
    profile: str = "competition"  # "test" | "competition"
    seed: int = field(default_factory=default_seed)
    solvers: str | None = None
    column_map: str | None = None
    slots: int = 2
    hors_concours: tuple = ()

    def __post_init__(self) -> None:
        if self.profile not in ("test", "competition"):
            raise ConfigError(f"profile must be 'test' or 'competition', not {self.profile!r}")
        if self.slots < 1:
            raise ConfigError("slots must be at least 1")

    def limits(self, track: str) -> ResourceLimits:
        return limits_for_profile(self.profile, track)

    def override(self, **flags) -> "RunConfig":
        given = {k: v for k, v in flags.items() if v is not None and k in {f.name for f in fields(self)}}
        for k in ("corpus_roots", "hors_concours"):
            if k in given:
                given[k] = tuple(given[k])
        return replace(self, **given)


def load_run_config(path: str | Path | None) -> RunConfig:
    if path is None:
        return RunConfig()
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: {e}") from None
    known = {f.name for f in fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
    for k in ("corpus_roots", "hors_concours"):
        if k in data:
            data[k] = tuple(data[k])
    return RunConfig(**data)


def load_column_map(path: str | Path | None) -> dict | None:
    if path is None:
        return None
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict) or not all(isinstance(v, str) for v in data.values()):
        raise ConfigError(f"{path}: column map must be a JSON object of strings")
    return data
