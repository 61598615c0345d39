"""Runtime configuration and the persisted user profile.

Config lives in a small JSON file whose keys match the AppConfig fields;
the environment variables RISKGATE_PORT, RISKGATE_MATRIX and
RISKGATE_INCIDENCE override it. The profile persists separately so the
"set once" severity preference survives restarts.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields
from pathlib import Path

from .matrix import RiskMatrix, default_matrix, parse_matrix, validate_matrix
from .model import DEFAULT_MAX_PERSONS, PersonProfile, ValidationError
from .scenario import parse_profile
from .serialize import profile_payload

ENV_PORT = "RISKGATE_PORT"
ENV_MATRIX = "RISKGATE_MATRIX"
ENV_INCIDENCE = "RISKGATE_INCIDENCE"

DEFAULT_PORT = 8642
DEFAULT_PROFILE_PATH = Path("~/.config/riskgate/profile.json")


@dataclass
class AppConfig:
    matrix_path: Path | None = None
    incidence_source: str | None = None
    incidence_cache: Path | None = None
    max_persons: int = DEFAULT_MAX_PERSONS
    listen_host: str = "127.0.0.1"  # personal tool: loopback unless told otherwise
    listen_port: int = DEFAULT_PORT
    profile_path: Path = DEFAULT_PROFILE_PATH

    def __post_init__(self):
        if isinstance(self.max_persons, bool) or not isinstance(self.max_persons, int):
            raise ValidationError("max_persons must be an integer")
        if self.max_persons < 1:
            raise ValidationError("max_persons must be >= 1")
        if isinstance(self.listen_port, bool) or not isinstance(self.listen_port, int):
            raise ValidationError("listen_port must be an integer")
        if not 1 <= self.listen_port <= 65535:
            raise ValidationError("listen_port must be in 1..65535")
        if self.matrix_path is not None:
            self.matrix_path = Path(self.matrix_path)
        if self.incidence_cache is not None:
            self.incidence_cache = Path(self.incidence_cache)
        self.profile_path = Path(self.profile_path).expanduser()


def load_config(path: str | Path | None = None, env=os.environ) -> AppConfig:
    """Build an AppConfig from an optional JSON file plus env overrides."""
    doc = {}
    if path is not None:
        try:
            doc = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: not valid JSON ({exc.msg})") from None
        if not isinstance(doc, dict):
            raise ValidationError(f"{path}: config must be a JSON object")
        known = {f.name for f in fields(AppConfig)}
        unknown = set(doc) - known
        if unknown:
            raise ValidationError(f"{path}: unknown config keys {sorted(unknown)}")

    if env.get(ENV_MATRIX):
        doc["matrix_path"] = env[ENV_MATRIX]
    if env.get(ENV_INCIDENCE):
        doc["incidence_source"] = env[ENV_INCIDENCE]
    if env.get(ENV_PORT):
        try:
            doc["listen_port"] = int(env[ENV_PORT])
        except ValueError:
            raise ValidationError(f"{ENV_PORT} must be an integer") from None
    return AppConfig(**doc)


def load_matrix(config: AppConfig) -> RiskMatrix:
    """The configured matrix file, or the built-in default; always validated."""
    if config.matrix_path is None:
        matrix = default_matrix()
    else:
        matrix = parse_matrix(Path(config.matrix_path).read_text())
    report = validate_matrix(matrix)
    if not report.ok:
        first = report.errors[0]
        raise ValidationError(
            f"matrix {matrix.name!r} fails validation "
            f"({len(report.errors)} errors, first: {first.message})"
        )
    return matrix


def load_profile(path: str | Path) -> PersonProfile | None:
    """The persisted profile, or None if none has been stored yet."""
    path = Path(path)
    if not path.exists():
        return None
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON ({exc.msg})") from None
    return parse_profile(doc, location=str(path))


def save_profile(path: str | Path, profile: PersonProfile) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(profile_payload(profile), indent=2, sort_keys=True) + "\n")
