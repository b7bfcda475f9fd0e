"""
Configuration - YAML file, environment variables and command-line overrides

Precedence, highest first:
1. command-line flags (passed to Settings.merged)
2. COMPLEMENT_MINER_* environment variables
3. the YAML file given with --config
4. built-in defaults

Example file:

    seeds: [fit, work]
    cce_min_count: 1
    stop_verbs: [go, need]
    path9_without_cett: false
    keep_provenance: false
    match_mode: equality
    workers: 4
    extra_paths:
      - id: subject
        dsl: "(CETT, N) <-nsubj- (VERB, V)"
        role: basic
    disabled_paths: ["5", "6"]
"""

import os
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any

import yaml

from .catalog import BUILTIN_IDS, DEFAULT_SEEDS, PathCatalog, PathRole, user_path
from .errors import ComplementMinerError, ConfigError
from .evaluation import MatchMode
from .knowledge import ExpansionSettings

ENV_PREFIX = "COMPLEMENT_MINER_"

_USER_ROLES = (PathRole.BASIC, PathRole.BASELINE)


@dataclass(frozen=True)
class ExtraPath:
    """A user path appended to the built-in catalog"""

    id: str
    dsl: str
    role: PathRole = PathRole.BASIC


def _words(value: Any, key: str) -> frozenset[str]:
    if isinstance(value, str):
        value = value.split(",")
    if not isinstance(value, Iterable):
        raise ConfigError(f"'{key}' must be a list of words")
    return frozenset(str(item).strip().lower() for item in value if str(item).strip())


def _seeds(value: Any, key: str) -> frozenset[str]:
    words = _words(value, key)
    if not words:
        raise ConfigError(f"'{key}' needs at least one verb")
    return words


def _path_ids(value: Any, key: str) -> frozenset[str]:
    if isinstance(value, (str, int)):
        value = str(value).split(",")
    if not isinstance(value, Iterable):
        raise ConfigError(f"'{key}' must be a list of path ids")
    ids = frozenset(str(item).strip() for item in value if str(item).strip())
    unknown = sorted(ids - BUILTIN_IDS)
    if unknown:
        raise ConfigError(f"'{key}': unknown built-in path ids {', '.join(unknown)}")
    return ids


def _flag(value: Any, key: str) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off", ""):
        return False
    raise ConfigError(f"'{key}' must be a boolean, got {value!r}")


def _int(value: Any, key: str, minimum: int) -> int:
    try:
        number = int(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"'{key}' must be an integer, got {value!r}") from exc
    if number < minimum:
        raise ConfigError(f"'{key}' must be >= {minimum}, got {number}")
    return number


def _extra_paths(value: Any) -> tuple[ExtraPath, ...]:
    if not isinstance(value, list):
        raise ConfigError("'extra_paths' must be a list of {id, dsl, role} entries")
    paths = []
    for entry in value:
        if not isinstance(entry, Mapping) or "id" not in entry or "dsl" not in entry:
            raise ConfigError(f"extra path entry needs 'id' and 'dsl': {entry!r}")
        try:
            role = PathRole(entry.get("role", PathRole.BASIC.value))
        except ValueError as exc:
            raise ConfigError(f"extra path '{entry['id']}': unknown role") from exc
        if role not in _USER_ROLES:
            raise ConfigError(
                f"extra path '{entry['id']}': role must be basic or baseline"
            )
        paths.append(ExtraPath(str(entry["id"]), str(entry["dsl"]), role))
    return tuple(paths)


_PARSERS = {
    "seeds": _seeds,
    "stop_verbs": _words,
    "cce_min_count": lambda v, k: _int(v, k, 1),
    "workers": lambda v, k: _int(v, k, 1),
    "path9_without_cett": _flag,
    "keep_provenance": _flag,
    "match_mode": lambda v, k: _match_mode(v),
    "extra_paths": lambda v, k: _extra_paths(v),
    "disabled_paths": _path_ids,
}


def _match_mode(value: Any) -> MatchMode:
    if isinstance(value, MatchMode):
        return value
    try:
        return MatchMode(str(value).lower())
    except ValueError as exc:
        raise ConfigError(
            f"'match_mode' must be equality or containment, got {value!r}"
        ) from exc


@dataclass(frozen=True)
class Settings:
    """Resolved settings shared by all subcommands"""

    seeds: frozenset[str] = DEFAULT_SEEDS
    cce_min_count: int = 1
    stop_verbs: frozenset[str] = frozenset()
    path9_without_cett: bool = False
    keep_provenance: bool = False
    match_mode: MatchMode = MatchMode.EQUALITY
    workers: int = 1
    extra_paths: tuple[ExtraPath, ...] = field(default=())
    disabled_paths: frozenset[str] = frozenset()

    @classmethod
    def _parse(cls, raw: Mapping[str, Any], source: str) -> dict[str, Any]:
        unknown = sorted(set(raw) - set(_PARSERS))
        if unknown:
            raise ConfigError(f"{source}: unknown settings {', '.join(unknown)}")
        parsed = {}
        for key, value in raw.items():
            try:
                parsed[key] = _PARSERS[key](value, key)
            except ConfigError as exc:
                raise ConfigError(f"{source}: {exc}") from exc
        return parsed

    @classmethod
    def from_file(cls, path: str | Path, base: "Settings | None" = None) -> "Settings":
        """Read a YAML settings file on top of ``base`` (defaults if omitted)"""
        try:
            raw = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
        except yaml.YAMLError as exc:
            raise ConfigError(f"{path}: invalid YAML ({exc})") from exc
        if raw is None:
            raw = {}
        if not isinstance(raw, Mapping):
            raise ConfigError(f"{path}: expected a mapping at the top level")
        return replace(base or cls(), **cls._parse(raw, str(path)))

    @classmethod
    def from_env(
        cls, environ: Mapping[str, str] | None = None, base: "Settings | None" = None
    ) -> "Settings":
        """Apply COMPLEMENT_MINER_<KEY> variables (extra_paths excluded)"""
        environ = os.environ if environ is None else environ
        raw = {}
        for item in fields(cls):
            name = ENV_PREFIX + item.name.upper()
            if item.name != "extra_paths" and name in environ:
                raw[item.name] = environ[name]
        return replace(base or cls(), **cls._parse(raw, "environment"))

    @classmethod
    def load(
        cls, config: str | Path | None = None, environ: Mapping[str, str] | None = None
    ) -> "Settings":
        """Defaults, then the config file, then the environment"""
        settings = cls.from_file(config) if config else cls()
        return cls.from_env(environ, base=settings)

    def merged(self, **overrides: Any) -> "Settings":
        """Apply command-line values; None means the flag was not given"""
        given = {key: value for key, value in overrides.items() if value is not None}
        return replace(self, **self._parse(given, "command line"))

    def expansion(self) -> ExpansionSettings:
        return ExpansionSettings(
            cce_min_count=self.cce_min_count,
            stop_verbs=self.stop_verbs,
            path9_without_cett=self.path9_without_cett,
            keep_provenance=self.keep_provenance,
        )

    def catalog(self) -> PathCatalog:
        """Built-in catalog plus the configured extra paths"""
        base = PathCatalog.default(
            seeds=self.seeds,
            path9_without_cett=self.path9_without_cett,
            disabled=self.disabled_paths,
        )
        if not self.extra_paths:
            return base
        try:
            extra = [user_path(p.id, p.dsl, p.role) for p in self.extra_paths]
            return base.with_paths(extra)
        except (ComplementMinerError, ValueError) as exc:
            raise ConfigError(f"extra paths: {exc}") from exc
