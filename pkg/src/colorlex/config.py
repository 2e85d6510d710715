"""Run configuration: INI parsing, validation and the output header.

A run is described by one INI file ([run], [schema], [sampling]
sections). Every output file starts with a header line carrying a
12-digit digest of the configuration and the seed, so outputs can be
traced back to the exact settings that produced them. The digest
covers everything except the output directory: the same analysis
written to two different places must produce identical bytes.
"""

from __future__ import annotations

import configparser
import hashlib
from dataclasses import dataclass, field, replace
from typing import Mapping

from .corpus import CANONICAL_FIELDS, DEFAULT_SCHEMA, LANGUAGE_MIN_COUNT
from .errors import ColorlexError

__all__ = ["RunConfig", "ConfigError", "load_config", "with_overrides",
           "config_hash", "header_line"]


class ConfigError(ColorlexError):
    pass


@dataclass(frozen=True)
class RunConfig:
    input: str
    language: str = "english"
    delimiter: str = ","
    hsl_scale: str = "percent"
    spellmap: str | None = None
    min_count: int = 10
    schema: Mapping[str, str | None] = field(
        default_factory=lambda: dict(DEFAULT_SCHEMA)
    )
    max_exact: int = 100
    sample_size: int = 100
    iterations: int = 30
    seed: int = 0
    out: str = "out"


_RUN_KEYS = {"input", "language", "delimiter", "hsl_scale", "spellmap",
             "min_count", "seed", "out"}
_SAMPLING_KEYS = {"max_exact", "sample_size", "iterations"}


def _get_int(section, key: str, default: int) -> int:
    if key not in section:
        return default
    try:
        return int(section[key])
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from None


def load_config(path) -> RunConfig:
    """Read and validate a run configuration file."""
    parser = configparser.ConfigParser(interpolation=None)
    read = parser.read(path, encoding="utf-8")
    if not read:
        raise ConfigError(f"cannot read config file {path}")
    unknown_sections = set(parser.sections()) - {"run", "schema", "sampling"}
    if unknown_sections:
        raise ConfigError(
            f"unknown config sections: {sorted(unknown_sections)}"
        )
    if "run" not in parser or "input" not in parser["run"]:
        raise ConfigError("config must set input in the [run] section")
    run = parser["run"]
    unknown = set(run) - _RUN_KEYS
    if unknown:
        raise ConfigError(f"unknown [run] keys: {sorted(unknown)}")

    language = run.get("language", "english").strip().lower()
    delimiter = run.get("delimiter", ",")
    if delimiter == "tab":
        delimiter = "\t"
    if len(delimiter) != 1:
        raise ConfigError(
            f"delimiter must be one character (or 'tab'), got {delimiter!r}"
        )
    hsl_scale = run.get("hsl_scale", "percent")
    if hsl_scale not in ("percent", "fraction"):
        raise ConfigError(f"hsl_scale must be percent or fraction, "
                          f"got {hsl_scale!r}")
    if "min_count" in run:
        min_count = _get_int(run, "min_count", 0)
    elif language in LANGUAGE_MIN_COUNT:
        min_count = LANGUAGE_MIN_COUNT[language]
    else:
        raise ConfigError(
            f"no default word-frequency threshold for language "
            f"{language!r}; set min_count explicitly"
        )
    if min_count < 1:
        raise ConfigError("min_count must be at least 1")

    schema: dict[str, str | None] = dict(DEFAULT_SCHEMA)
    if "schema" in parser:
        for fname, column in parser["schema"].items():
            if fname not in CANONICAL_FIELDS:
                raise ConfigError(f"unknown schema field {fname!r}")
            schema[fname] = column.strip() or None
        for fname, column in schema.items():
            if column is None and fname != "speaker_id":
                raise ConfigError(f"schema field {fname!r} cannot be empty")

    max_exact, sample_size, iterations = 100, 100, 30
    if "sampling" in parser:
        sampling = parser["sampling"]
        unknown = set(sampling) - _SAMPLING_KEYS
        if unknown:
            raise ConfigError(f"unknown [sampling] keys: {sorted(unknown)}")
        max_exact = _get_int(sampling, "max_exact", max_exact)
        sample_size = _get_int(sampling, "sample_size", sample_size)
        iterations = _get_int(sampling, "iterations", iterations)

    seed = _get_int(run, "seed", 0)
    if seed < 0:
        raise ConfigError("seed must be nonnegative")
    return RunConfig(
        input=run["input"],
        language=language,
        delimiter=delimiter,
        hsl_scale=hsl_scale,
        spellmap=run.get("spellmap") or None,
        min_count=min_count,
        schema=schema,
        max_exact=max_exact,
        sample_size=sample_size,
        iterations=iterations,
        seed=seed,
        out=run.get("out", "out"),
    )


def with_overrides(cfg: RunConfig, seed: int | None = None,
                   out: str | None = None) -> RunConfig:
    """Apply command-line overrides on top of a loaded configuration."""
    if seed is not None:
        if seed < 0:
            raise ConfigError("seed must be nonnegative")
        cfg = replace(cfg, seed=seed)
    if out is not None:
        cfg = replace(cfg, out=out)
    return cfg


def config_hash(cfg: RunConfig) -> str:
    """Digest of every setting except the output directory."""
    lines = [
        f"run.input={cfg.input}",
        f"run.language={cfg.language}",
        f"run.delimiter={cfg.delimiter}",
        f"run.hsl_scale={cfg.hsl_scale}",
        f"run.spellmap={cfg.spellmap or ''}",
        f"run.min_count={cfg.min_count}",
        f"run.seed={cfg.seed}",
        f"sampling.max_exact={cfg.max_exact}",
        f"sampling.sample_size={cfg.sample_size}",
        f"sampling.iterations={cfg.iterations}",
    ]
    lines.extend(
        f"schema.{fname}={cfg.schema.get(fname) or ''}"
        for fname in CANONICAL_FIELDS
    )
    digest = hashlib.sha256("\n".join(sorted(lines)).encode("utf-8"))
    return digest.hexdigest()[:12]


def header_line(cfg: RunConfig) -> str:
    """The provenance comment written at the top of every output file."""
    return f"# colorlex config={config_hash(cfg)} seed={cfg.seed}"
