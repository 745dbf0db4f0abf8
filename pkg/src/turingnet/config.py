"""Run configuration: an INI ``[pipeline]`` section, overridable by CLI flags."""

from __future__ import annotations

import configparser
import dataclasses
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .centrality import DEFAULT_MAX_ITERS, DEFAULT_TOLERANCE, MEASURES
from .errors import InputError, ValidationError
from .graph import DEFAULT_CLIQUE_GUARD
from .tn import DEFAULT_TRIALS

INDICATORS = ("n_papers", "n_citations", "h_index")
FORMATS = ("jsonl", "dblp")
SECTION = "pipeline"

PATH_FIELDS = ("inputs", "laureates", "geocode", "affiliations")
# execution-only settings: they never change results, so they stay out of the hash
UNHASHED_FIELDS = ("output_dir", "threads")


@dataclass(frozen=True)
class RunConfig:
    inputs: tuple[str, ...]
    laureates: str
    output_dir: str
    format: str = "jsonl"
    geocode: str | None = None
    affiliations: str | None = None
    clique_guard: int = DEFAULT_CLIQUE_GUARD
    khop_radius: int | None = None
    null_k: int | None = None
    null_trials: int = DEFAULT_TRIALS
    rng_seed: int = 0
    exclude_seeds: bool = False
    measures: tuple[str, ...] = MEASURES
    betweenness_samples: int | None = None
    tolerance: float = DEFAULT_TOLERANCE
    max_iters: int = DEFAULT_MAX_ITERS
    indicators: tuple[str, ...] = INDICATORS
    exclude_zero: bool = False
    fig3_stat: str = "mean"
    top_k: int = 11
    threads: int = 1

    def validate(self) -> "RunConfig":
        if not self.inputs:
            raise ValidationError("no input corpus given")
        if self.format not in FORMATS:
            raise ValidationError(f"unknown format {self.format!r}; expected one of {FORMATS}")
        bad = [m for m in self.measures if m not in MEASURES]
        if bad:
            raise ValidationError(f"unknown centrality measure(s) {bad}; expected {MEASURES}")
        bad = [i for i in self.indicators if i not in INDICATORS]
        if bad:
            raise ValidationError(f"unknown indicator(s) {bad}; expected {INDICATORS}")
        if self.null_k is not None and self.null_k < 1:
            raise ValidationError("null_k must be >= 1")
        if self.null_trials < 1:
            raise ValidationError("null_trials must be >= 1")
        if self.clique_guard < 2:
            raise ValidationError("clique_guard must be >= 2")
        if self.khop_radius is not None and self.khop_radius < 0:
            raise ValidationError("khop_radius must be >= 0")
        if self.betweenness_samples is not None and self.betweenness_samples < 1:
            raise ValidationError("betweenness_samples must be >= 1")
        if not self.tolerance > 0 or self.max_iters < 1:
            raise ValidationError("tolerance must be > 0 and max_iters >= 1")
        if self.fig3_stat not in ("mean", "median"):
            raise ValidationError("fig3_stat must be 'mean' or 'median'")
        if self.top_k < 1 or self.threads < 1:
            raise ValidationError("top_k and threads must be >= 1")
        if (self.geocode is None) != (self.affiliations is None):
            raise ValidationError("geocode and affiliations must be given together")
        for p in self.input_paths():
            if not Path(p).is_file():
                raise InputError(f"input file not found: {p}")
        return self

    def input_paths(self) -> list[str]:
        return [p for p in (*self.inputs, self.laureates, self.geocode, self.affiliations) if p]

    def config_hash(self) -> str:
        """Hash of every result-affecting field, with input paths replaced by
        the SHA-256 of their contents (so moving files does not change it)."""
        from .reports import sha256_file

        d = dataclasses.asdict(self)
        for name in UNHASHED_FIELDS:
            d.pop(name)
        for name in PATH_FIELDS:
            v = d[name]
            if isinstance(v, (list, tuple)):
                d[name] = [sha256_file(p) for p in v]
            elif v is not None:
                d[name] = sha256_file(v)
        blob = json.dumps(d, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}


def _convert(name, raw):
    if raw is None:
        return None
    if not isinstance(raw, str):
        return raw
    raw = raw.strip()
    kind = _FIELDS[name].type
    if raw == "" or raw.lower() == "none":
        if "None" in kind:
            return None
        if kind.startswith("tuple"):
            return ()
        raise ValidationError(f"{name} must not be empty")
    try:
        if kind.startswith("tuple"):
            return tuple(x.strip() for x in raw.split(",") if x.strip())
        if kind.startswith("bool"):
            if raw.lower() in ("1", "true", "yes", "on"):
                return True
            if raw.lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if kind.startswith("int"):
            return int(raw)
        if kind.startswith("float"):
            return float(raw)
    except ValueError:
        raise ValidationError(f"bad value for {name}: {raw!r}") from None
    return raw


def read_config_file(path) -> dict:
    """Read ``[pipeline]`` key = value pairs; relative paths resolve against the file."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ValidationError(f"{path}: {exc}") from None
    if not parser.has_section(SECTION):
        raise ValidationError(f"{path}: missing [{SECTION}] section")
    raw = dict(parser.items(SECTION))
    unknown = sorted(set(raw) - set(_FIELDS))
    if unknown:
        raise ValidationError(f"{path}: unknown config key(s) {unknown}")
    base = Path(path).parent
    for name in (*PATH_FIELDS, "output_dir"):
        if raw.get(name, "").strip():
            parts = [p.strip() for p in raw[name].split(",") if p.strip()]
            raw[name] = ",".join(str(base / p) if not Path(p).is_absolute() else p
                                 for p in parts)
    return raw


def build_config(file_values: dict | None = None, overrides: dict | None = None) -> RunConfig:
    """Merge defaults < config file < overrides, convert types and validate."""
    merged = dict(file_values or {})
    merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
    missing = [k for k in ("inputs", "laureates", "output_dir") if not merged.get(k)]
    if missing:
        raise ValidationError(f"missing required setting(s): {missing}")
    kwargs = {k: _convert(k, v) for k, v in merged.items()}
    return RunConfig(**kwargs).validate()
