"""Flat ``key = value`` experiment configuration.

One pair per line, ``#`` starts a comment. Lists are comma separated.
Every value is validated before any computation; a bad value raises
:class:`ConfigError` naming its key.
"""
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError

TWO_PI = 2.0 * math.pi

KINDS = ("eval", "afe-scan", "kernel", "moment", "twisted-moment",
         "product-moment", "t2-scan", "fit")


def _number(key, text, cast=float):
    try:
        v = cast(text)
    except (TypeError, ValueError):
        raise ConfigError(key, f"not a valid {cast.__name__}: {text!r}") from None
    if cast is float and not math.isfinite(v):
        raise ConfigError(key, "must be finite")
    return v


def _check(key, ok, msg):
    if not ok:
        raise ConfigError(key, msg)


def real(lo=None, hi=None, lo_open=False, nonzero=False):
    def parse(key, text):
        v = _number(key, text)
        if lo is not None:
            _check(key, v > lo if lo_open else v >= lo,
                   f"must be {'>' if lo_open else '>='} {lo:g}")
        if hi is not None:
            _check(key, v <= hi, f"must be <= {hi:g}")
        if nonzero:
            _check(key, v != 0, "must be nonzero")
        return v
    return parse


def integer(lo=None, choices=None):
    def parse(key, text):
        v = _number(key, text, int)
        if lo is not None:
            _check(key, v >= lo, f"must be >= {lo}")
        if choices is not None:
            _check(key, v in choices, f"must be one of {choices}")
        return v
    return parse


def shift(key, text):
    v = _number(key, text)
    _check(key, 0.0 <= v < 1.0, "must lie in [0, 1)")
    return v


def unit_interval(key, text):
    return shift(key, text)


def complex_value(key, text):
    try:
        v = complex(text.replace(" ", ""))
    except ValueError:
        raise ConfigError(key, f"not a complex number: {text!r}") from None
    _check(key, math.isfinite(v.real) and math.isfinite(v.imag), "must be finite")
    return v


def boolean(key, text):
    t = text.strip().lower()
    if t in ("true", "yes", "1", "on"):
        return True
    if t in ("false", "no", "0", "off"):
        return False
    raise ConfigError(key, f"not a boolean: {text!r}")


def choice(*options):
    def parse(key, text):
        _check(key, text in options, f"must be one of {', '.join(options)}")
        return text
    return parse


def listof(item):
    def parse(key, text):
        parts = [p.strip() for p in text.split(",")]
        _check(key, parts and all(parts), "empty list item")
        return [item(key, p) for p in parts]
    return parse


def existing_file(key, text):
    _check(key, bool(text) and Path(text).is_file(), f"no such file: {text!r}")
    return text


def directory(key, text):
    _check(key, bool(text), "must be a non-empty path")
    _check(key, not Path(text).is_file(), "names an existing file")
    return text


def word(key, text):
    _check(key, bool(text) and "," not in text, "must be a single non-empty name")
    return text


# key -> (parser, default); a default of REQUIRED marks a required key
REQUIRED = object()

COMMON = {
    "seed": (integer(lo=0), 0),
    "threads": (integer(lo=1), 1),
    "cache_dir": (directory, None),
    "record_timing": (boolean, False),
}

_step = real(lo=0.0, hi=0.2, lo_open=True)

SCHEMAS = {
    "eval": {
        "s": (complex_value, REQUIRED),
        "y": (shift, 0.0),
        "target": (real(lo=0.0, hi=1e-3, lo_open=True), None),
    },
    "afe-scan": {
        "t_min": (real(lo=TWO_PI), REQUIRED),
        "t_max": (real(lo=TWO_PI, lo_open=True), REQUIRED),
        "steps": (integer(lo=2), REQUIRED),
        "y": (shift, 0.0),
        "M_policy": (choice("balanced", "fixed"), "balanced"),
        "M": (real(lo=1.0), None),
    },
    "kernel": {
        "t": (listof(real(lo=TWO_PI)), REQUIRED),
        "nodes": (integer(lo=1000), 20000),
        "u_points": (integer(lo=2), 1000),
    },
    "moment": {
        "V": (listof(real(lo=TWO_PI, lo_open=True)), REQUIRED),
        "y": (shift, 0.0),
        "power": (integer(choices=(2, 4)), 4),
        "step": (_step, 0.05),
        "refine_check": (boolean, True),
    },
    "twisted-moment": {
        "V": (listof(real(lo=TWO_PI, lo_open=True)), REQUIRED),
        "y": (shift, 0.0),
        "u": (listof(unit_interval), REQUIRED),
        "step": (_step, 0.05),
        "refine_check": (boolean, True),
    },
    "product-moment": {
        "T": (listof(real(lo=math.e, lo_open=True)), REQUIRED),
        "K": (listof(integer(lo=1)), REQUIRED),
        "L": (listof(integer(lo=1)), REQUIRED),
        "theta": (shift, 0.0),
        "xi": (shift, 0.0),
        "alpha": (real(nonzero=True), 1.0),
        "beta": (real(nonzero=True), 1.0),
        "coeffs": (choice("all_ones", "random_unimodular"), "random_unimodular"),
        "step": (_step, None),
        "refine_check": (boolean, True),
        "log_power": (integer(choices=(3, 15)), 15),
    },
    "t2-scan": {
        "K": (integer(lo=1), REQUIRED),
        "theta": (shift, 0.0),
        "alpha": (real(nonzero=True), 1.0),
        "V": (real(lo=1.0), REQUIRED),
        "T": (real(lo=1.0), REQUIRED),
        "t_min": (real(), REQUIRED),
        "t_max": (real(), REQUIRED),
        "steps": (integer(lo=2), 50),
        "sigma_step": (real(lo=0.0, hi=0.1, lo_open=True), 0.1),
    },
    "fit": {
        "input": (existing_file, REQUIRED),
        "x_column": (word, "V_or_T"),
        "y_column": (word, "value"),
    },
}


@dataclass
class ExperimentConfig:
    kind: str
    parameters: dict = field(default_factory=dict)
    seed: int = 0
    threads: int = 1
    cache_dir: str = None
    record_timing: bool = False


def read_pairs(path):
    """Parse a config file into an ordered dict of raw strings."""
    pairs = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {raw!r}")
        key, value = (p.strip() for p in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {lineno}", "empty key")
        pairs[key] = value
    return pairs


def build_config(kind, pairs, overrides=None, environ=None):
    """Validate raw pairs for ``kind``. Precedence: overrides, then environment, then file."""
    if kind not in SCHEMAS:
        raise ConfigError("kind", f"unknown kind {kind!r}; choose from {', '.join(KINDS)}")
    environ = os.environ if environ is None else environ
    schema = {**COMMON, **SCHEMAS[kind]}
    for key in pairs:
        if key not in schema:
            raise ConfigError(key, f"unknown key for kind {kind}")
    values = {}
    for key, (parse, default) in schema.items():
        if key in pairs:
            values[key] = parse(key, pairs[key])
        elif default is REQUIRED:
            raise ConfigError(key, "missing required key")
        else:
            values[key] = default
    _cross_checks(kind, values)

    common = {k: values.pop(k) for k in COMMON}
    env_cache = environ.get("HZLAB_CACHE_DIR")
    if env_cache:
        common["cache_dir"] = directory("HZLAB_CACHE_DIR", env_cache)
    for key, value in (overrides or {}).items():
        if value is not None:
            common[key] = COMMON[key][0](key, str(value))
    return ExperimentConfig(kind=kind, parameters=values, **common)


def _cross_checks(kind, v):
    if kind == "afe-scan":
        _check("t_max", v["t_max"] > v["t_min"], "must exceed t_min")
        if v["M_policy"] == "fixed":
            _check("M", v["M"] is not None, "required when M_policy = fixed")
            _check("M", v["M"] <= v["t_min"], "must be <= t_min")
    elif kind == "t2-scan":
        _check("T", v["T"] >= v["V"], "must be >= V")
        _check("t_max", v["t_max"] > v["t_min"], "must exceed t_min")
