"""Persistent append-only cache of critical-line zeta values.

File ``hzcache.txt`` in the cache directory::

    HZCACHE v1
    <y> <t> <re> <im> <precision_tag>

Reals are written with 17 significant digits so they round-trip exactly.
``precision_tag`` is ``-log10`` of the absolute error target.
"""
import threading
from pathlib import Path

from .errors import CacheCorrupt
from .hurwitz import EulerMaclaurinParams, HurwitzPoint, hurwitz_eval

HEADER = "HZCACHE v1"
FILENAME = "hzcache.txt"


def format_row(y, t, value, tag):
    return f"{y:.17g} {t:.17g} {value.real:.17g} {value.imag:.17g} {int(tag)}"


def parse_row(line):
    parts = line.split()
    if len(parts) != 5:
        raise CacheCorrupt(f"malformed cache row: {line!r}")
    try:
        y, t, re, im = (float(p) for p in parts[:4])
        tag = int(parts[4])
    except ValueError:
        raise CacheCorrupt(f"malformed cache row: {line!r}") from None
    return (y, t), complex(re, im), tag


def default_evaluator(y, t, tag):
    return hurwitz_eval(HurwitzPoint(0.5, t, y),
                        EulerMaclaurinParams.for_height(t, 10.0 ** -tag))


class EvalCache:
    """Snapshot loaded at construction plus serialized appends.

    ``evals`` counts evaluator calls, so a hit leaves it unchanged.
    """

    def __init__(self, directory, evaluator=default_evaluator):
        self.path = Path(directory) / FILENAME
        self.evaluator = evaluator
        self.evals = 0
        self._lock = threading.Lock()
        self._snapshot = self._load()
        self._fresh = {}

    def _load(self):
        if not self.path.exists():
            return {}
        entries = {}
        with self.path.open() as fh:
            header = fh.readline().rstrip("\n")
            if header != HEADER:
                raise CacheCorrupt(f"bad cache header {header!r} in {self.path}")
            for line in fh:
                if not line.strip():
                    continue
                key, value, tag = parse_row(line)
                if key not in entries or entries[key][1] < tag:
                    entries[key] = (value, tag)
        return entries

    def __len__(self):
        return len(self._snapshot) + len(self._fresh)

    def lookup(self, y, t, precision_tag):
        key = (float(y), float(t))
        hit = self._snapshot.get(key) or self._fresh.get(key)
        if hit is not None and hit[1] >= precision_tag:
            return hit[0]
        return None

    def lookup_or_eval(self, y, t, precision_tag):
        value = self.lookup(y, t, precision_tag)
        if value is not None:
            return value
        value = self.evaluator(float(y), float(t), precision_tag)
        with self._lock:
            self.evals += 1
            self._append(float(y), float(t), value, precision_tag)
        return value

    def _append(self, y, t, value, tag):
        self.path.parent.mkdir(parents=True, exist_ok=True)
        new = not self.path.exists()
        with self.path.open("a") as fh:
            if new:
                fh.write(HEADER + "\n")
            fh.write(format_row(y, t, value, tag) + "\n")
        self._fresh[(y, t)] = (value, tag)


def cache_lookup_or_eval(cache, y, t, precision_tag):
    """Cached zeta(1/2 + i t, y); evaluates and appends on a miss."""
    return cache.lookup_or_eval(y, t, precision_tag)
