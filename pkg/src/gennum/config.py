"""Runtime configuration: grid, precision and decision thresholds.

A config file is plain ``key=value`` text; ``#`` starts a comment.  The
environment variable ``GN_CONFIG`` names a file read by :func:`load_config`
when no explicit path is given.
"""

import dataclasses
import os

from .errors import ConfigError

_KEYS = {
    "grid.K": ("K", int),
    "grid.tail_start": ("tail_start", int),
    "grid.base": ("base", int),
    "precision.bits": ("prec", int),
    "precision.max_bits": ("max_prec", int),
    "window.w": ("w", int),
    "order.delta": ("delta", float),
    "order.qmax": ("q_max", int),
    "sup.qmax": ("sup_qmax", int),
    "hyper.qmax": ("hyper_qmax", int),
    "gauge.threshold": ("gauge_threshold", float),
}


@dataclasses.dataclass(frozen=True)
class Config:
    K: int = 48
    tail_start: int = 16
    base: int = 2
    prec: int = 256
    max_prec: int = 1024
    w: int = 4
    delta: float = 0.05
    q_max: int = 24
    sup_qmax: int = 16
    hyper_qmax: int = 8
    gauge_threshold: float = 0.5

    def __post_init__(self):
        if self.K < 4:
            raise ConfigError("grid.K must be at least 4")
        if not 1 <= self.tail_start < self.K:
            raise ConfigError("grid.tail_start must satisfy 1 <= tail_start < K")
        if self.base < 2:
            raise ConfigError("grid.base must be an integer >= 2")
        if self.prec < 64:
            raise ConfigError("precision.bits must be at least 64")
        if self.w < 1:
            raise ConfigError("window.w must be positive")

    def replace(self, **kw):
        kw = {k: v for k, v in kw.items() if v is not None}
        if "prec" in kw and "max_prec" not in kw:
            kw["max_prec"] = max(self.max_prec, 4 * kw["prec"])
        return dataclasses.replace(self, **kw)

    def snapshot(self):
        """Config as an ordered dict using the file key names."""
        return {key: getattr(self, attr) for key, (attr, _) in sorted(_KEYS.items())}


DEFAULT = Config()


def parse_config(text):
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("line %d: expected key=value" % lineno)
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError("line %d: unknown key %r" % (lineno, key))
        attr, typ = _KEYS[key]
        try:
            values[attr] = typ(val)
        except ValueError:
            raise ConfigError("line %d: bad value %r for %s" % (lineno, val, key))
    return DEFAULT.replace(**values)


def load_config(path=None):
    path = path or os.environ.get("GN_CONFIG")
    if not path:
        return DEFAULT
    try:
        with open(path) as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError("cannot read config %s: %s" % (path, exc))
