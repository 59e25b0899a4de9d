"""Run configuration: a flat ``key = value`` text format.

Example::

    # planar sweep
    case = planar-quadratic
    mode = helmholtz
    degrees = 2:24:2
    quad = auto
    a = 0.5

Keys
    case      planar-quadratic | ellipsoid | star | custom
    mode      helmholtz | poisson
    degrees   comma list (``2,4,6``) or inclusive range ``start:stop[:step]``
    quad      ``auto`` (q = n + 4) or a fixed integer q
    a         planar map parameter in (0, 1)
    M         nine comma-separated entries of the 3x3 linear map, row-major
    e_s       smoothness exponent of the star map, integer >= 2
    gamma     constant or expression (custom case; default 1 for 3D cases)
    map       custom case only: identity2 | identity3 | planar | linear | star
    f, g, exact
              custom case expressions over s,t or s1,s2,s3; g may also use
              the outward normal n1,n2(,n3); exact is optional
    out       output CSV path (``-`` for stdout)
"""

from dataclasses import dataclass, fields
from typing import Optional

import numpy as np

from .expr import ExpressionError, flux_function, point_function
from .mapping import ELLIPSOID_MATRIX

CASES = ("planar-quadratic", "ellipsoid", "star", "custom")
MODES = ("helmholtz", "poisson")
CUSTOM_MAPS = ("identity2", "identity3", "planar", "linear", "star")


class ConfigError(ValueError):
    """Invalid configuration; ``field`` names the offending key."""

    def __init__(self, field_name, message):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass
class RunConfig:
    case: str = "planar-quadratic"
    mode: str = "helmholtz"
    degrees: tuple = (10,)
    quad: Optional[int] = None
    a: float = 0.5
    M: tuple = tuple(ELLIPSOID_MATRIX.ravel())
    e_s: int = 5
    gamma: Optional[str] = None
    map: Optional[str] = None
    f: Optional[str] = None
    g: Optional[str] = None
    exact: Optional[str] = None
    out: str = "-"

    @property
    def dimension(self):
        if self.case == "planar-quadratic":
            return 2
        if self.case in ("ellipsoid", "star"):
            return 3
        return 2 if self.map in ("identity2", "planar") else 3

    def validate(self):
        if self.case not in CASES:
            raise ConfigError("case", f"must be one of {', '.join(CASES)}, got {self.case!r}")
        if self.mode not in MODES:
            raise ConfigError("mode", f"must be one of {', '.join(MODES)}, got {self.mode!r}")
        if not self.degrees:
            raise ConfigError("degrees", "must not be empty")
        if any(n < 0 for n in self.degrees):
            raise ConfigError("degrees", "must be >= 0")
        if list(self.degrees) != sorted(set(self.degrees)):
            raise ConfigError("degrees", "must be strictly ascending")
        if self.quad is not None and self.quad < 1:
            raise ConfigError("quad", f"must be 'auto' or an integer >= 1, got {self.quad}")
        if not 0.0 < self.a < 1.0:
            raise ConfigError("a", f"must lie in (0, 1), got {self.a}")
        if len(self.M) != 9:
            raise ConfigError("M", f"needs 9 entries, got {len(self.M)}")
        if abs(np.linalg.det(np.reshape(self.M, (3, 3)))) < 1e-13:
            raise ConfigError("M", "matrix is singular")
        if self.e_s < 2:
            raise ConfigError("e_s", f"must be an integer >= 2, got {self.e_s}")
        if self.case == "custom":
            if self.map not in CUSTOM_MAPS:
                raise ConfigError("map", f"custom case needs map in {', '.join(CUSTOM_MAPS)}")
            for key in ("f", "g"):
                if not getattr(self, key):
                    raise ConfigError(key, "required for the custom case")
            if self.mode == "helmholtz" and self.gamma is None:
                raise ConfigError("gamma", "required for the custom case in helmholtz mode")
        elif self.map is not None:
            raise ConfigError("map", "only allowed with case = custom")
        if self.mode == "poisson" and self.gamma is not None and self.case == "custom":
            raise ConfigError("gamma", "must be omitted in poisson mode")
        d = self.dimension
        for key in ("gamma", "f", "exact"):
            text = getattr(self, key)
            if text is not None:
                try:
                    point_function(text, d)
                except ExpressionError as exc:
                    raise ConfigError(key, str(exc)) from None
        if self.g is not None:
            try:
                flux_function(self.g, d)
            except ExpressionError as exc:
                raise ConfigError("g", str(exc)) from None
        return self


def parse_degrees(text):
    text = text.strip()
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            if len(parts) not in (2, 3):
                raise ValueError
            start, stop = parts[0], parts[1]
            step = parts[2] if len(parts) == 3 else 1
            if step < 1:
                raise ValueError
            return tuple(range(start, stop + 1, step))
        return tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise ConfigError("degrees", f"expected 'a,b,c' or 'start:stop[:step]', got {text!r}") from None


def _parse_value(key, raw):
    try:
        if key == "degrees":
            return parse_degrees(raw)
        if key == "quad":
            return None if raw.strip().lower() == "auto" else int(raw)
        if key == "a":
            return float(raw)
        if key == "e_s":
            val = float(raw)
            if val != int(val):
                raise ValueError
            return int(val)
        if key == "M":
            return tuple(float(v) for v in raw.split(","))
    except ValueError:
        raise ConfigError(key, f"invalid value {raw!r}") from None
    return raw.strip()


_KEYS = tuple(f.name for f in fields(RunConfig))


def parse_config(text):
    cfg = RunConfig()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(key, f"unknown key (known: {', '.join(_KEYS)})")
        setattr(cfg, key, _parse_value(key, raw))
    return cfg.validate()


def _format_value(key, value):
    if key == "degrees":
        return ",".join(str(n) for n in value)
    if key == "quad":
        return "auto" if value is None else str(value)
    if key == "M":
        return ",".join(repr(float(v)) for v in value)
    if key == "a":
        return repr(float(value))
    return str(value)


def serialize_config(cfg):
    lines = []
    for key in _KEYS:
        value = getattr(cfg, key)
        if value is None and key not in ("quad",):
            continue
        lines.append(f"{key} = {_format_value(key, value)}")
    return "\n".join(lines) + "\n"


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
