"""Experiment configuration in a flat ``key = value`` text format.

Keys are dotted: ``experiment.*``, ``de.*`` and ``obl.*``. Lists are
comma-separated, an empty value means "use the default", and floats are
written with ``repr`` so a config survives a write/read cycle unchanged.
"""

from dataclasses import dataclass, field, fields, replace

from ..objective import list_functions
from ..obl import PRESETS


class ConfigError(ValueError):
    """Bad or unknown configuration key/value; ``key`` names the offender."""

    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key


ALGORITHMS = ("de",) + tuple(PRESETS)


@dataclass(frozen=True)
class DeSection:
    F: float = 0.5
    CR: float = 0.9
    NP: int = 100
    crossover: str = "binomial"


@dataclass(frozen=True)
class OblSection:
    jumping_rate: float = 0.05
    dt: float = 1e-6
    T: float = 10.0
    rate_max: float = 0.3
    rate_min: float = 0.0
    window: int = 3
    crossover: str | None = None
    diversity: str | None = None


@dataclass(frozen=True)
class ExperimentConfig:
    algorithms: tuple = ("de", "ibetacobl")
    functions: tuple = ("shifted-rotated-rastrigin",)
    dimensions: tuple = (30,)
    runs: int = 51
    budget: int | None = None
    budget_per_dim: int = 10000
    base_seed: int = 0
    transform_seed: int = 0
    checkpoints: int = 16
    de: DeSection = field(default_factory=DeSection)
    obl: OblSection = field(default_factory=OblSection)

    def budget_for(self, dimension):
        return self.budget if self.budget is not None else self.budget_per_dim * dimension

    def validate(self):
        for name in self.algorithms:
            if name not in ALGORITHMS:
                raise ConfigError("experiment.algorithms", f"unknown algorithm {name!r}")
        known = set(list_functions())
        for name in self.functions:
            if name not in known:
                raise ConfigError("experiment.functions", f"unknown function {name!r}")
        if self.runs < 1:
            raise ConfigError("experiment.runs", "must be >= 1")
        if any(d < 1 for d in self.dimensions):
            raise ConfigError("experiment.dimensions", "must be >= 1")
        if self.de.NP < 4:
            raise ConfigError("de.NP", "DE/rand/1 needs NP >= 4")
        for d in self.dimensions:
            if self.budget_for(d) < self.de.NP:
                raise ConfigError("experiment.budget", "budget smaller than NP")
        return self

    # -- flat serialisation -------------------------------------------------

    def to_flat(self):
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name in ("de", "obl"):
                for sub in fields(value):
                    out[f"{f.name}.{sub.name}"] = _format(getattr(value, sub.name))
            else:
                out[f"experiment.{f.name}"] = _format(value)
        return out

    def to_text(self):
        return "".join(f"{k} = {v}\n" for k, v in self.to_flat().items())

    @classmethod
    def from_flat(cls, flat, base=None):
        base = base or cls()
        top, de, obl = {}, {}, {}
        sections = {"experiment": (top, cls), "de": (de, DeSection), "obl": (obl, OblSection)}
        for key, raw in flat.items():
            section, _, name = key.partition(".")
            if section not in sections or not name:
                raise ConfigError(key, "unknown key")
            target, klass = sections[section]
            kinds = {f.name: f.type for f in fields(klass)}
            if name not in kinds or name in ("de", "obl"):
                raise ConfigError(key, "unknown key")
            try:
                target[name] = _parse(kinds[name], raw)
            except ValueError as exc:
                raise ConfigError(key, f"cannot parse {raw!r} ({exc})") from None
        return replace(base, de=replace(base.de, **de), obl=replace(base.obl, **obl), **top)

    @classmethod
    def from_text(cls, text, base=None):
        flat = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}", "expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            flat[key] = value
        return cls.from_flat(flat, base)

    def with_overrides(self, assignments):
        """Apply ``["de.F=0.6", ...]`` style overrides."""
        flat = {}
        for item in assignments:
            if "=" not in item:
                raise ConfigError(item, "override must look like key=value")
            k, v = item.split("=", 1)
            flat[k.strip()] = v.strip()
        return ExperimentConfig.from_flat(flat, self)


def _format(value):
    if value is None:
        return ""
    if isinstance(value, tuple):
        return ",".join(_format(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse(kind, raw):
    raw = raw.strip()
    kind = kind.__name__ if isinstance(kind, type) else str(kind)
    if raw == "" and "None" in kind:
        return None
    if kind == "tuple":
        items = tuple(s.strip() for s in raw.split(",") if s.strip())
        if items and all(s.lstrip("-").isdigit() for s in items):
            return tuple(int(s) for s in items)
        return items
    if kind.startswith("int"):
        return int(raw)
    if kind.startswith("float"):
        return float(raw)
    return raw
