"""Suite configuration files.

Grammar, one entry per line::

    # comment
    suite = qdg-coideal
    spins = 1, 2
    bind.k+ = 1/2
    rho = (q + q^-1)^2

Blank lines and ``#`` comments are ignored. Keys are from a fixed set;
unknown or repeated keys are errors. ``bind.<name>`` fixes a parameter to a
rational value; everything left unbound stays symbolic.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, fields, replace
from fractions import Fraction

from .errors import ConfigError, QonsagerError
from .scalars import VAR_INDEX, EvaluationPoint, Scalar

SUITES = (
    "classical-onsager",
    "qdg-coideal",
    "augmented-coideal",
    "affine-presentation",
    "davies-kernel",
    "aw3-fit",
    "rewrite-zero",
)

# symbolic elimination on the spin-2 module at degree 3 takes over a minute,
# so the linear-algebra suites default to the spin-1/2 module
DEFAULT_SPINS = {"davies-kernel": (1,), "aw3-fit": (1,)}

_INT_KEYS = ("tensor_depth", "degree", "fuel", "window", "points", "seed")


@dataclass(frozen=True)
class SuiteConfig:
    suite: str | None = None
    bindings: dict = field(default_factory=dict)  # name -> Fraction
    spins: tuple | None = None  # None: per-suite default
    spectral: str = "v"
    tensor_depth: int = 0
    degree: int = 3
    fuel: int = 100_000
    out: str = "qons-out"
    window: int = 5
    points: int = 3
    seed: int = 0
    rho: str | None = None

    def __post_init__(self):
        if self.suite is not None and self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}")
        if self.spins is not None and (not self.spins or any(n < 0 for n in self.spins)):
            raise ConfigError("spins must be a non-empty list of non-negative integers")
        for k in _INT_KEYS:
            if getattr(self, k) < 0:
                raise ConfigError(f"{k} must be >= 0")
        if self.spectral not in VAR_INDEX:
            raise ConfigError(f"spectral parameter {self.spectral!r} is not a known variable")
        try:
            EvaluationPoint(self.bindings)
        except QonsagerError as exc:
            raise ConfigError(str(exc)) from None
        if self.rho is not None:
            self.rho_scalar()

    @property
    def module_spins(self) -> tuple:
        if self.spins is not None:
            return tuple(self.spins)
        return DEFAULT_SPINS.get(self.suite, (1, 2))

    def rho_scalar(self) -> Scalar | None:
        if self.rho is None:
            return None
        try:
            return Scalar.parse(self.rho)
        except QonsagerError as exc:
            raise ConfigError(f"rho: {exc}") from None

    def with_overrides(self, **kw) -> "SuiteConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    def dumps(self, with_out: bool = True) -> str:
        lines = []
        if self.suite is not None:
            lines.append(f"suite = {self.suite}")
        for name in sorted(self.bindings):
            lines.append(f"bind.{name} = {self.bindings[name]}")
        if self.spins is not None:
            lines.append("spins = " + ", ".join(str(n) for n in self.spins))
        lines.append(f"spectral = {self.spectral}")
        for k in _INT_KEYS:
            lines.append(f"{k} = {getattr(self, k)}")
        if with_out:
            lines.append(f"out = {self.out}")
        if self.rho is not None:
            lines.append(f"rho = {self.rho}")
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        """Hash of everything that affects results (the output path does not)."""
        return hashlib.sha256(self.dumps(with_out=False).encode()).hexdigest()


def _int(key, text):
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {text!r}") from None


def loads(text: str) -> SuiteConfig:
    kw: dict = {}
    bindings = {}
    seen = set()
    known = {f.name for f in fields(SuiteConfig)} - {"bindings"}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if not value:
            raise ConfigError(f"line {lineno}: empty value for {key!r}")
        if key in seen:
            raise ConfigError(f"line {lineno}: repeated key {key!r}")
        seen.add(key)
        if key.startswith("bind."):
            name = key[5:]
            if name not in VAR_INDEX:
                raise ConfigError(f"line {lineno}: unknown parameter {name!r}")
            try:
                bindings[name] = Fraction(value)
            except (ValueError, ZeroDivisionError):
                raise ConfigError(f"line {lineno}: {key} needs a rational value") from None
        elif key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        elif key == "spins":
            kw["spins"] = tuple(_int(key, s.strip()) for s in value.split(","))
        elif key in _INT_KEYS:
            kw[key] = _int(key, value)
        else:
            kw[key] = value
    try:
        return SuiteConfig(bindings=bindings, **kw)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def load(path) -> SuiteConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            return loads(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
