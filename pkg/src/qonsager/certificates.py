"""Machine-readable verification certificates."""

from __future__ import annotations

import datetime as _dt
import enum
import json
from dataclasses import dataclass, field

from . import __version__
from .matrix import Matrix
from .ncalg import AlgebraElement


class Verdict(str, enum.Enum):
    VERIFIED = "Verified"
    FAILED = "Failed"
    INCONCLUSIVE = "Inconclusive"


WEAKNESS = {Verdict.VERIFIED: 0, Verdict.INCONCLUSIVE: 1, Verdict.FAILED: 2}


def is_zero(x) -> bool:
    if isinstance(x, (int,)):
        return x == 0
    if hasattr(x, "is_zero"):
        return x.is_zero()
    return not x


def encode_residual(label: str, x) -> dict:
    """Serialize a residual in full: every nonzero entry or coefficient."""
    if isinstance(x, Matrix):
        return {
            "relation": label,
            "kind": "matrix",
            "shape": list(x.shape),
            "entries": [[i, j, str(v)] for (i, j), v in x.nonzero_entries()],
        }
    if isinstance(x, AlgebraElement):
        return {
            "relation": label,
            "kind": "element",
            "alphabet": list(x.alphabet.names),
            "terms": [["*".join(x.alphabet.word_names(w)), str(c)] for w, c in x.items()],
        }
    if hasattr(x, "to_terms"):
        return {"relation": label, "kind": "loop", "terms": x.to_terms()}
    return {"relation": label, "kind": type(x).__name__, "value": str(x)}


@dataclass
class VerificationCertificate:
    identity: str
    verdict: Verdict
    engine: str
    bindings: dict = field(default_factory=dict)
    residual: list = field(default_factory=list)  # nonzero residuals only
    checked: list = field(default_factory=list)  # labels of every relation examined
    metadata: dict = field(default_factory=dict)
    timestamp: str | None = None
    version: str = __version__

    @classmethod
    def from_residuals(cls, identity, residuals, engine="matrix", bindings=None, metadata=None, undecided=Verdict.FAILED):
        """Verified iff every residual is exactly zero; otherwise ``undecided``."""
        nonzero = [encode_residual(lab, x) for lab, x in residuals if not is_zero(x)]
        verdict = Verdict.VERIFIED if not nonzero else undecided
        return cls(
            identity=identity,
            verdict=verdict,
            engine=engine,
            bindings={k: str(v) for k, v in (bindings or {}).items()},
            residual=nonzero,
            checked=[lab for lab, _ in residuals],
            metadata=dict(metadata or {}),
            timestamp=_dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        )

    @property
    def ok(self) -> bool:
        return self.verdict is Verdict.VERIFIED

    def to_dict(self, reproducible=False) -> dict:
        return {
            "identity": self.identity,
            "bindings": dict(sorted(self.bindings.items())),
            "residual": self.residual,
            "checked": self.checked,
            "verdict": self.verdict.value,
            "engine": self.engine,
            "metadata": self.metadata,
            "timestamp": None if reproducible else self.timestamp,
            "version": self.version,
        }

    def to_json(self, reproducible=False) -> str:
        return json.dumps(self.to_dict(reproducible), indent=1, sort_keys=True)

    @classmethod
    def from_dict(cls, doc: dict) -> "VerificationCertificate":
        return cls(
            identity=doc["identity"],
            verdict=Verdict(doc["verdict"]),
            engine=doc["engine"],
            bindings=doc.get("bindings", {}),
            residual=doc.get("residual", []),
            checked=doc.get("checked", []),
            metadata=doc.get("metadata", {}),
            timestamp=doc.get("timestamp"),
            version=doc.get("version", __version__),
        )

    @classmethod
    def from_json(cls, text: str) -> "VerificationCertificate":
        return cls.from_dict(json.loads(text))


def weakest(verdicts) -> Verdict:
    verdicts = list(verdicts)
    if not verdicts:
        return Verdict.VERIFIED
    return max(verdicts, key=WEAKNESS.__getitem__)


CERTIFICATE_SCHEMA = {
    "type": "object",
    "required": ["identity", "bindings", "residual", "verdict", "engine", "version"],
    "properties": {
        "identity": {"type": "string"},
        "bindings": {"type": "object", "additionalProperties": {"type": "string"}},
        "residual": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["relation", "kind"],
                "properties": {"relation": {"type": "string"}, "kind": {"type": "string"}},
            },
        },
        "checked": {"type": "array", "items": {"type": "string"}},
        "verdict": {"enum": ["Verified", "Failed", "Inconclusive"]},
        "engine": {"enum": ["matrix", "rewrite", "loop", "linear-algebra"]},
        "metadata": {"type": "object"},
        "timestamp": {"type": ["string", "null"]},
        "version": {"type": "string"},
    },
}
