"""Degree-bounded word rewriting modulo an oriented presentation.

The engine is a checker: a ``Zero`` verdict is sound because every rule is a
defining relation solved for its leading word, but a nonzero normal form
proves nothing since the rule sets are not known to be confluent.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import ParseError
from .ncalg import AlgebraElement, Alphabet

DEFAULT_FUEL = 100_000


class Status(str, enum.Enum):
    CONVERGED = "converged"
    FUEL_EXHAUSTED = "fuel_exhausted"


class Certify(str, enum.Enum):
    ZERO = "Zero"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class RewriteRule:
    lhs: tuple  # word of letter indices
    rhs: AlgebraElement
    label: str = ""

    def relation(self) -> AlgebraElement:
        """lhs - rhs as an element; it vanishes in the presented algebra."""
        a = self.rhs.alphabet
        return AlgebraElement(a, {self.lhs: 1}) - self.rhs

    def to_text(self) -> str:
        a = self.rhs.alphabet
        lhs = "*".join(a.word_names(self.lhs))
        prefix = f"[{self.label}] " if self.label else ""
        return f"{prefix}{lhs} -> {self.rhs}"


class RuleSet:
    """Rules over one alphabet with a graded-lex order from a letter precedence."""

    def __init__(self, alphabet: Alphabet, rules, precedence=None):
        self.alphabet = alphabet
        precedence = list(precedence or alphabet.names)
        if sorted(precedence) != sorted(alphabet.names):
            raise ValueError("precedence must list every letter exactly once")
        self.precedence = tuple(precedence)
        self.rank = tuple(precedence.index(n) for n in alphabet.names)
        self.rules = tuple(rules)
        seen = set()
        self._by_first: dict = {}
        for r in self.rules:
            if not r.lhs:
                raise ValueError("a rule needs a nonempty leading word")
            if r.lhs in seen:
                raise ValueError(f"two rules share the leading word {alphabet.word_names(r.lhs)}")
            seen.add(r.lhs)
            if r.lhs in r.rhs.terms:
                raise ValueError(f"rule {r.to_text()} has its leading word on the right")
            lead = self.order_key(r.lhs)
            for w in r.rhs.terms:
                if self.order_key(w) >= lead:
                    raise ValueError(f"rule {r.to_text()} does not decrease in the declared order")
            self._by_first.setdefault(r.lhs[0], []).append(r)

    def order_key(self, word):
        rank = self.rank
        return (len(word), tuple(rank[i] for i in word))

    def find_redex(self, word):
        """Leftmost position with a matching rule; ties go to the first declared rule."""
        n = len(word)
        for pos in range(n):
            for r in self._by_first.get(word[pos], ()):
                m = len(r.lhs)
                if pos + m <= n and word[pos : pos + m] == r.lhs:
                    return pos, r
        return None

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)


@dataclass
class NormalForm:
    element: AlgebraElement
    status: Status
    steps: int = 0

    def __iter__(self):
        yield self.element
        yield self.status


def normal_form(x: AlgebraElement, rules: RuleSet, fuel: int = DEFAULT_FUEL) -> NormalForm:
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    if x.alphabet != rules.alphabet:
        from .errors import AlphabetMismatch

        raise AlphabetMismatch(f"{x.alphabet} vs {rules.alphabet}")
    key = rules.order_key
    pending = dict(x.terms)
    done: dict = {}
    steps = 0
    status = Status.CONVERGED
    while pending:
        w = max(pending, key=key)
        c = pending.pop(w)
        redex = rules.find_redex(w)
        if redex is None:
            done[w] = c
            continue
        if steps >= fuel:
            pending[w] = c
            status = Status.FUEL_EXHAUSTED
            break
        steps += 1
        pos, rule = redex
        head, tail = w[:pos], w[pos + len(rule.lhs) :]
        for w2, c2 in rule.rhs.terms.items():
            nw = head + w2 + tail
            s = c * c2
            if nw in pending:
                s = pending[nw] + s
            if s.num:
                pending[nw] = s
            else:
                pending.pop(nw, None)
    if status is Status.FUEL_EXHAUSTED:
        for w, c in pending.items():
            s = done[w] + c if w in done else c
            if s.num:
                done[w] = s
            else:
                done.pop(w, None)
    return NormalForm(AlgebraElement(x.alphabet, done), status, steps)


def certify_zero(x: AlgebraElement, rules: RuleSet, fuel: int = DEFAULT_FUEL) -> Certify:
    if x.is_zero():
        return Certify.ZERO
    nf = normal_form(x, rules, fuel)
    if nf.status is Status.CONVERGED and nf.element.is_zero():
        return Certify.ZERO
    return Certify.INCONCLUSIVE


# -- presentation files -------------------------------------------------------


@dataclass
class Presentation:
    name: str
    alphabet: Alphabet
    rules: RuleSet
    source: str = field(default="", repr=False)

    def relations(self) -> list[tuple[str, AlgebraElement]]:
        """(label, lhs - rhs) for every defining relation."""
        return [(r.label or f"rule{i}", r.relation()) for i, r in enumerate(self.rules.rules)]

    def relation_text(self) -> list[str]:
        return [r.to_text() for r in self.rules.rules]

    def to_text(self) -> str:
        lines = [f"name: {self.name}", "alphabet: " + " ".join(self.alphabet.names)]
        pairs = self.alphabet.inverse_pairs()
        if pairs:
            lines.append("inverses: " + ", ".join(f"{g} {h}" for g, h in pairs))
        lines.append("precedence: " + " < ".join(self.rules.precedence))
        lines.extend(self.relation_text())
        return "\n".join(lines) + "\n"


def parse_presentation(text: str, name: str = "") -> Presentation:
    names = None
    inverses = []
    precedence = None
    rule_lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" in line:
            rule_lines.append((lineno, line))
            continue
        key, sep, val = line.partition(":")
        if not sep:
            raise ParseError(f"line {lineno}: expected 'key: value' or 'LHS -> RHS'")
        key = key.strip()
        if key == "name":
            name = val.strip()
        elif key == "alphabet":
            names = val.split()
        elif key == "inverses":
            for pair in val.split(","):
                g, h = pair.split()
                inverses.append((g, h))
        elif key == "precedence":
            precedence = [p.strip() for p in val.split("<")]
        else:
            raise ParseError(f"line {lineno}: unknown header {key!r}")
    if names is None:
        raise ParseError("presentation has no alphabet line")
    alphabet = Alphabet(names, inverses)
    rules = []
    for lineno, line in rule_lines:
        label = ""
        if line.startswith("["):
            label, _, line = line[1:].partition("]")
        lhs_text, _, rhs_text = line.partition("->")
        lhs = alphabet.parse(lhs_text)
        if len(lhs.terms) != 1:
            raise ParseError(f"line {lineno}: the left side must be a single word")
        (word, coeff), = lhs.terms.items()
        if not coeff.is_one():
            raise ParseError(f"line {lineno}: the left side must have coefficient 1")
        rules.append(RewriteRule(word, alphabet.parse(rhs_text), label.strip()))
    return Presentation(name, alphabet, RuleSet(alphabet, rules, precedence), text)


def load_presentation(name_or_path) -> Presentation:
    """Load a bundled presentation by name, or a presentation file by path."""
    path = Path(str(name_or_path))
    if path.suffix == ".pres" and path.exists():
        return parse_presentation(path.read_text(), path.stem)
    text = resources.files("qonsager.presentations").joinpath(f"{name_or_path}.pres").read_text()
    return parse_presentation(text, str(name_or_path))


BUNDLED = ("uq_sl2", "uq_sl2hat", "augmented_qoa", "q_onsager", "onsager")
