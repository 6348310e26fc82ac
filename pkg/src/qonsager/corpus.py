"""Relation corpus for cross-checking the rewrite engine against matrix models."""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

from .ncalg import AlgebraElement
from .rewrite import BUNDLED, DEFAULT_FUEL, Certify, Status, normal_form
from .scalars import q
from .uqsl2 import Module, bundled_modules, evaluation_module, irrep, presentation

_COEFFS = (1, -1, 2, q, q**-1, q + 1)


@lru_cache(maxsize=None)
def oracle_modules(name: str) -> tuple[Module, ...]:
    """Symbolic matrix models of a bundled presentation."""
    from .coideal import augmented_module, qoa_module
    from .onsager import classical_onsager_module

    if name == "uq_sl2":
        return tuple(irrep(n) for n in (1, 2, 3))
    if name == "uq_sl2hat":
        return tuple(bundled_modules())
    if name == "q_onsager":
        return tuple(qoa_module(evaluation_module(n)) for n in (1, 2))
    if name == "augmented_qoa":
        return tuple(augmented_module(evaluation_module(n)) for n in (1, 2))
    if name == "onsager":
        return tuple(classical_onsager_module(n) for n in (1, 2, 3))
    raise KeyError(name)


def random_word(alphabet, rng: random.Random, length: int) -> AlgebraElement:
    word = alphabet.word(rng.choice(alphabet.names) for _ in range(length))
    return AlgebraElement(alphabet, {word: 1})


def random_consequence(name: str, rng: random.Random, degree: int = 3) -> tuple[str, AlgebraElement]:
    """c * u * rel * w with len(u) + len(w) <= degree, rel a defining relation."""
    pres = presentation(name)
    label, rel = rng.choice(pres.relations())
    total = rng.randint(0, degree)
    left = rng.randint(0, total)
    u = random_word(pres.alphabet, rng, left)
    w = random_word(pres.alphabet, rng, total - left)
    c = rng.choice(_COEFFS)
    x = (u * rel * w) * c
    text = f"({c})*{u}*[{label}]*{w}"
    return text, x


@dataclass
class CorpusEntry:
    presentation: str
    label: str
    element: AlgebraElement
    certified: Certify
    oracle_zero: bool
    reduced: AlgebraElement  # normal form reached by the rewrite engine

    @property
    def false_certification(self) -> bool:
        return self.certified is Certify.ZERO and not self.oracle_zero


def oracle_zero(name: str, x: AlgebraElement) -> bool:
    return all(m.represent(x).is_zero() for m in oracle_modules(name))


def check_entry(name: str, label: str, x: AlgebraElement, fuel: int = DEFAULT_FUEL) -> CorpusEntry:
    nf = normal_form(x, presentation(name).rules, fuel)
    zero = nf.status is Status.CONVERGED and nf.element.is_zero()
    return CorpusEntry(name, label, x, Certify.ZERO if zero else Certify.INCONCLUSIVE, oracle_zero(name, x), nf.element)


def corpus(random_count: int = 100, seed: int = 0, degree: int = 3):
    """Every defining relation of every bundled presentation, then random consequences."""
    items = []
    for name in BUNDLED:
        for label, rel in presentation(name).relations():
            items.append((name, label, rel))
    rng = random.Random(seed)
    for _ in range(random_count):
        name = rng.choice(BUNDLED)
        label, x = random_consequence(name, rng, degree)
        items.append((name, label, x))
    return items


def run_corpus(random_count: int = 100, seed: int = 0, fuel: int = DEFAULT_FUEL) -> list[CorpusEntry]:
    return [check_entry(name, label, x, fuel) for name, label, x in corpus(random_count, seed)]

