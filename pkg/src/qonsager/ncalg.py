"""Free noncommutative algebras over Scalar, brackets and homomorphisms."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .errors import AlphabetMismatch, UnassignedLetter, ZeroDeformation
from .matrix import Matrix
from .scalars import ONE, VAR_INDEX, Scalar, scalar

Word = tuple  # tuple of letter indices


class Alphabet:
    """Ordered generator names; optional pairs of formal inverses."""

    def __init__(self, names: Iterable[str], inverses: Iterable[tuple[str, str]] = ()):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate generator names in {self.names}")
        for n in self.names:
            if n in VAR_INDEX:
                raise ValueError(f"{n!r} is reserved for a scalar parameter")
            if not n.replace("_", "a").isalnum() or n[0].isdigit():
                raise ValueError(f"bad generator name {n!r}")
        self.index = {n: i for i, n in enumerate(self.names)}
        self.inverses: dict[str, str] = {}
        for g, h in inverses:
            if g not in self.index or h not in self.index:
                raise ValueError(f"inverse pair ({g}, {h}) uses undeclared letters")
            if g in self.inverses or h in self.inverses:
                raise ValueError(f"letter in ({g}, {h}) already has an inverse")
            self.inverses[g] = h
            self.inverses[h] = g

    def __contains__(self, name):
        return name in self.index

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.names == other.names and self.inverses == other.inverses

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"Alphabet({list(self.names)})"

    def inverse_pairs(self) -> list[tuple[str, str]]:
        seen, out = set(), []
        for g in self.names:
            h = self.inverses.get(g)
            if h and g not in seen:
                out.append((g, h))
                seen.update((g, h))
        return out

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, {(): ONE})

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def letter(self, name: str) -> "AlgebraElement":
        return AlgebraElement(self, {(self.index[name],): ONE})

    def letters(self, *names: str):
        return tuple(self.letter(n) for n in (names or self.names))

    def word(self, names: Iterable[str]) -> Word:
        return tuple(self.index[n] for n in names)

    def word_names(self, word: Word) -> tuple[str, ...]:
        return tuple(self.names[i] for i in word)

    def parse(self, text: str) -> "AlgebraElement":
        from .parsing import parse_expression

        return parse_expression(text, self)


def word_key(word: Word):
    """Graded lexicographic order on words of letter indices."""
    return (len(word), word)


class AlgebraElement:
    """Finite Scalar-linear combination of words; zero coefficients are never stored."""

    __slots__ = ("alphabet", "terms")

    def __init__(self, alphabet: Alphabet, terms: Mapping[Word, object] | None = None):
        self.alphabet = alphabet
        self.terms = {}
        for w, c in (terms or {}).items():
            c = scalar(c)
            if c.num:
                self.terms[tuple(w)] = c

    @classmethod
    def _wrap(cls, alphabet, terms):
        x = object.__new__(cls)
        x.alphabet = alphabet
        x.terms = terms
        return x

    def _same(self, other):
        if self.alphabet is not other.alphabet and self.alphabet != other.alphabet:
            raise AlphabetMismatch(f"{self.alphabet} vs {other.alphabet}")

    def __add__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            other = self.alphabet.one() * other
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._same(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            s = terms[w] + c if w in terms else c
            if s.num:
                terms[w] = s
            else:
                terms.pop(w, None)
        return AlgebraElement._wrap(self.alphabet, terms)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement._wrap(self.alphabet, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            other = self.alphabet.one() * other
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "AlgebraElement":
        c = scalar(c)
        if not c.num:
            return AlgebraElement._wrap(self.alphabet, {})
        if c.is_one():
            return self
        return AlgebraElement._wrap(self.alphabet, {w: c * x for w, x in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            return self.scale(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._same(other)
        terms: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                c = c1 * c2
                if w in terms:
                    c = terms[w] + c
                terms[w] = c
        return AlgebraElement._wrap(self.alphabet, {w: c for w, c in terms.items() if c.num})

    def __rmul__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("free algebra elements have no negative powers")
        out = self.alphabet.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            other = self.alphabet.one() * other
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.alphabet == other.alphabet and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, word) -> Scalar:
        if word and isinstance(word[0], str):
            word = self.alphabet.word(word)
        return self.terms.get(tuple(word), Scalar(0))

    def support(self) -> list[Word]:
        return sorted(self.terms, key=word_key)

    def items(self):
        for w in self.support():
            yield w, self.terms[w]

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def map_coefficients(self, fn) -> "AlgebraElement":
        return AlgebraElement(self.alphabet, {w: fn(c) for w, c in self.terms.items()})

    def specialize(self, bindings) -> "AlgebraElement":
        return self.map_coefficients(lambda c: c.specialize(bindings))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.items():
            body = "*".join(self.alphabet.word_names(w))
            if not body:
                text = str(c)
                if c.is_compound():
                    text = f"({text})"
            elif c.is_one():
                text = body
            elif (-c).is_one():
                text = f"-{body}"
            elif c.is_compound():
                text = f"({c})*{body}"
            else:
                text = f"{c}*{body}"
            if not parts:
                parts.append(text)
            elif text.startswith("-"):
                parts.append(f" - {text[1:]}")
            else:
                parts.append(f" + {text}")
        return "".join(parts)

    def __repr__(self):
        return f"AlgebraElement({str(self)!r})"


def _is_carrier(x):
    return isinstance(x, (AlgebraElement, Matrix))


def bracket(x, y):
    """Commutator xy - yx."""
    if isinstance(x, AlgebraElement) and isinstance(y, AlgebraElement):
        x._same(y)
    if hasattr(x, "bracket") and not _is_carrier(x):
        return x.bracket(y)
    return x * y - y * x


def q_bracket(x, y, lam):
    """Deformed commutator lam*x*y - lam^-1*y*x."""
    lam = scalar(lam)
    if not lam.num:
        raise ZeroDeformation("the deformation parameter must be invertible")
    if isinstance(x, AlgebraElement) and isinstance(y, AlgebraElement):
        x._same(y)
    return (x * y) * lam - (y * x) * lam.inverse()


def nested_dg_lhs(x, y):
    """[x, [x, [x, y]_q]_{q^-1}], outermost bracket an ordinary commutator."""
    qq = Scalar.var("q")
    return bracket(x, q_bracket(x, q_bracket(x, y, qq), qq.inverse()))


class Homomorphism:
    """Letter assignment extended multiplicatively and Scalar-linearly.

    Targets may be AlgebraElements, Matrices, or any ring-like values given
    together with ``one``.
    """

    def __init__(self, source: Alphabet, images: Mapping[str, object], one=None):
        self.source = source
        self.images = {}
        for name, img in images.items():
            if name not in source:
                raise UnassignedLetter(f"{name!r} is not a letter of {source}")
            self.images[name] = img
        if one is None:
            one = _infer_one(self.images.values())
        self.one = one
        if isinstance(one, Matrix):
            for g, h in source.inverse_pairs():
                if g in self.images and h in self.images:
                    a, b = self.images[g], self.images[h]
                    if a * b != one or b * a != one:
                        raise ValueError(f"images of {g} and {h} are not mutually inverse")

    def __call__(self, x):
        return apply_hom(self, x)

    def image(self, name: str):
        try:
            return self.images[name]
        except KeyError:
            raise UnassignedLetter(f"letter {name!r} has no image") from None


def _infer_one(images):
    for img in images:
        if isinstance(img, Matrix):
            return Matrix.identity(img.nrows)
        if isinstance(img, AlgebraElement):
            return img.alphabet.one()
    return None


def apply_hom(h: Homomorphism, x):
    """Push an AlgebraElement through a homomorphism."""
    if isinstance(x, (Scalar, int, Fraction)):
        x = h.source.one() * x
    if x.alphabet != h.source:
        raise AlphabetMismatch(f"{x.alphabet} is not the source {h.source}")
    names = h.source.names
    cache: dict = {}
    total = None
    for w, c in x.items():
        if not w:
            if h.one is None:
                raise TypeError("target has no unit")
            prod = h.one
        else:
            prod = None
            for n in range(len(w), 0, -1):
                if w[:n] in cache:
                    prod = cache[w[:n]]
                    break
            else:
                n = 1
                prod = h.image(names[w[0]])
                cache[w[:1]] = prod
            for i in range(n, len(w)):
                prod = prod * h.image(names[w[i]])
                cache[w[: i + 1]] = prod
        term = prod * c if not c.is_one() else prod
        total = term if total is None else total + term
    if total is None:
        if h.one is not None:
            return h.one * 0
        return 0
    return total


def identity_hom(alphabet: Alphabet) -> Homomorphism:
    return Homomorphism(alphabet, {n: alphabet.letter(n) for n in alphabet})
