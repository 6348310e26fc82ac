"""Exact coefficients: fractions P/D with D an integer polynomial in q only.

The numerator P is an integer Laurent polynomial in ``q`` and the spectral
parameters ``v, v1, ..., v8`` and an ordinary polynomial in ``k+, k-, e+, e-``.
Monomials are packed into a single Python int (one signed base-2**20 digit
per variable) so that multiplying monomials is integer addition and the
integer order on keys is a group-compatible monomial order.
"""

from __future__ import annotations

import heapq

import random
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping

from .errors import (
    DenominatorOutOfDomain,
    DivisionByZero,
    PoleAtPoint,
    UnboundVariable,
)

SPECTRAL = ("v",) + tuple(f"v{i}" for i in range(1, 9))
VARIABLES = ("q",) + SPECTRAL + ("k+", "k-", "e+", "e-")
LAURENT = frozenset(("q",) + SPECTRAL)
VAR_INDEX = {name: i for i, name in enumerate(VARIABLES)}
_POLY_IDX = tuple(i for i, name in enumerate(VARIABLES) if name not in LAURENT)
NVARS = len(VARIABLES)

_BITS = 20
_BASE = 1 << _BITS
_HALF = _BASE >> 1


def _var_key(name: str, exp: int = 1) -> int:
    return exp << (_BITS * VAR_INDEX[name])


@lru_cache(maxsize=1 << 16)
def decode(key: int) -> tuple[int, ...]:
    """Exponent vector of a packed monomial key."""
    out = []
    for _ in range(NVARS):
        e = key % _BASE
        if e >= _HALF:
            e -= _BASE
        out.append(e)
        key = (key - e) >> _BITS
    return tuple(out)


def encode(exps: Iterable[int]) -> int:
    key = 0
    for i, e in enumerate(exps):
        if e:
            key += e << (_BITS * i)
    return key


def _split_q(key: int) -> tuple[int, int]:
    e = key % _BASE
    if e >= _HALF:
        e -= _BASE
    return e, key - e


# -- sparse multivariate polynomials: dict key -> nonzero int ---------------


def padd(a: dict, b: dict) -> dict:
    if len(a) < len(b):
        a, b = b, a
    r = dict(a)
    for k, c in b.items():
        s = r.get(k, 0) + c
        if s:
            r[k] = s
        else:
            del r[k]
    return r


def psub(a: dict, b: dict) -> dict:
    r = dict(a)
    for k, c in b.items():
        s = r.get(k, 0) - c
        if s:
            r[k] = s
        else:
            del r[k]
    return r


def pmul(a: dict, b: dict) -> dict:
    if len(a) < len(b):
        a, b = b, a
    r: dict = {}
    get = r.get
    for kb, cb in b.items():
        for ka, ca in a.items():
            k = ka + kb
            r[k] = get(k, 0) + ca * cb
    return {k: c for k, c in r.items() if c}


def pscale(a: dict, c: int) -> dict:
    if not c:
        return {}
    return {k: v * c for k, v in a.items()}


def pshift(a: dict, key: int) -> dict:
    return {k + key: c for k, c in a.items()}


def pdegree(a: dict) -> int:
    """Total degree counting every exponent's absolute value."""
    return max((sum(abs(e) for e in decode(k)) for k in a), default=-1)


def pdivexact(a: dict, b: dict) -> dict | None:
    """Return a/b if b divides a exactly in the Laurent ring, else None."""
    if not b:
        raise DivisionByZero("polynomial division by zero")
    if not a:
        return {}
    if len(b) == 1:
        (kb, cb), = b.items()
        out = {}
        for k, c in a.items():
            qt, rm = divmod(c, cb)
            if rm:
                return None
            out[k - kb] = qt
        if any(decode(k)[i] < 0 for k in out for i in _POLY_IDX):
            return None
        return out
    lead_b = max(b)
    low_b = min(b)
    lc_b = b[lead_b]
    floor = min(a) - low_b
    # Newton polytope of a product is the Minkowski sum: bound every exponent
    ea = [decode(k) for k in a]
    eb = [decode(k) for k in b]
    lo = [min(col) - min(colb) for col, colb in zip(zip(*ea), zip(*eb))]
    for i in _POLY_IDX:
        lo[i] = max(lo[i], 0)
    hi = [max(col) - max(colb) for col, colb in zip(zip(*ea), zip(*eb))]
    if any(x > y for x, y in zip(lo, hi)):
        return None
    r = dict(a)
    heap = [-k for k in r]
    heapq.heapify(heap)
    quo: dict = {}
    while heap:
        lead = -heapq.heappop(heap)
        c0 = r.pop(lead, 0)
        if not c0:
            continue
        while heap and -heap[0] == lead:
            heapq.heappop(heap)
        t = lead - lead_b
        if t < floor or any(e < x or e > y for e, x, y in zip(decode(t), lo, hi)):
            return None
        qt, rm = divmod(c0, lc_b)
        if rm:
            return None
        quo[t] = qt
        for k, c in b.items():
            if k == lead_b:
                continue
            kk = k + t
            old = r.get(kk, 0)
            s = old - qt * c
            if s:
                if not old:
                    heapq.heappush(heap, -kk)
                r[kk] = s
            else:
                r.pop(kk, None)
    return quo


def pcontent(a: dict) -> int:
    g = 0
    for c in a.values():
        g = gcd(g, c)
        if g == 1:
            break
    return g


# -- univariate integer polynomials in q: tuple of ascending coefficients ---


def _ustrip(a: list) -> tuple:
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def _ucontent(a) -> int:
    g = 0
    for c in a:
        g = gcd(g, c)
        if g == 1:
            break
    return g


def _uprim(a) -> tuple:
    c = _ucontent(a)
    if c in (0, 1):
        return tuple(a)
    return tuple(x // c for x in a)


def _uprem(a: tuple, b: tuple) -> tuple:
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while r and len(r) - 1 >= db:
        d = len(r) - 1 - db
        lr = r[-1]
        r = [x * lb for x in r]
        for i, c in enumerate(b):
            r[i + d] -= lr * c
        r = list(_ustrip(r))
    return tuple(r)


def ugcd(a: tuple, b: tuple) -> tuple:
    """gcd in Z[q], content included, leading coefficient positive."""
    if not a:
        a, b = b, a
    if not b:
        g = _uprim(a) if a else ()
        c = _ucontent(a)
        g = tuple(x * c for x in g)
        return g if not g or g[-1] > 0 else tuple(-x for x in g)
    c = gcd(_ucontent(a), _ucontent(b))
    a, b = _uprim(a), _uprim(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _uprem(a, b)
        a, b = b, (_uprim(r) if r else ())
    g = _uprim(a)
    if g[-1] < 0:
        g = tuple(-x for x in g)
    return tuple(x * c for x in g)


def umul(a: tuple, b: tuple) -> tuple:
    if not a or not b:
        return ()
    r = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                r[i + j] += x * y
    return _ustrip(r)


def udivexact(a: tuple, b: tuple) -> tuple:
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    out = [0] * max(len(a) - db, 0)
    while r and len(r) - 1 >= db:
        d = len(r) - 1 - db
        qt, rm = divmod(r[-1], lb)
        if rm:
            raise ArithmeticError("inexact univariate division")
        out[d] = qt
        for i, c in enumerate(b):
            r[i + d] -= qt * c
        r = list(_ustrip(r))
    if r:
        raise ArithmeticError("inexact univariate division")
    return _ustrip(out)


def _q_slices(num: dict) -> dict:
    """Group a numerator by its non-q part: rest -> {q exponent: coeff}."""
    slices: dict = {}
    for k, c in num.items():
        e, rest = _split_q(k)
        slices.setdefault(rest, {})[e] = c
    return slices


def _slice_tuple(sl: dict) -> tuple[int, tuple]:
    lo = min(sl)
    hi = max(sl)
    return lo, tuple(sl.get(e, 0) for e in range(lo, hi + 1))


_ONE_DEN = (1,)


class Scalar:
    """Immutable exact element of Q(q, v, ...)[k+, k-, e+, e-] with q-only denominators."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, value=0):
        if isinstance(value, Scalar):
            self.num, self.den = value.num, value.den
        elif isinstance(value, int):
            self.num = {0: value} if value else {}
            self.den = _ONE_DEN
        elif isinstance(value, Fraction):
            self.num = {0: value.numerator} if value else {}
            self.den = (value.denominator,) if value else _ONE_DEN
        elif isinstance(value, str):
            s = Scalar.parse(value)
            self.num, self.den = s.num, s.den
        else:
            raise TypeError(f"cannot build a Scalar from {type(value).__name__}")
        self._hash = None

    @classmethod
    def _raw(cls, num: dict, den: tuple = _ONE_DEN) -> "Scalar":
        s = object.__new__(cls)
        s.num = num
        s.den = den
        s._hash = None
        return s

    @classmethod
    def _canonical(cls, num: dict, den: tuple) -> "Scalar":
        if not num:
            return ZERO
        if den == _ONE_DEN:
            return cls._raw(num)
        if den[0] == 0:
            s = 0
            while den[s] == 0:
                s += 1
            den = den[s:]
            num = pshift(num, -s)
        if len(den) == 1:
            c = den[0]
            g = gcd(c, pcontent(num))
            if c < 0:
                g = -g
            if g != 1:
                num = {k: v // g for k, v in num.items()}
                c //= g
            return cls._raw(num, (c,))
        g = den
        for sl in _q_slices(num).values():
            g = ugcd(g, _slice_tuple(sl)[1])
            if g == _ONE_DEN:
                break
        if g != _ONE_DEN:
            den = udivexact(den, g)
            new = {}
            for rest, sl in _q_slices(num).items():
                lo, t = _slice_tuple(sl)
                for i, c in enumerate(udivexact(t, g)):
                    if c:
                        new[rest + lo + i] = c
            num = new
        if den[-1] < 0:
            den = tuple(-x for x in den)
            num = {k: -v for k, v in num.items()}
        return cls._raw(num, den)

    # -- constructors ----------------------------------------------------

    @classmethod
    def var(cls, name: str, exp: int = 1) -> "Scalar":
        if name not in VAR_INDEX:
            raise UnboundVariable(f"unknown parameter {name!r}")
        if exp < 0 and name not in LAURENT:
            raise DenominatorOutOfDomain(f"{name} may not carry a negative power")
        return cls._raw({_var_key(name, exp): 1})

    @classmethod
    def from_poly(cls, num: dict, den: tuple = _ONE_DEN) -> "Scalar":
        return cls._canonical(dict(num), tuple(den))

    @classmethod
    def parse(cls, text: str) -> "Scalar":
        from .parsing import parse_scalar

        return parse_scalar(text)

    # -- predicates ------------------------------------------------------

    def __bool__(self):
        return bool(self.num)

    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self.den == _ONE_DEN and self.num == {0: 1}

    def is_constant(self) -> bool:
        return not self.num or (len(self.num) == 1 and 0 in self.num)

    def is_q_only(self) -> bool:
        return all(_split_q(k)[1] == 0 for k in self.num)

    def is_laurent_monomial(self) -> bool:
        if len(self.num) != 1 or self.den != _ONE_DEN:
            return False
        (k, c), = self.num.items()
        if c not in (1, -1):
            return False
        return all(e == 0 or VARIABLES[i] in LAURENT for i, e in enumerate(decode(k)))

    def variables(self) -> set[str]:
        used = set()
        for k in self.num:
            for i, e in enumerate(decode(k)):
                if e:
                    used.add(VARIABLES[i])
        if len(self.den) > 1:
            used.add("q")
        return used

    def to_fraction(self) -> Fraction:
        if not self.num:
            return Fraction(0)
        if not self.is_constant() or len(self.den) != 1:
            raise ValueError(f"{self} is not a rational constant")
        return Fraction(self.num[0], self.den[0])

    def term_count(self) -> int:
        return len(self.num) + len(self.den)

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            num = padd(self.num, other.num)
            if self.den == _ONE_DEN:
                return Scalar._raw(num) if num else ZERO
            return Scalar._canonical(num, self.den)
        g = ugcd(self.den, other.den)
        da = udivexact(self.den, g)
        db = udivexact(other.den, g)
        num = padd(pmul(self.num, _upoly_to_dict(db)), pmul(other.num, _upoly_to_dict(da)))
        return Scalar._canonical(num, umul(da, other.den))

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw({k: -c for k, c in self.num.items()}, self.den)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not self.num or not other.num:
            return ZERO
        num = pmul(self.num, other.num)
        if self.den == _ONE_DEN and other.den == _ONE_DEN:
            return Scalar._raw(num)
        return Scalar._canonical(num, umul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not other.num:
            raise DivisionByZero("division by the zero Scalar")
        if not other.is_q_only():
            raise DenominatorOutOfDomain(f"cannot divide by {other}: denominator must involve q only")
        lo = min(other.num)
        hi = max(other.num)
        p = tuple(other.num.get(e, 0) for e in range(lo, hi + 1))
        num = pmul(self.num, _upoly_to_dict(other.den))
        return Scalar._canonical(pshift(num, -lo), umul(self.den, p))

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def inverse(self) -> "Scalar":
        if self.is_laurent_monomial():
            (k, c), = self.num.items()
            return Scalar._raw({-k: c})
        return ONE / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- comparison ------------------------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return False
        return self.den == other.den and self.num == other.num

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self.num.items()), self.den))
        return self._hash

    # -- evaluation ------------------------------------------------------

    def specialize(self, bindings: Mapping[str, object]) -> "Scalar":
        """Substitute rational values for some variables."""
        vals = {VAR_INDEX[n]: Fraction(x) for n, x in bindings.items() if n in VAR_INDEX}
        if not vals:
            return self
        if 0 in vals and vals[0] == 0:
            raise PoleAtPoint("q = 0 is not admissible")
        for i, x in vals.items():
            if x == 0 and VARIABLES[i] in LAURENT:
                raise PoleAtPoint(f"{VARIABLES[i]} = 0 is not admissible")
        acc: dict = {}
        for k, c in self.num.items():
            exps = list(decode(k))
            coeff = Fraction(c)
            for i, x in vals.items():
                if exps[i]:
                    coeff *= x ** exps[i]
                    exps[i] = 0
            kk = encode(exps)
            acc[kk] = acc.get(kk, 0) + coeff
        lcm = 1
        for c in acc.values():
            lcm = lcm * c.denominator // gcd(lcm, c.denominator)
        num = {k: int(c * lcm) for k, c in acc.items() if c}
        if 0 in vals:
            d = sum(Fraction(c) * vals[0] ** i for i, c in enumerate(self.den))
            if d == 0:
                raise PoleAtPoint(f"denominator of {self} vanishes at q = {vals[0]}")
            return Scalar(Fraction(1, lcm)) * Scalar._canonical(num, _ONE_DEN) / Scalar(d)
        return Scalar._canonical(num, tuple(x * lcm for x in self.den))

    def substitute(self, name: str, value: "Scalar") -> "Scalar":
        """Replace a variable by another Scalar (negative powers need an invertible value)."""
        idx = VAR_INDEX[name]
        value = scalar(value)
        out = ZERO
        powers: dict = {}
        for k, c in self.num.items():
            exps = list(decode(k))
            e = exps[idx]
            if not e:
                out = out + Scalar._raw({k: c})
                continue
            exps[idx] = 0
            if e not in powers:
                powers[e] = value**e
            out = out + Scalar._raw({encode(exps): c}) * powers[e]
        if self.den != _ONE_DEN:
            out = out / Scalar._raw(_upoly_to_dict(self.den))
        return out

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        missing = self.variables() - set(point)
        if missing:
            raise UnboundVariable(f"unbound variables {sorted(missing)}")
        return self.specialize({n: point[n] for n in self.variables()}).to_fraction()

    # -- text --------------------------------------------------------------

    def __str__(self):
        num = format_poly(self.num)
        if self.den == _ONE_DEN:
            return num
        den = format_poly(_upoly_to_dict(self.den))
        if len(self.num) > 1:
            num = f"({num})"
        if len(self.den) > 1 or self.den[0] < 0:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"Scalar({str(self)!r})"

    def is_compound(self) -> bool:
        """True when the text form needs parentheses inside a product."""
        return len(self.num) > 1 or self.den != _ONE_DEN


def _upoly_to_dict(u: tuple) -> dict:
    return {i: c for i, c in enumerate(u) if c}


def _sort_key(key: int):
    return decode(key)


def format_monomial(key: int) -> str:
    parts = []
    for name, e in zip(VARIABLES, decode(key)):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_poly(num: dict) -> str:
    if not num:
        return "0"
    out = []
    for k in sorted(num, key=_sort_key):
        c = num[k]
        mono = format_monomial(k)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not out:
            out.append(body if c > 0 else f"-{body}")
        else:
            out.append(f" + {body}" if c > 0 else f" - {body}")
    return "".join(out)


def _coerce(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Scalar(x)
    return NotImplemented


def scalar(x) -> Scalar:
    """Coerce ints, Fractions, strings and Scalars to a Scalar."""
    if isinstance(x, Scalar):
        return x
    return Scalar(x)


ZERO = Scalar._raw({})
ONE = Scalar._raw({0: 1})
q = Scalar.var("q")
q_inv = Scalar.var("q", -1)


def q_integer(n: int) -> Scalar:
    """The q-integer [n] = (q^n - q^-n)/(q - q^-1)."""
    return _q_integer(n)


@lru_cache(maxsize=None)
def _q_integer(n: int) -> Scalar:
    return (q**n - q**-n) / (q - q_inv)


def symbols(*names: str) -> tuple[Scalar, ...]:
    return tuple(Scalar.var(n) for n in names)


class EvaluationPoint(dict):
    """Rational values for parameters; q is kept away from 0 and roots of unity."""

    def __init__(self, values: Mapping[str, object] = (), **kw):
        super().__init__()
        for name, x in dict(values, **kw).items():
            if name not in VAR_INDEX:
                raise UnboundVariable(f"unknown parameter {name!r}")
            self[name] = Fraction(x)
        if "q" in self and self["q"] in (0, 1, -1):
            raise PoleAtPoint(f"q = {self['q']} is not admissible")
        for name in LAURENT & set(self):
            if self[name] == 0:
                raise PoleAtPoint(f"{name} = 0 is not admissible")


def random_point(rng: random.Random, names: Iterable[str] = VARIABLES, allow_q_pole=False) -> EvaluationPoint:
    """Draw a random admissible rational point for the given parameters."""
    vals = {}
    for name in names:
        while True:
            x = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
            if x == 0:
                continue
            if name == "q" and not allow_q_pole and abs(x) == 1:
                continue
            break
        vals[name] = x
    return EvaluationPoint(vals)
