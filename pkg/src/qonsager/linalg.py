"""Fraction-free (Bareiss) Gauss-Jordan elimination over Z or Z[params].

Rows of Scalars are first cleared of their q-only denominators; the
elimination itself stays in the integer polynomial ring, where every
Bareiss division is exact. After elimination the matrix is d * RREF with d
the last pivot, so kernels and particular solutions are read off directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .errors import DenominatorOutOfDomain, ResourceBudgetExceeded
from .scalars import _split_q, ONE, Scalar, pcontent, pdegree, pdivexact, pmul, psub, scalar, udivexact, ugcd, umul

DEFAULT_TERM_BUDGET = 50_000


class _IntRing:
    zero = 0
    one = 1

    @staticmethod
    def is_zero(a):
        return a == 0

    @staticmethod
    def combine(piv, a, f, b, prev):
        # (piv*a - f*b) / prev, exact
        return (piv * a - f * b) // prev

    @staticmethod
    def size(a):
        return (abs(a).bit_length(), 0)


class _PolyRing:
    zero: dict = {}
    one = {0: 1}

    def __init__(self, budget):
        self.budget = budget

    @staticmethod
    def is_zero(a):
        return not a

    def combine(self, piv, a, f, b, prev):
        if f:
            num = psub(pmul(piv, a), pmul(f, b)) if a else {k: -c for k, c in pmul(f, b).items()}
        else:
            num = pmul(piv, a) if a else {}
        if prev == _PolyRing.one or not num:
            out = num
        else:
            out = pdivexact(num, prev)
            if out is None:
                raise ArithmeticError("Bareiss division was not exact")
        if len(out) > self.budget:
            raise ResourceBudgetExceeded(f"intermediate entry with {len(out)} terms exceeds the budget {self.budget}")
        return out

    @staticmethod
    def size(a):
        return (pdegree(a), len(a))


@dataclass
class Echelon:
    rows: list  # d * RREF (ring elements)
    pivots: list  # pivot column per leading row
    det: object  # last pivot d (ring element); 1 when rank 0
    ncols: int
    ring: str  # "int" or "poly"

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def free(self) -> list:
        ps = set(self.pivots)
        return [c for c in range(self.ncols) if c not in ps]


def _is_rational(x) -> bool:
    if isinstance(x, (int, Fraction)):
        return True
    return isinstance(x, Scalar) and x.is_constant() and len(x.den) == 1


def _rational_rows(rows):
    out = []
    for row in rows:
        fr = [x.to_fraction() if isinstance(x, Scalar) else Fraction(x) for x in row]
        m = 1
        for x in fr:
            m = lcm(m, x.denominator)
        out.append([int(x * m) for x in fr])
    return out


def _poly_rows(rows):
    out = []
    for row in rows:
        row = [scalar(x) for x in row]
        den = (1,)
        for x in row:
            if x.den != (1,):
                g = ugcd(den, x.den)
                den = umul(den, udivexact(x.den, g))
        new = []
        for x in row:
            if not x.num:
                new.append({})
            elif den == (1,):
                new.append(x.num)
            else:
                factor = udivexact(den, x.den)
                new.append(pmul(x.num, {i: c for i, c in enumerate(factor) if c}))
        out.append(new)
    return out


def to_ring_rows(rows):
    """Choose the integer backend when every entry is rational."""
    if all(_is_rational(x) for row in rows for x in row):
        return _rational_rows(rows), "int"
    return _poly_rows(rows), "poly"


def bareiss(rows, pivot_limit=None, budget=DEFAULT_TERM_BUDGET) -> Echelon:
    """Fraction-free Gauss-Jordan on a list of rows.

    Pivots are taken in the leftmost column that has a nonzero entry; among
    candidate rows the smallest entry (degree, then term count) wins, ties
    by row index. Only columns below ``pivot_limit`` may hold pivots.
    """
    M, kind = to_ring_rows(rows)
    R = _IntRing() if kind == "int" else _PolyRing(budget)
    nrows = len(M)
    ncols = len(M[0]) if M else 0
    limit = ncols if pivot_limit is None else pivot_limit
    prev = R.one
    pivots = []
    r = 0
    for col in range(limit):
        if r >= nrows:
            break
        best = None
        for i in range(r, nrows):
            a = M[i][col]
            if not R.is_zero(a):
                key = (R.size(a), i)
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            continue
        p = best[1]
        if p != r:
            M[p], M[r] = M[r], M[p]
        prow = M[r]
        piv = prow[col]
        for i in range(nrows):
            if i == r:
                continue
            row = M[i]
            f = row[col]
            row[:] = [R.combine(piv, row[j], f, prow[j], prev) for j in range(ncols)]
        prev = piv
        pivots.append(col)
        r += 1
    return Echelon(M, pivots, prev, ncols, kind)


def _ratio(n, d, kind):
    """n/d as a Fraction or Scalar; None if the quotient leaves the Scalar domain."""
    if kind == "int":
        return Fraction(n, d)
    if not n:
        return Scalar(0)
    ds = Scalar._raw(dict(d))
    ns = Scalar._canonical(dict(n), (1,))
    if ds.is_q_only():
        return ns / ds
    g = _q_content(d)
    gpoly = {i: c for i, c in enumerate(g) if c}
    if g != (1,):
        d = pdivexact(d, gpoly)
    quo = pdivexact(n, d)
    if quo is None:
        return None
    out = Scalar._canonical(quo, (1,))
    return out if g == (1,) else out / Scalar._raw(gpoly)


def _q_content(p) -> tuple:
    """gcd in Z[q] of the q-coefficient polynomials of p (integer content included)."""
    slices: dict = {}
    for k, c in p.items():
        e, rest = _split_q(k)
        slices.setdefault(rest, {})[e] = c
    g = ()
    for sl in slices.values():
        lo = min(sl)
        u = tuple(sl.get(lo + i, 0) for i in range(max(sl) - lo + 1))
        g = ugcd(g, u) if g else (u if u[-1] > 0 else tuple(-x for x in u))
        if g == (1,):
            break
    return g


def _primitive(vec: list) -> list:
    """Divide a polynomial vector by its integer content and a common Laurent monomial."""
    nz = [v for v in vec if v]
    if not nz:
        return vec
    g = 0
    for v in nz:
        g = gcd(g, pcontent(v))
    lead = next(v for v in vec if v)
    if lead[max(lead)] < 0:
        g = -g
    from .scalars import decode, encode

    lows = None
    for v in nz:
        for k in v:
            e = decode(k)
            lows = list(e) if lows is None else [min(a, b) for a, b in zip(lows, e)]
    shift = encode(lows)
    return [{k - shift: c // g for k, c in v.items()} if v else {} for v in vec]


@dataclass
class KernelVector:
    entries: list  # Scalar or Fraction per column
    normalized: bool  # True when the free coordinate equals 1 (RREF form)


def kernel(rows, ncols=None, budget=DEFAULT_TERM_BUDGET) -> tuple[list[KernelVector], Echelon]:
    """Basis of {x : rows . x = 0}, one vector per free column in column order."""
    if not rows:
        rows = [[0] * (ncols or 0)]
    ech = bareiss(rows, budget=budget)
    n = ech.ncols
    basis = []
    for f in ech.free:
        vals = [None] * n
        ok = True
        for c in range(n):
            vals[c] = 0 if ech.ring == "int" else Scalar(0)
        vals[f] = 1 if ech.ring == "int" else Scalar(1)
        for i, pc in enumerate(ech.pivots):
            x = ech.rows[i][f]
            if (ech.ring == "int" and x == 0) or (ech.ring == "poly" and not x):
                continue
            neg = -x if ech.ring == "int" else {k: -c for k, c in x.items()}
            val = _ratio(neg, ech.det, ech.ring)
            if val is None:
                ok = False
                break
            vals[pc] = val
        if ok:
            if ech.ring == "int":
                vals = [Fraction(v) for v in vals]
            basis.append(KernelVector(vals, True))
            continue
        raw = [{} for _ in range(n)]
        raw[f] = dict(ech.det)
        for i, pc in enumerate(ech.pivots):
            x = ech.rows[i][f]
            raw[pc] = {k: -c for k, c in x.items()}
        raw = _primitive(raw)
        basis.append(KernelVector([Scalar._canonical(v, (1,)) if v else Scalar(0) for v in raw], False))
    return basis, ech


def rank(rows, budget=DEFAULT_TERM_BUDGET) -> int:
    if not rows:
        return 0
    return bareiss(rows, budget=budget).rank


@dataclass
class Solution:
    consistent: bool
    particular: list  # one value per unknown; free unknowns set to zero
    rank: int
    augmented_rank: int
    nullity: int


def solve(rows, rhs, budget=DEFAULT_TERM_BUDGET) -> Solution:
    """Solve rows . c = rhs; the particular solution is read from the reduced echelon form.

    When inconsistent, the returned values solve the pivot rows only.
    Raises DenominatorOutOfDomain if a coefficient needs a non-q denominator.
    """
    n = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    ech = bareiss(aug, pivot_limit=n, budget=budget)
    rk = ech.rank
    zero = (lambda x: x == 0) if ech.ring == "int" else (lambda x: not x)
    inconsistent = any(not zero(ech.rows[i][n]) for i in range(rk, len(ech.rows)))
    sol = [Fraction(0) if ech.ring == "int" else Scalar(0) for _ in range(n)]
    for i, pc in enumerate(ech.pivots):
        val = _ratio(ech.rows[i][n], ech.det, ech.ring)
        if val is None:
            raise DenominatorOutOfDomain("a solution coefficient has a non-q denominator")
        sol[pc] = val
    return Solution(not inconsistent, sol, rk, rk + (1 if inconsistent else 0), n - rk)
