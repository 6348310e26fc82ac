"""Onsager algebra (loop realization, both presentations) and relation checkers.

Every checker returns a VerificationCertificate whose residuals are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .certificates import VerificationCertificate, Verdict
from .errors import CarrierMismatch, MissingIndex
from .matrix import Matrix
from .ncalg import AlgebraElement, bracket, nested_dg_lhs
from .rewrite import DEFAULT_FUEL, Presentation, RuleSet, Status, normal_form
from .scalars import ONE, Scalar, q, scalar
from .uqsl2 import Module, presentation

DG_CONSTANT = 16

_ZERO3 = (Fraction(0),) * 3


def _sl2_bracket(x, y):
    e1, f1, h1 = x
    e2, f2, h2 = y
    return (2 * (h1 * e2 - e1 * h2), -2 * (h1 * f2 - f1 * h2), e1 * f2 - f1 * e2)


class LoopElement:
    """sl2-valued Laurent polynomial: power of t -> (E, F, H) coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for p, c in (terms or {}).items():
            c = tuple(Fraction(x) for x in c)
            if any(c):
                self.terms[int(p)] = c

    @classmethod
    def _wrap(cls, terms):
        x = object.__new__(cls)
        x.terms = {p: c for p, c in terms.items() if any(c)}
        return x

    @classmethod
    def E(cls, power=0):
        return cls({power: (1, 0, 0)})

    @classmethod
    def F(cls, power=0):
        return cls({power: (0, 1, 0)})

    @classmethod
    def H(cls, power=0):
        return cls({power: (0, 0, 1)})

    def __add__(self, other):
        if not isinstance(other, LoopElement):
            return NotImplemented
        out = dict(self.terms)
        for p, c in other.terms.items():
            a = out.get(p, _ZERO3)
            out[p] = tuple(x + y for x, y in zip(a, c))
        return LoopElement._wrap(out)

    def __neg__(self):
        return LoopElement._wrap({p: tuple(-x for x in c) for p, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, LoopElement):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Scalar):
            other = other.to_fraction()
        if isinstance(other, (int, Fraction)):
            return LoopElement._wrap({p: tuple(x * other for x in c) for p, c in self.terms.items()})
        raise CarrierMismatch("loop elements form a Lie algebra; use bracket() instead of products")

    __rmul__ = __mul__

    def bracket(self, other: "LoopElement") -> "LoopElement":
        if not isinstance(other, LoopElement):
            raise CarrierMismatch("cannot bracket a loop element with " + type(other).__name__)
        out: dict = {}
        for a, x in self.terms.items():
            for b, y in other.terms.items():
                z = _sl2_bracket(x, y)
                cur = out.get(a + b, _ZERO3)
                out[a + b] = tuple(s + t for s, t in zip(cur, z))
        return LoopElement._wrap(out)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, LoopElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def to_terms(self):
        return [[p, *(str(x) for x in self.terms[p])] for p in sorted(self.terms)]

    def realize(self, n: int, t) -> Matrix:
        """Matrix on the classical spin-n sl2 module with t specialized (Scalar allowed)."""
        E, F, H = classical_sl2(n)
        t = scalar(t)
        out = Matrix.zeros(n + 1)
        for p, (e, f, h) in self.terms.items():
            tp = t**p
            out = out + (E * e + F * f + H * h) * tp
        return out

    def __repr__(self):
        parts = []
        for p in sorted(self.terms):
            e, f, h = self.terms[p]
            parts.append(f"t^{p}*({e}E + {f}F + {h}H)")
        return " + ".join(parts) or "0"


def classical_sl2(n: int):
    """Integer E, F, H on the (n+1)-dimensional sl2 irrep."""
    d = n + 1
    E = Matrix.from_entries(d, {(m - 1, m): n - m + 1 for m in range(1, d)})
    F = Matrix.from_entries(d, {(m + 1, m): m + 1 for m in range(n)})
    H = Matrix.diag([n - 2 * m for m in range(d)])
    return E, F, H


def loop_A(k: int) -> LoopElement:
    """A_k = 2 t^k E + 2 t^-k F."""
    return LoopElement({k: (2, 0, 0)}) + LoopElement({-k: (0, 2, 0)})


def loop_G(l: int) -> LoopElement:
    """G_l = (t^l - t^-l) H."""
    return LoopElement({l: (0, 0, 1)}) - LoopElement({-l: (0, 0, 1)})


@dataclass
class OnsagerFamily:
    A: dict = field(default_factory=dict)
    G: dict = field(default_factory=dict)

    def get_A(self, k):
        try:
            return self.A[k]
        except KeyError:
            raise MissingIndex(f"A_{k} is not in the family") from None

    def get_G(self, l):
        try:
            return self.G[l]
        except KeyError:
            raise MissingIndex(f"G_{l} is not in the family") from None


def loop_family(window: int) -> OnsagerFamily:
    """Loop realization on |index| <= 2*window, enough for check_second_presentation."""
    r = range(-2 * window, 2 * window + 1)
    return OnsagerFamily({k: loop_A(k) for k in r}, {l: loop_G(l) for l in r})


def _engine(x):
    if isinstance(x, LoopElement):
        return "loop"
    if isinstance(x, Matrix):
        return "matrix"
    if isinstance(x, AlgebraElement):
        return "rewrite"
    raise CarrierMismatch(f"unsupported carrier {type(x).__name__}")


def _same_carrier(*xs):
    kinds = {type(x) for x in xs}
    if len(kinds) != 1:
        raise CarrierMismatch(f"mixed carriers {sorted(k.__name__ for k in kinds)}")
    if isinstance(xs[0], Matrix) and len({x.shape for x in xs}) != 1:
        raise CarrierMismatch("matrices of different shapes")


def _times(x, c):
    return x * c


def check_dolan_grady(A0, A1, c=DG_CONSTANT, bindings=None) -> VerificationCertificate:
    """[A0,[A0,[A0,A1]]] = c[A0,A1] and the mirror with A0, A1 swapped."""
    _same_carrier(A0, A1)
    c = Fraction(c) if not isinstance(c, Scalar) else c
    if isinstance(A0, LoopElement) and isinstance(c, Scalar):
        c = c.to_fraction()
    res = []
    for x, y, lab in ((A0, A1, "dg-A0"), (A1, A0, "dg-A1")):
        lhs = bracket(x, bracket(x, bracket(x, y)))
        res.append((lab, lhs - _times(bracket(x, y), c)))
    return VerificationCertificate.from_residuals(
        "dolan-grady", res, _engine(A0), dict(bindings or {}, c=c)
    )


def check_second_presentation(fam: OnsagerFamily, window: int) -> VerificationCertificate:
    """[A_k,A_l] = 4G_{k-l}, [G_l,A_k] = 2A_{k+l} - 2A_{k-l}, [G_k,G_l] = 0 for |k|,|l| <= window."""
    idx = range(-window, window + 1)
    res = []
    for k in idx:
        for l in idx:
            res.append((f"[A_{k},A_{l}]=4G_{k - l}", bracket(fam.get_A(k), fam.get_A(l)) - fam.get_G(k - l) * 4))
            res.append(
                (
                    f"[G_{l},A_{k}]=2A_{k + l}-2A_{k - l}",
                    bracket(fam.get_G(l), fam.get_A(k)) - fam.get_A(k + l) * 2 + fam.get_A(k - l) * 2,
                )
            )
            res.append((f"[G_{k},G_{l}]=0", bracket(fam.get_G(k), fam.get_G(l))))
    first = fam.get_A(0)
    return VerificationCertificate.from_residuals(
        "onsager-second-presentation", res, _engine(first), {"window": window}
    )


def _carry(carrier, *xs):
    if carrier is None:
        return xs
    if isinstance(carrier, Module):
        if not all(isinstance(x, AlgebraElement) for x in xs):
            raise CarrierMismatch("module carriers take algebra elements")
        return tuple(carrier.represent(x) for x in xs)
    if isinstance(carrier, (RuleSet, Presentation)):
        if not all(isinstance(x, AlgebraElement) for x in xs):
            raise CarrierMismatch("rewrite carriers take algebra elements")
        return xs
    raise CarrierMismatch(f"unsupported carrier {type(carrier).__name__}")


def _finish(identity, res, carrier, bindings, metadata, fuel, point=None):
    if point:
        # specialization is a ring map, so residuals may be specialized last
        if isinstance(carrier, (RuleSet, Presentation)):
            raise CarrierMismatch("rewrite carriers are checked symbolically")
        res = [(lab, r.specialize(point)) for lab, r in res]
        bindings = dict(point, **(bindings or {}))
    if isinstance(carrier, (RuleSet, Presentation)):
        rules = carrier.rules if isinstance(carrier, Presentation) else carrier
        reduced = []
        for lab, r in res:
            nf = normal_form(r, rules, fuel) if not r.is_zero() else None
            if nf is None or (nf.status is Status.CONVERGED and nf.element.is_zero()):
                reduced.append((lab, r.alphabet.zero()))
            else:
                reduced.append((lab, nf.element))
        return VerificationCertificate.from_residuals(
            identity, reduced, "rewrite", bindings, metadata, undecided=Verdict.INCONCLUSIVE
        )
    if isinstance(carrier, Module):
        metadata = dict(metadata or {}, module=carrier.label)
    _same_carrier(*(r for _, r in res))
    return VerificationCertificate.from_residuals(identity, res, "matrix", bindings, metadata)


def check_qdg(W0, W1, rho, carrier=None, fuel=DEFAULT_FUEL, bindings=None, metadata=None, point=None):
    """Both q-deformed Dolan-Grady relations with structure constant rho.

    ``point`` specializes the exact residuals (matrix carriers only).
    """
    rho = scalar(rho)
    W0, W1 = _carry(carrier, W0, W1)
    _same_carrier(W0, W1)
    res = [
        ("qdg-W0", nested_dg_lhs(W0, W1) - bracket(W0, W1) * rho),
        ("qdg-W1", nested_dg_lhs(W1, W0) - bracket(W1, W0) * rho),
    ]
    return _finish("q-dolan-grady", res, carrier, dict(bindings or {}, rho=rho), metadata, fuel, point)


def augmented_constant() -> Scalar:
    """(q^3 - q^-3)(q^2 - q^-2)^3/(q - q^-1)."""
    return (q**3 - q**-3) * (q**2 - q**-2) ** 3 / (q - q**-1)


def check_augmented(K0, K1, Z1, Zt1, carrier=None, fuel=DEFAULT_FUEL, bindings=None, metadata=None, point=None):
    """The seven defining relations of the augmented q-Onsager algebra."""
    K0, K1, Z1, Zt1 = _carry(carrier, K0, K1, Z1, Zt1)
    _same_carrier(K0, K1, Z1, Zt1)
    c = augmented_constant()
    q2, qm2 = q**2, q**-2
    res = [
        ("comm-K0K1", bracket(K0, K1)),
        ("exch-K0Z1", K0 * Z1 - (Z1 * K0) * qm2),
        ("exch-K0Zt1", K0 * Zt1 - (Zt1 * K0) * q2),
        ("exch-K1Z1", K1 * Z1 - (Z1 * K1) * q2),
        ("exch-K1Zt1", K1 * Zt1 - (Zt1 * K1) * qm2),
        ("quartic-Z1", nested_dg_lhs(Z1, Zt1) - (Z1 * (K1 * K1 - K0 * K0) * Z1) * c),
        ("quartic-Zt1", nested_dg_lhs(Zt1, Z1) - (Zt1 * (K0 * K0 - K1 * K1) * Zt1) * c),
    ]
    return _finish("augmented-q-onsager", res, carrier, bindings, metadata, fuel, point)


def classical_onsager_module(n: int, t="v") -> Module:
    """Onsager (Dolan-Grady) module: A0, A1 as loop_A(0), loop_A(1) at t on the spin-n sl2 irrep."""
    t = Scalar.var(t) if isinstance(t, str) else scalar(t)
    mats = {"A0": loop_A(0).realize(n, t), "A1": loop_A(1).realize(n, t)}
    return Module(presentation("onsager"), mats, {"n": n, "t": str(t)})


def check_q1_degeneration(n: int = 1, v=Fraction(2, 3)) -> VerificationCertificate:
    """q-DG residuals of the coideal images specialized at q = 1, k+- = 1, e+- = 0.

    Also compares 2*W0, 2*W1 at q = 1 with the loop generators A_0, A_1 at t = 1/v
    on the classical spin-n module. Entries with a pole at q = 1 are skipped and
    listed in the metadata.
    """
    from .coideal import QOAParams, qoa_image
    from .uqsl2 import evaluation_module

    pair = qoa_image(QOAParams(k_plus=ONE, k_minus=ONE, eps_plus=0, eps_minus=0))
    m = evaluation_module(n)
    W0, W1 = m.represent(pair.W0), m.represent(pair.W1)
    rho = pair.rho
    point = {"q": 1, "v": Fraction(v)}
    residuals = {
        "qdg-W0@q=1": nested_dg_lhs(W0, W1) - bracket(W0, W1) * rho,
        "qdg-W1@q=1": nested_dg_lhs(W1, W0) - bracket(W1, W0) * rho,
        "2W0-A0@q=1": W0 * 2 - loop_A(0).realize(n, 1),
        "2W1-A1@q=1": W1 * 2 - loop_A(1).realize(n, 1 / Fraction(v)),
    }
    skipped = []
    res = []
    from .errors import PoleAtPoint

    for lab, R in residuals.items():
        ents = {}
        for i in range(R.nrows):
            for j in range(R.ncols):
                x = R[i, j]
                try:
                    ents[(i, j)] = x.specialize(point) if lab.startswith("qdg") else x.specialize({"q": 1, "v": point["v"]})
                except PoleAtPoint:
                    skipped.append([lab, i, j])
        res.append((lab, Matrix.from_entries(R.nrows, ents, R.ncols)))
    return VerificationCertificate.from_residuals(
        "q1-degeneration",
        res,
        "matrix",
        {"q": 1, "v": point["v"], "k+": 1, "k-": 1, "e+": 0, "e-": 0},
        {"n": n, "skipped_entries": skipped, "rho_at_q1": str(rho.specialize({"q": 1}))},
    )
