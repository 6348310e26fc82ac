"""Images of the q-Onsager and augmented q-Onsager generators in U_q(sl2-hat)."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import PresentationMismatch
from .linalg import rank
from .matrix import Matrix
from .ncalg import AlgebraElement
from .rewrite import Presentation, RewriteRule, RuleSet
from .scalars import Scalar, q, scalar
from .uqsl2 import (
    CoproductConvention,
    Module,
    affine,
    default_coproduct,
    pair_hom,
    presentation,
)
from .ncalg import apply_hom


@dataclass(frozen=True)
class QOAParams:
    k_plus: Scalar = field(default_factory=lambda: Scalar.var("k+"))
    k_minus: Scalar = field(default_factory=lambda: Scalar.var("k-"))
    eps_plus: Scalar = field(default_factory=lambda: Scalar.var("e+"))
    eps_minus: Scalar = field(default_factory=lambda: Scalar.var("e-"))

    def __post_init__(self):
        for name in ("k_plus", "k_minus", "eps_plus", "eps_minus"):
            object.__setattr__(self, name, scalar(getattr(self, name)))

    @classmethod
    def from_bindings(cls, bindings) -> "QOAParams":
        """Rational or scalar values keyed by 'k+', 'k-', 'e+', 'e-'; the rest stay symbolic."""
        keys = {"k+": "k_plus", "k-": "k_minus", "e+": "eps_plus", "e-": "eps_minus"}
        return cls(**{keys[k]: scalar(v) if not isinstance(v, str) else Scalar.parse(v) for k, v in bindings.items() if k in keys})

    def specialize(self, bindings) -> "QOAParams":
        return QOAParams(*(x.specialize(bindings) for x in (self.k_plus, self.k_minus, self.eps_plus, self.eps_minus)))

    def as_bindings(self) -> dict:
        return {"k+": self.k_plus, "k-": self.k_minus, "e+": self.eps_plus, "e-": self.eps_minus}


@dataclass(frozen=True)
class QOnsagerPair:
    W0: AlgebraElement
    W1: AlgebraElement
    rho: Scalar


@dataclass(frozen=True)
class AugmentedQuadruple:
    K0: AlgebraElement
    K1: AlgebraElement
    Z1: AlgebraElement
    Zt1: AlgebraElement

    def as_tuple(self):
        return (self.K0, self.K1, self.Z1, self.Zt1)


def rho_value(p: QOAParams) -> Scalar:
    return (q + q**-1) ** 2 * p.k_plus * p.k_minus


def qoa_image(p: QOAParams | None = None) -> QOnsagerPair:
    """W0 -> k+ e1 + k- q^-1 f1 q^{h1} + e+ q^{h1};  W1 -> k- e0 + k+ q^-1 f0 q^{h0} + e- q^{h0}."""
    p = p or QOAParams()
    A = affine().alphabet
    e0, e1, f0, f1, K0, K1 = A.letters("e0", "e1", "f0", "f1", "K0", "K1")
    qi = q**-1
    W0 = e1 * p.k_plus + (f1 * K1) * (p.k_minus * qi) + K1 * p.eps_plus
    W1 = e0 * p.k_minus + (f0 * K0) * (p.k_plus * qi) + K0 * p.eps_minus
    return QOnsagerPair(W0, W1, rho_value(p))


def augmented_image(p: QOAParams | None = None) -> AugmentedQuadruple:
    """Augmented generators; q^{h1+h0} is the word K1*K0."""
    p = p or QOAParams()
    A = affine().alphabet
    e0, e1, f0, f1, K0, K1 = A.letters("e0", "e1", "f0", "f1", "K0", "K1")
    c = q**2 - q**-2
    qi = q**-1
    Kk0 = K1 * p.eps_plus
    Kk1 = K0 * p.eps_minus
    Z1 = ((e0 * K1) * (p.eps_plus * qi) + (f1 * K1 * K0) * p.eps_minus) * c
    Zt1 = ((e1 * K0) * (p.eps_minus * qi) + (f0 * K1 * K0) * p.eps_plus) * c
    return AugmentedQuadruple(Kk0, Kk1, Z1, Zt1)


def qoa_presentation(p: QOAParams | None = None) -> Presentation:
    """The q-Onsager presentation with k+, k- replaced by the values in ``p``."""
    base = presentation("q_onsager")
    p = p or QOAParams()
    subs = {"k+": p.k_plus, "k-": p.k_minus}
    if all(v == Scalar.var(k) for k, v in subs.items()):
        return base

    def fix(c):
        for name, val in subs.items():
            c = c.substitute(name, val)
        return c

    rules = [RewriteRule(r.lhs, r.rhs.map_coefficients(fix), r.label) for r in base.rules.rules]
    tag = ", ".join(f"{k}={v}" for k, v in subs.items())
    return Presentation(f"q_onsager[{tag}]", base.alphabet, RuleSet(base.alphabet, rules, base.rules.precedence))


def qoa_module(m: Module, p: QOAParams | None = None, validate=True) -> Module:
    """Pull an affine module back to the q-Onsager presentation (rho at its coideal value)."""
    pair = qoa_image(p)
    mats = {"W0": m.represent(pair.W0), "W1": m.represent(pair.W1)}
    return Module(qoa_presentation(p), mats, {"via": "qoa_image", "base": m.label}, validate)


def augmented_module(m: Module, p: QOAParams | None = None, validate=True) -> Module:
    quad = augmented_image(p)
    mats = {name: m.represent(x) for name, x in zip(("K0", "K1", "Z1", "Zt1"), quad.as_tuple())}
    return Module(presentation("augmented_qoa"), mats, {"via": "augmented_image", "base": m.label}, validate)


def words_up_to(gens, degree: int):
    """All products of the given elements of length <= degree, graded-lex order."""
    one = gens[0].alphabet.one()
    out = [((), one)]
    layer = [((), one)]
    for _ in range(degree):
        nxt = []
        for w, x in layer:
            for i, g in enumerate(gens):
                nxt.append((w + (i,), x * g))
        out.extend(nxt)
        layer = nxt
    return out


@dataclass
class CoidealReport:
    side: str
    convention: dict
    span_dimension: int
    ambient_dimension: int
    vacuous: bool
    members: dict  # generator label -> bool

    @property
    def all_members(self) -> bool:
        return all(self.members.values())

    def to_dict(self) -> dict:
        return {
            "side": self.side,
            "convention": self.convention,
            "span_dimension": self.span_dimension,
            "ambient_dimension": self.ambient_dimension,
            "vacuous": self.vacuous,
            "members": self.members,
        }


def _vec(m: Matrix):
    return [x for row in m.rows for x in row]


def check_coideal_on_modules(
    elements: dict,
    spanning: list,
    m1: Module,
    m2: Module,
    convention: CoproductConvention | None = None,
    side: str = "left",
) -> CoidealReport:
    """Test Delta(x) in span{pi1(b) (x) M} (side='left') or span{M (x) pi2(b)} (side='right').

    ``elements`` maps labels to affine algebra elements; ``spanning`` is a
    finite list of affine algebra elements standing in for the subalgebra.
    Membership is decided by exact rank comparisons, block by block.
    """
    convention = convention or default_coproduct()
    if m1.presentation.name != "uq_sl2hat" or m2.presentation.name != "uq_sl2hat":
        raise PresentationMismatch("coideal checks need affine modules")
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    ph = pair_hom(m1, m2)
    d1, d2 = m1.dim, m2.dim
    own, other = (m1, d2) if side == "left" else (m2, d1)
    span_rows = [_vec(own.represent(b)) for b in spanning]
    span_rank = rank(span_rows) if span_rows else 0
    ambient = own.dim**2
    members = {}
    for label, x in elements.items():
        big = apply_hom(ph, convention.apply(x))
        ok = True
        for i in range(other):
            for j in range(other):
                if side == "left":
                    block = [[big[a * d2 + i, b * d2 + j] for b in range(d1)] for a in range(d1)]
                else:
                    block = [[big[i * d2 + a, j * d2 + b] for b in range(d2)] for a in range(d2)]
                vec = [x_ for row in block for x_ in row]
                if all(not v.num for v in vec):
                    continue
                if rank(span_rows + [vec]) > span_rank:
                    ok = False
                    break
            if not ok:
                break
        members[label] = ok
    return CoidealReport(side, convention.describe(), span_rank, ambient, span_rank == ambient, members)
