"""U_q(sl2) and U_q(sl2-hat): modules, evaluation modules, coproducts, tensors.

Letters of the affine alphabet: ``e0 e1 f0 f1`` and the Cartan letters
``K0 = q^{h_0}``, ``K0i = q^{-h_0}``, ``K1``, ``K1i``.  Only level-zero
modules are built, so ``K0*K1`` acts as the identity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import (
    DenominatorOutOfDomain,
    InvalidModule,
    NegativeSpinParameter,
    NonInvertibleSpectralParameter,
    PresentationMismatch,
)
from .matrix import Matrix
from .ncalg import AlgebraElement, Alphabet, Homomorphism, apply_hom
from .rewrite import Presentation, load_presentation
from .scalars import Scalar, q, q_integer, scalar


@lru_cache(maxsize=None)
def presentation(name: str) -> Presentation:
    """Bundled presentation, cached."""
    return load_presentation(name)


def affine() -> Presentation:
    return presentation("uq_sl2hat")


def finite() -> Presentation:
    return presentation("uq_sl2")


class Module:
    """Finite-dimensional representation: letter -> exact square matrix.

    Construction checks every defining relation of ``presentation`` and
    raises InvalidModule naming the first relation that fails.
    """

    def __init__(self, presentation: Presentation, matrices: dict, label=None, validate=True):
        self.presentation = presentation
        self.matrices = dict(matrices)
        self.label = dict(label or {})
        missing = [n for n in presentation.alphabet if n not in self.matrices]
        if missing:
            raise InvalidModule(f"letters without a matrix: {missing}")
        dims = {m.shape for m in self.matrices.values()}
        if len(dims) != 1 or next(iter(dims))[0] != next(iter(dims))[1]:
            raise InvalidModule(f"matrices must be square of one size, got {sorted(dims)}")
        self.dim = next(iter(dims))[0]
        self.hom = Homomorphism(presentation.alphabet, self.matrices, Matrix.identity(self.dim))
        if validate:
            for label_, residual in self.relation_residuals():
                if not residual.is_zero():
                    raise InvalidModule(f"relation {label_} fails on {self.describe()}")

    @property
    def alphabet(self) -> Alphabet:
        return self.presentation.alphabet

    def describe(self) -> str:
        return ", ".join(f"{k}={v}" for k, v in sorted(self.label.items())) or f"dim {self.dim}"

    def __getitem__(self, letter: str) -> Matrix:
        return self.matrices[letter]

    def represent(self, x: AlgebraElement) -> Matrix:
        return apply_hom(self.hom, x)

    def relation_residuals(self):
        return [(lab, self.represent(rel)) for lab, rel in self.presentation.relations()]

    def specialize(self, bindings) -> "Module":
        mats = {k: m.specialize(bindings) for k, m in self.matrices.items()}
        label = dict(self.label, specialized={k: str(v) for k, v in sorted(bindings.items())})
        return Module(self.presentation, mats, label)

    def variables(self) -> set[str]:
        out = set()
        for m in self.matrices.values():
            out |= m.variables()
        return out

    def to_json(self) -> str:
        doc = {
            "presentation": self.presentation.name,
            "dimension": self.dim,
            "label": self.label,
            "matrices": {k: self.matrices[k].to_text() for k in self.alphabet.names},
        }
        return json.dumps(doc, indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Module":
        doc = json.loads(text)
        pres = presentation(doc["presentation"])
        mats = {k: Matrix.from_text(v) for k, v in doc["matrices"].items()}
        if any(m.shape != (doc["dimension"],) * 2 for m in mats.values()):
            raise InvalidModule("matrix size disagrees with the declared dimension")
        return cls(pres, mats, doc.get("label"))

    def __repr__(self):
        return f"Module({self.presentation.name}, {self.describe()})"


def irrep(n: int) -> Module:
    """(n+1)-dimensional irreducible U_q(sl2) module on basis u_0..u_n."""
    if n < 0:
        raise NegativeSpinParameter(f"n must be >= 0, got {n}")
    d = n + 1
    K = Matrix.diag([q ** (n - 2 * m) for m in range(d)])
    Ki = Matrix.diag([q ** (2 * m - n) for m in range(d)])
    E = Matrix.from_entries(d, {(m - 1, m): q_integer(n - m + 1) for m in range(1, d)})
    F = Matrix.from_entries(d, {(m + 1, m): q_integer(m + 1) for m in range(n)})
    return Module(finite(), {"E": E, "F": F, "K": K, "Ki": Ki}, {"n": n})


# Evaluation map U_q(sl2-hat) -> U_q(sl2); ``v`` is the spectral parameter.
DEFAULT_EVALUATION = {
    "e1": "E",
    "f1": "F",
    "K1": "K",
    "K1i": "Ki",
    "e0": "v*F",
    "f0": "v^-1*E",
    "K0": "Ki",
    "K0i": "K",
}


def _spectral_scalar(spectral) -> Scalar:
    s = Scalar.var(spectral) if isinstance(spectral, str) else scalar(spectral)
    if s.is_zero():
        raise NonInvertibleSpectralParameter("spectral parameter is zero")
    try:
        s.inverse()
    except DenominatorOutOfDomain as exc:
        raise NonInvertibleSpectralParameter(f"{s} is not invertible in the coefficient field") from exc
    return s


def evaluation_hom(spectral="v", convention=None) -> Homomorphism:
    """Evaluation homomorphism from the affine alphabet into U_q(sl2) elements."""
    s = _spectral_scalar(spectral)
    src = affine().alphabet
    tgt = finite().alphabet
    conv = convention or DEFAULT_EVALUATION
    images = {}
    for letter in src.names:
        img = tgt.parse(conv[letter])
        if s != Scalar.var("v"):
            img = img.map_coefficients(lambda c: c.substitute("v", s))
        images[letter] = img
    return Homomorphism(src, images, tgt.one())


def evaluation_module(n: int, spectral="v", convention=None) -> Module:
    """Pull the irrep of dimension n+1 back through the evaluation map.

    Raises InvalidModule if the chosen convention breaks an affine relation.
    """
    base = irrep(n)
    ev = evaluation_hom(spectral, convention)
    mats = {letter: base.represent(img) for letter, img in ev.images.items()}
    s = _spectral_scalar(spectral)
    label = {"n": n, "spectral": str(s)}
    if convention is not None:
        label["evaluation"] = dict(convention)
    return Module(affine(), mats, label)


def trivial_module() -> Module:
    return evaluation_module(0)


# -- coproducts -------------------------------------------------------------


def doubled_alphabet(alphabet: Alphabet) -> Alphabet:
    """Letters x_L (x tensor 1) followed by x_R (1 tensor x)."""
    names = [f"{n}_L" for n in alphabet.names] + [f"{n}_R" for n in alphabet.names]
    inv = []
    for g, h in alphabet.inverse_pairs():
        inv += [(f"{g}_L", f"{h}_L"), (f"{g}_R", f"{h}_R")]
    return Alphabet(names, inv)


DEFAULT_COPRODUCT = {
    "e0": "e0_L + K0_L*e0_R",
    "e1": "e1_L + K1_L*e1_R",
    "f0": "f0_L*K0i_R + f0_R",
    "f1": "f1_L*K1i_R + f1_R",
    "K0": "K0_L*K0_R",
    "K0i": "K0i_L*K0i_R",
    "K1": "K1_L*K1_R",
    "K1i": "K1i_L*K1i_R",
}

OPPOSITE_COPRODUCT = {
    "e0": "e0_R + e0_L*K0_R",
    "e1": "e1_R + e1_L*K1_R",
    "f0": "K0i_L*f0_R + f0_L",
    "f1": "K1i_L*f1_R + f1_L",
    "K0": "K0_L*K0_R",
    "K0i": "K0i_L*K0i_R",
    "K1": "K1_L*K1_R",
    "K1i": "K1i_L*K1i_R",
}


@dataclass
class CoproductConvention:
    name: str
    images: dict  # letter -> expression text over the doubled alphabet
    presentation_name: str = "uq_sl2hat"
    _hom: Homomorphism | None = field(default=None, repr=False, compare=False)

    @property
    def presentation(self) -> Presentation:
        return presentation(self.presentation_name)

    def hom(self) -> Homomorphism:
        if self._hom is None:
            src = self.presentation.alphabet
            dbl = doubled_alphabet(src)
            self._hom = Homomorphism(src, {k: dbl.parse(v) for k, v in self.images.items()}, dbl.one())
        return self._hom

    def apply(self, x: AlgebraElement) -> AlgebraElement:
        return apply_hom(self.hom(), x)

    def describe(self) -> dict:
        return {"name": self.name, "images": dict(sorted(self.images.items()))}


def default_coproduct() -> CoproductConvention:
    return CoproductConvention("default", dict(DEFAULT_COPRODUCT))


def opposite_coproduct() -> CoproductConvention:
    return CoproductConvention("opposite", dict(OPPOSITE_COPRODUCT))


def pair_hom(m1: Module, m2: Module) -> Homomorphism:
    """Represent the doubled alphabet on m1 (x) m2."""
    if m1.presentation.name != m2.presentation.name:
        raise PresentationMismatch(f"{m1.presentation.name} vs {m2.presentation.name}")
    dbl = doubled_alphabet(m1.alphabet)
    i1, i2 = Matrix.identity(m1.dim), Matrix.identity(m2.dim)
    images = {}
    for n in m1.alphabet.names:
        images[f"{n}_L"] = m1[n].kron(i2)
        images[f"{n}_R"] = i1.kron(m2[n])
    return Homomorphism(dbl, images, Matrix.identity(m1.dim * m2.dim))


def represent_coproduct(x: AlgebraElement, c: CoproductConvention, m1: Module, m2: Module) -> Matrix:
    return apply_hom(pair_hom(m1, m2), c.apply(x))


def tensor(m1: Module, m2: Module, c: CoproductConvention | None = None) -> Module:
    c = c or default_coproduct()
    if m1.presentation.name != m2.presentation.name or m1.presentation.name != c.presentation_name:
        raise PresentationMismatch("modules and coproduct must share one presentation")
    ph = pair_hom(m1, m2)
    dh = c.hom()
    mats = {n: apply_hom(ph, dh.images[n]) for n in m1.alphabet.names}
    label = {"tensor": [m1.label, m2.label], "coproduct": c.name}
    return Module(m1.presentation, mats, label)


def coproduct_residuals(c: CoproductConvention, m1: Module, m2: Module):
    """Images of every defining relation under Delta on m1 (x) m2."""
    ph = pair_hom(m1, m2)
    return [(lab, apply_hom(ph, c.apply(rel))) for lab, rel in c.presentation.relations()]


def chain_module(n_sites: int, spectral=None, c: CoproductConvention | None = None) -> Module:
    """n_sites-fold tensor of spin-1/2 evaluation modules at v1..vN."""
    spectral = spectral or [f"v{i}" for i in range(1, n_sites + 1)]
    if len(spectral) != n_sites:
        raise ValueError("one spectral parameter per site")
    m = evaluation_module(1, spectral[0])
    for s in spectral[1:]:
        m = tensor(m, evaluation_module(1, s), c)
    m.label = {"chain": n_sites, "spectral": [str(s) for s in spectral]}
    return m


def bundled_modules(spins=(1, 2, 3), with_tensor=True) -> list[Module]:
    """Evaluation modules used as the matrix oracle."""
    mods = [evaluation_module(n) for n in spins]
    if with_tensor:
        mods.append(tensor(evaluation_module(1, "v1"), evaluation_module(1, "v2")))
    return mods
