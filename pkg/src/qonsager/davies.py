"""Davies-type vanishing polynomials and AW(3)-type fits on finite-dimensional modules.

The kernel of the linear map  word in {W0, W1} of degree <= D  ->  matrix
on a module is computed exactly. Symbolic elimination is tried first; when
it exceeds the term budget the computation is repeated at random rational
points and the consensus kernel dimension is reported together with the
points used.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DenominatorOutOfDomain, ResourceBudgetExceeded
from .linalg import DEFAULT_TERM_BUDGET, kernel, solve
from .matrix import Matrix
from .ncalg import AlgebraElement, Homomorphism, apply_hom, nested_dg_lhs, q_bracket
from .scalars import Scalar, q, random_point, scalar
from .uqsl2 import Module, presentation

MAX_WORDS = 2047
FALLBACK_POINTS = 3
DEFAULT_AW3_BASIS = ("W1", "W0", "1", "W0*W1", "W1*W0")


def pair_alphabet():
    return presentation("q_onsager").alphabet


def default_aw3_target() -> AlgebraElement:
    """[W0, [W0, W1]_q]_{q^-1}."""
    W0, W1 = pair_alphabet().letters("W0", "W1")
    return q_bracket(W0, q_bracket(W0, W1, q), q**-1)


@dataclass(frozen=True)
class WordBasis:
    degree: int
    words: tuple  # tuples over {0: W0, 1: W1}, graded lexicographic

    @classmethod
    def build(cls, degree: int) -> "WordBasis":
        if degree < 0:
            raise ValueError("degree bound must be >= 0")
        words = [()]
        layer = [()]
        for _ in range(degree):
            layer = [w + (i,) for w in layer for i in (0, 1)]
            words.extend(layer)
        return cls(degree, tuple(words))

    def __len__(self):
        return len(self.words)

    @staticmethod
    def text(word) -> str:
        return "*".join(f"W{i}" for i in word) or "1"


def expected_word_count(degree: int) -> int:
    return 2 ** (degree + 1) - 1


def _pair_matrices(m: Module | None, pair):
    if isinstance(pair, (tuple, list)) and all(isinstance(x, Matrix) for x in pair):
        return tuple(pair)
    return m.represent(pair.W0), m.represent(pair.W1)


def word_matrices(W0: Matrix, W1: Matrix, basis: WordBasis) -> dict:
    """Images of every basis word, built by extending prefixes."""
    out = {(): Matrix.identity(W0.nrows)}
    gens = (W0, W1)
    for w in basis.words[1:]:
        out[w] = out[w[:-1]] * gens[w[-1]]
    return out


def _module_label(m, W0):
    if m is not None:
        return m.label
    return {"matrices": True, "dim": W0.nrows}


@dataclass
class KernelReport:
    module: dict
    degree: int
    specialization: object  # "symbolic", a point, or {"fallback": [points]}
    word_count: int
    rank: int
    kernel_dimension: int
    basis: list  # list of [(word text, Scalar or Fraction), ...]
    normalized: list = field(default_factory=list)
    dimensions_at_points: list = field(default_factory=list)

    def elements(self) -> list[AlgebraElement]:
        A = pair_alphabet()
        out = []
        for vec in self.basis:
            terms = {}
            for text, c in vec:
                word = () if text == "1" else A.word(text.split("*"))
                terms[word] = scalar(c)
            out.append(AlgebraElement(A, terms))
        return out

    def to_dict(self) -> dict:
        spec = self.specialization
        if isinstance(spec, dict):
            spec = {k: (str(v) if not isinstance(v, list) else [{a: str(b) for a, b in p.items()} for p in v]) for k, v in spec.items()}
        return {
            "module": self.module,
            "degree": self.degree,
            "specialization": spec,
            "word_count": self.word_count,
            "rank": self.rank,
            "kernel_dimension": self.kernel_dimension,
            "basis": [[[w, str(c)] for w, c in vec] for vec in self.basis],
            "normalized": self.normalized,
            "dimensions_at_points": self.dimensions_at_points,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)


def _specialize_pair(W0, W1, point):
    return W0.specialize(point), W1.specialize(point)


def _kernel_report(W0, W1, D, label, spec, budget):
    basis = WordBasis.build(D)
    mats = word_matrices(W0, W1, basis)
    d = W0.nrows
    cols = [mats[w] for w in basis.words]
    rows = [[cols[c][i, j] for c in range(len(cols))] for i in range(d) for j in range(d)]
    vecs, ech = kernel(rows, len(cols), budget=budget)
    out = []
    for v in vecs:
        out.append([(WordBasis.text(w), c) for w, c in zip(basis.words, v.entries) if c])
    return KernelReport(
        module=label,
        degree=D,
        specialization=spec,
        word_count=len(basis),
        rank=ech.rank,
        kernel_dimension=len(vecs),
        basis=out,
        normalized=[v.normalized for v in vecs],
    )


def kernel_basis(
    m: Module | None,
    pair,
    D: int,
    spec="symbolic",
    *,
    max_words: int = MAX_WORDS,
    budget: int = DEFAULT_TERM_BUDGET,
    seed: int = 0,
    points: int = FALLBACK_POINTS,
) -> KernelReport:
    """Exact kernel of word -> matrix for words in {W0, W1} of degree <= D.

    ``pair`` is a QOnsagerPair pushed through ``m`` or a tuple of two
    matrices. ``spec`` is "symbolic" or a mapping of parameter values.
    """
    if D < 0:
        raise ValueError("D must be >= 0")
    count = expected_word_count(D)
    if count > max_words:
        raise ResourceBudgetExceeded(f"{count} words at degree {D} exceed the cap {max_words}")
    W0, W1 = _pair_matrices(m, pair)
    label = _module_label(m, W0)
    if spec != "symbolic":
        point = dict(spec)
        W0, W1 = _specialize_pair(W0, W1, point)
        return _kernel_report(W0, W1, D, label, {k: Fraction(v) for k, v in point.items()}, budget)
    try:
        return _kernel_report(W0, W1, D, label, "symbolic", budget)
    except ResourceBudgetExceeded:
        pass
    names = sorted(W0.variables() | W1.variables())
    rng = random.Random(seed)
    reports = []
    for _ in range(max(points, FALLBACK_POINTS)):
        pt = random_point(rng, names)
        S0, S1 = _specialize_pair(W0, W1, pt)
        reports.append((pt, _kernel_report(S0, S1, D, label, dict(pt), budget)))
    dims = [r.kernel_dimension for _, r in reports]
    consensus, _ = Counter(dims).most_common(1)[0]
    chosen = next(r for _, r in reports if r.kernel_dimension == consensus)
    chosen.specialization = {"fallback": [dict(p) for p, _ in reports]}
    chosen.dimensions_at_points = dims
    return chosen


def evaluate_on_pair(x: AlgebraElement, W0: Matrix, W1: Matrix) -> Matrix:
    """Evaluate a polynomial in W0, W1 by recomputing every word product from scratch."""
    gens = {0: W0, 1: W1}
    total = Matrix.zeros(W0.nrows)
    for word, c in x.items():
        prod = Matrix.identity(W0.nrows)
        for i in word:
            prod = prod * gens[i]
        total = total + prod * c
    return total


def cayley_hamilton(W: Matrix, letter: str = "W0") -> AlgebraElement:
    """X^2 - tr(X) X + det(X) for a 2x2 matrix X, as an element in {W0, W1}."""
    if W.shape != (2, 2):
        raise ValueError("Cayley-Hamilton helper is for 2x2 matrices")
    X = pair_alphabet().letter(letter)
    det = W[0, 0] * W[1, 1] - W[0, 1] * W[1, 0]
    return X * X - X * W.trace() + pair_alphabet().one() * det


@dataclass
class FitResult:
    feasible: bool
    coefficients: dict  # word text -> Scalar or Fraction
    residual: Matrix
    rank: int
    augmented_rank: int
    solution_space_dimension: int
    basis: tuple
    target: str
    specialization: object = "symbolic"

    def to_dict(self) -> dict:
        spec = self.specialization
        if isinstance(spec, dict):
            spec = {k: str(v) for k, v in spec.items()}
        return {
            "feasible": self.feasible,
            "coefficients": {w: str(c) for w, c in self.coefficients.items()},
            "residual": [[i, j, str(x)] for (i, j), x in self.residual.nonzero_entries()],
            "rank": self.rank,
            "augmented_rank": self.augmented_rank,
            "solution_space_dimension": self.solution_space_dimension,
            "basis": list(self.basis),
            "target": self.target,
            "specialization": spec,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)


def _as_element(w) -> AlgebraElement:
    if isinstance(w, AlgebraElement):
        return w
    return pair_alphabet().parse(w)


def fit_relation(
    m: Module | None,
    target: AlgebraElement | None,
    basis_words=DEFAULT_AW3_BASIS,
    pair=None,
    spec="symbolic",
    budget: int = DEFAULT_TERM_BUDGET,
) -> FitResult:
    """Find c_w with target = sum c_w * w on the module, exactly.

    Infeasible systems return ``feasible=False`` with the residual of the
    solution of the pivot rows; underdetermined systems return the reduced
    echelon particular solution (free coefficients zero).
    """
    target = default_aw3_target() if target is None else target
    W0, W1 = _pair_matrices(m, pair)
    elems = [_as_element(w) for w in basis_words]
    if spec != "symbolic":
        W0, W1 = _specialize_pair(W0, W1, dict(spec))
        target = target.specialize(dict(spec))
        elems = [e.specialize(dict(spec)) for e in elems]
    A = pair_alphabet()
    h = Homomorphism(A, {"W0": W0, "W1": W1}, Matrix.identity(W0.nrows))
    labels = [str(e) for e in elems]
    cols = [apply_hom(h, e) for e in elems]
    T = apply_hom(h, target)
    d = W0.nrows
    rows = [[c[i, j] for c in cols] for i in range(d) for j in range(d)]
    rhs = [T[i, j] for i in range(d) for j in range(d)]
    if not elems:
        return FitResult(T.is_zero(), {}, T, 0, 0 if T.is_zero() else 1, 0, (), str(target), spec)
    sol = solve(rows, rhs, budget=budget)
    coeffs = {lab: c for lab, c in zip(labels, sol.particular)}
    fitted = Matrix.zeros(d)
    for c, M in zip(sol.particular, cols):
        if c:
            fitted = fitted + M * c
    residual = T - fitted
    feasible = sol.consistent and residual.is_zero()
    return FitResult(
        feasible,
        coeffs,
        residual,
        sol.rank,
        sol.augmented_rank,
        sol.nullity,
        tuple(labels),
        str(target),
        spec if spec == "symbolic" else {k: Fraction(v) for k, v in dict(spec).items()},
    )
