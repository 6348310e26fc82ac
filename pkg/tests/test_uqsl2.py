from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import oracles
from qonsager.errors import InvalidModule, NegativeSpinParameter, NonInvertibleSpectralParameter, PresentationMismatch
from qonsager.matrix import Matrix
from qonsager.scalars import Scalar, q
from qonsager.uqsl2 import (
    CoproductConvention,
    DEFAULT_EVALUATION,
    Module,
    affine,
    chain_module,
    coproduct_residuals,
    default_coproduct,
    evaluation_module,
    finite,
    irrep,
    opposite_coproduct,
    tensor,
    trivial_module,
)

points = st.builds(
    lambda a, b, c, d: {"q": Fraction(a, b) if abs(Fraction(a, b)) != 1 else Fraction(2), "v": Fraction(c, d)},
    st.integers(-7, 7).filter(bool), st.integers(1, 4), st.integers(-7, 7).filter(bool), st.integers(1, 4),
)


@pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
def test_irrep_relations_and_casimir_free_shape(n):
    m = irrep(n)
    assert m.dim == n + 1
    assert all(r.is_zero() for _, r in m.relation_residuals())


@given(points, st.integers(0, 3))
def test_evaluation_module_matches_closed_form(pt, n):
    m = evaluation_module(n)
    ref = oracles.evaluation_letters(n, pt["q"], pt["v"])
    for letter, M in m.matrices.items():
        assert M.evaluate(pt) == ref[letter], letter


def test_affine_relations_symbolic_spins_one_to_three():
    for n in (1, 2, 3):
        m = evaluation_module(n)
        assert m.variables() == {"q", "v"}
        assert all(r.is_zero() for _, r in m.relation_residuals())


def test_serre_relation_count_and_labels():
    labels = [lab for lab, _ in affine().relations()]
    assert len(labels) == len(set(labels))
    assert sum("serre" in lab for lab in labels) == 4


def test_spin_parameter_checks():
    with pytest.raises(NegativeSpinParameter):
        irrep(-1)
    with pytest.raises(NonInvertibleSpectralParameter):
        evaluation_module(1, spectral=0)
    with pytest.raises(NonInvertibleSpectralParameter):
        evaluation_module(1, spectral=Scalar.var("k+"))
    assert trivial_module().dim == 1


def test_specialized_spectral_parameter():
    m = evaluation_module(1, spectral=Fraction(2, 3))
    assert m.variables() == {"q"}
    assert m["e0"] == evaluation_module(1)["e0"].specialize({"v": Fraction(2, 3)})


def test_broken_convention_is_rejected():
    bad = dict(DEFAULT_EVALUATION, e0="v*E")
    with pytest.raises(InvalidModule):
        evaluation_module(1, convention=bad)


def test_invalid_matrices_rejected():
    good = irrep(1)
    mats = dict(good.matrices, E=good["E"] * 2 + good["F"])
    with pytest.raises(InvalidModule):
        Module(finite(), mats)
    with pytest.raises(InvalidModule):
        Module(finite(), {"E": good["E"]})


def test_module_json_round_trip():
    m = evaluation_module(2)
    again = Module.from_json(m.to_json())
    assert again.matrices == m.matrices and again.label == m.label


@pytest.mark.parametrize("conv", [default_coproduct(), opposite_coproduct()])
def test_coproduct_is_an_algebra_map(conv):
    m1, m2 = evaluation_module(1, "v1"), evaluation_module(1, "v2")
    assert all(r.is_zero() for _, r in coproduct_residuals(conv, m1, m2))
    t = tensor(m1, m2, conv)
    assert t.dim == 4


def test_wrong_coproduct_breaks_relations():
    bad = CoproductConvention("bad", dict(default_coproduct().images, e1="e1_L + e1_R"))
    m1, m2 = evaluation_module(1, "v1"), evaluation_module(1, "v2")
    assert any(not r.is_zero() for _, r in coproduct_residuals(bad, m1, m2))
    with pytest.raises(InvalidModule):
        tensor(m1, m2, bad)


def test_tensor_against_kron_oracle():
    m1, m2 = evaluation_module(1, "v1"), evaluation_module(2, "v2")
    t = tensor(m1, m2)
    pt = {"q": Fraction(3), "v1": Fraction(2), "v2": Fraction(-1, 2)}
    L1 = oracles.evaluation_letters(1, pt["q"], pt["v1"])
    L2 = oracles.evaluation_letters(2, pt["q"], pt["v2"])

    def kron(a, b):
        return [[x * y for x in ra for y in rb] for ra in a for rb in b]

    I1, I2 = oracles.eye(2), oracles.eye(3)
    # e1 -> e1 (x) 1 + K1 (x) e1
    ref = oracles.mat_add(kron(L1["e1"], I2), kron(L1["K1"], L2["e1"]))
    assert t["e1"].evaluate(pt) == ref
    # f0 -> f0 (x) K0^-1 + 1 (x) f0
    ref = oracles.mat_add(kron(L1["f0"], L2["K0i"]), kron(I1, L2["f0"]))
    assert t["f0"].evaluate(pt) == ref


def test_chain_module_and_mismatch():
    m = chain_module(3)
    assert m.dim == 8 and m.variables() == {"q", "v1", "v2", "v3"}
    with pytest.raises(PresentationMismatch):
        tensor(irrep(1), evaluation_module(1))


def test_matrix_text_round_trip():
    M = Matrix([[q, Scalar("k+ + 1/2")], [0, q**-1]])
    assert Matrix.from_text(M.to_text()) == M
