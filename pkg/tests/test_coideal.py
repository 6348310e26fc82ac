import pytest

from qonsager.coideal import (
    QOAParams,
    augmented_image,
    augmented_module,
    check_coideal_on_modules,
    qoa_image,
    qoa_module,
    words_up_to,
)
from qonsager.errors import PresentationMismatch
from qonsager.scalars import Scalar, q
from qonsager.uqsl2 import affine, evaluation_module, irrep, opposite_coproduct


def test_images_as_displayed():
    A = affine().alphabet
    pair = qoa_image()
    kp, km, ep = Scalar.var("k+"), Scalar.var("k-"), Scalar.var("e+")
    assert pair.W0.coefficient(("e1",)) == kp
    assert pair.W0.coefficient(("f1", "K1")) == km * q**-1
    assert pair.W0.coefficient(("K1",)) == ep
    assert pair.W1.coefficient(("f0", "K0")) == kp * q**-1
    assert pair.W0.alphabet == A
    assert pair.rho == (q + q**-1) ** 2 * kp * km


def test_augmented_images_use_both_cartan_letters():
    quad = augmented_image()
    assert quad.Z1.coefficient(("f1", "K1", "K0")) == Scalar.var("e-") * (q**2 - q**-2)
    assert quad.K0 == affine().alphabet.letter("K1") * Scalar.var("e+")


@pytest.mark.parametrize("n", [1, 2])
def test_pullbacks_satisfy_the_presentations(n):
    m = evaluation_module(n)
    assert qoa_module(m).dim == n + 1
    assert augmented_module(m).dim == n + 1


def test_pullback_with_specialized_parameters():
    p = QOAParams.from_bindings({"k+": 2, "k-": 3})
    m = qoa_module(evaluation_module(1), p)
    assert m.variables() == {"q", "v", "e+", "e-"}
    assert m.presentation.name == "q_onsager[k+=2, k-=3]"


def test_words_up_to():
    W0, W1 = (qoa_image().W0, qoa_image().W1)
    ws = words_up_to([W0, W1], 2)
    assert len(ws) == 7
    assert ws[4][0] == (0, 1) and ws[4][1] == W0 * W1


def _coideal_setup():
    pair = qoa_image()
    gens = {"W0": pair.W0, "W1": pair.W1}
    # words of degree <= 1 already contain every tensor factor of Delta(W_i)
    spanning = [x for _, x in words_up_to([pair.W0, pair.W1], 1)]
    return gens, spanning


def test_right_coideal_under_default_coproduct():
    gens, spanning = _coideal_setup()
    m1, m2 = evaluation_module(2, "v1"), evaluation_module(2, "v2")
    right = check_coideal_on_modules(gens, spanning, m1, m2, side="right")
    assert right.all_members and not right.vacuous
    assert right.span_dimension == 3 and right.ambient_dimension == 9
    # the left-hand factors include K1, which is not in the subalgebra
    left = check_coideal_on_modules(gens, spanning, m1, m2, side="left")
    assert not left.all_members
    assert left.to_dict()["convention"]["name"] == "default"


def test_left_coideal_under_opposite_coproduct():
    gens, spanning = _coideal_setup()
    m1, m2 = evaluation_module(2, "v1"), evaluation_module(2, "v2")
    rep = check_coideal_on_modules(gens, spanning, m1, m2, opposite_coproduct(), side="left")
    assert rep.all_members and not rep.vacuous


def test_coideal_rejects_finite_modules():
    gens, spanning = _coideal_setup()
    with pytest.raises(PresentationMismatch):
        check_coideal_on_modules(gens, spanning, irrep(1), irrep(1))
    with pytest.raises(ValueError):
        check_coideal_on_modules(gens, spanning, evaluation_module(1), evaluation_module(1), side="up")
