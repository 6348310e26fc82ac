import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import oracles
from qonsager.certificates import CERTIFICATE_SCHEMA, Verdict, VerificationCertificate, weakest
from qonsager.coideal import QOAParams, augmented_image, qoa_image
from qonsager.errors import CarrierMismatch, MissingIndex
from qonsager.ncalg import bracket
from qonsager.onsager import (
    LoopElement,
    OnsagerFamily,
    augmented_constant,
    check_augmented,
    check_dolan_grady,
    check_q1_degeneration,
    check_qdg,
    check_second_presentation,
    classical_onsager_module,
    classical_sl2,
    loop_A,
    loop_family,
    loop_G,
)
from qonsager.scalars import Scalar, q
from qonsager.uqsl2 import evaluation_module, presentation

idx = st.integers(-6, 6)


@given(idx, idx)
def test_second_presentation_brackets(k, l):
    assert bracket(loop_A(k), loop_A(l)) == loop_G(k - l) * 4
    assert bracket(loop_G(l), loop_A(k)) == loop_A(k + l) * 2 - loop_A(k - l) * 2
    assert bracket(loop_G(k), loop_G(l)).is_zero()


@given(st.integers(0, 4), idx, idx, st.builds(Fraction, st.integers(1, 9), st.integers(1, 5)))
def test_realization_is_a_lie_map(n, k, l, t):
    a, b = loop_A(k) + loop_G(l), loop_A(l) * 3 - loop_G(k)
    lhs = bracket(a, b).realize(n, t)
    A, B = a.realize(n, t), b.realize(n, t)
    assert lhs == A * B - B * A


def test_classical_sl2_relations():
    for n in range(4):
        E, F, H = classical_sl2(n)
        assert E * F - F * E == H
        assert H * E - E * H == E * 2
        assert H * F - F * H == F * -2


def test_dolan_grady_loop_and_modules():
    cert = check_dolan_grady(loop_A(0), loop_A(1))
    assert cert.verdict is Verdict.VERIFIED and cert.engine == "loop"
    for n in (1, 2, 3):
        m = classical_onsager_module(n)
        assert check_dolan_grady(m["A0"], m["A1"]).ok


def test_dolan_grady_wrong_constant_fails():
    cert = check_dolan_grady(loop_A(0), loop_A(1), c=15)
    assert cert.verdict is Verdict.FAILED
    assert cert.residual and cert.residual[0]["kind"] == "loop"


def test_second_presentation_window():
    assert check_second_presentation(loop_family(3), 3).ok
    with pytest.raises(MissingIndex):
        check_second_presentation(loop_family(1), 2)


def test_perturbed_G1_is_caught():
    fam = loop_family(2)
    G = dict(fam.G)
    G[1] = G[1] + LoopElement.H()
    cert = check_second_presentation(OnsagerFamily(dict(fam.A), G), 2)
    assert cert.verdict is Verdict.FAILED
    assert any(r["relation"] == "[A_1,A_0]=4G_1" and r["terms"] == [[0, "0", "0", "-4"]] for r in cert.residual)


def test_loop_products_are_rejected():
    with pytest.raises(CarrierMismatch):
        loop_A(0) * loop_A(1)
    with pytest.raises(CarrierMismatch):
        check_dolan_grady(loop_A(0), evaluation_module(1)["e0"])


@pytest.mark.parametrize("n", [1, 2])
def test_qdg_symbolic(n):
    pair = qoa_image()
    cert = check_qdg(pair.W0, pair.W1, pair.rho, evaluation_module(n))
    assert cert.ok and cert.checked == ["qdg-W0", "qdg-W1"]


def test_qdg_against_dense_oracle():
    pt = dict(q=Fraction(5, 2), v=Fraction(-3), kp=Fraction(2, 7), km=Fraction(3), ep=Fraction(-1, 2), em=Fraction(4))
    for n in (1, 2, 3):
        W0, W1 = oracles.qoa_pair(n, pt["q"], pt["v"], pt["kp"], pt["km"], pt["ep"], pt["em"])
        rho = (pt["q"] + 1 / pt["q"]) ** 2 * pt["kp"] * pt["km"]
        assert all(oracles.is_zero(r) for r in oracles.qdg_residuals(W0, W1, pt["q"], rho))
        m = evaluation_module(n)
        pair = qoa_image()
        binding = {"q": pt["q"], "v": pt["v"], "k+": pt["kp"], "k-": pt["km"], "e+": pt["ep"], "e-": pt["em"]}
        assert m.represent(pair.W0).evaluate(binding) == W0
        assert m.represent(pair.W1).evaluate(binding) == W1


def test_qdg_wrong_rho_fails_with_residual():
    pair = qoa_image()
    cert = check_qdg(pair.W0, pair.W1, 1, evaluation_module(1))
    assert cert.verdict is Verdict.FAILED
    assert {r["relation"] for r in cert.residual} == {"qdg-W0", "qdg-W1"}


def test_qdg_rewrite_carrier():
    W0, W1 = presentation("q_onsager").alphabet.letters("W0", "W1")
    rho = (q + q**-1) ** 2 * Scalar.var("k+") * Scalar.var("k-")
    cert = check_qdg(W0, W1, rho, presentation("q_onsager"))
    assert cert.ok and cert.engine == "rewrite"
    bad = check_qdg(W0, W1, rho + 1, presentation("q_onsager"))
    assert bad.verdict is Verdict.INCONCLUSIVE


def test_augmented_constant():
    assert augmented_constant() == (q**2 + 1 + q**-2) * (q**2 - q**-2) ** 3


@pytest.mark.parametrize("n", [1, 2])
def test_augmented_symbolic(n):
    cert = check_augmented(*augmented_image().as_tuple(), carrier=evaluation_module(n))
    assert cert.ok and len(cert.checked) == 7


def test_augmented_against_dense_oracle():
    qq, v, ep, em = Fraction(3), Fraction(2, 5), Fraction(-7, 3), Fraction(1, 2)
    K0, K1, Z1, Zt1 = oracles.augmented_quad(1, qq, v, ep, em)
    m = evaluation_module(1)
    pt = {"q": qq, "v": v, "e+": ep, "e-": em}
    mats = [m.represent(x).evaluate(pt) for x in augmented_image().as_tuple()]
    assert mats == [K0, K1, Z1, Zt1]
    c = (qq**3 - qq**-3) * (qq**2 - qq**-2) ** 3 / (qq - 1 / qq)
    lhs = oracles.nested(Z1, Zt1, qq)
    mid = oracles.mat_add(oracles.mat_mul(K1, K1), oracles.mat_mul(K0, K0), -1)
    rhs = oracles.mat_scale(oracles.mat_mul(oracles.mat_mul(Z1, mid), Z1), c)
    assert lhs == rhs


def test_wrong_exchange_power_fails():
    from qonsager.matrix import Matrix
    from qonsager.uqsl2 import irrep

    m = irrep(1)
    K = Matrix.diag([q, q**-1])
    cert = check_augmented(K, K, m["E"], m["F"])
    assert cert.verdict is Verdict.FAILED
    assert "exch-K0Z1" in {r["relation"] for r in cert.residual}


def test_q1_degeneration():
    for n in (1, 2):
        cert = check_q1_degeneration(n)
        assert cert.ok, cert.residual
        assert cert.metadata["rho_at_q1"] == "4"


def test_certificate_json_round_trip():
    cert = check_dolan_grady(loop_A(0), loop_A(1), c=15)
    again = VerificationCertificate.from_json(cert.to_json())
    assert again.to_dict() == cert.to_dict()
    doc = json.loads(cert.to_json(reproducible=True))
    assert doc["timestamp"] is None
    for key in CERTIFICATE_SCHEMA["required"]:
        assert key in doc


def test_weakest():
    V, F, I = Verdict.VERIFIED, Verdict.FAILED, Verdict.INCONCLUSIVE
    assert weakest([]) is V
    assert weakest([V, I]) is I
    assert weakest([I, F, V]) is F


def test_qoa_params_bindings():
    p = QOAParams.from_bindings({"k+": Fraction(1, 2), "e-": "q"})
    assert p.k_plus == Scalar(Fraction(1, 2)) and p.eps_minus == q
    assert qoa_image(p).rho == (q + q**-1) ** 2 * Scalar.var("k-") / 2
