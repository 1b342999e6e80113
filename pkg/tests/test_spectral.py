import numpy as np
import pytest

from isturm import (FullProblem, Polynomial, ProblemL, SigmaZero, SpectralData,
                    detect_M1, eval_partial_fraction, group_multiplicities,
                    reduce_weyl, weyl_M, weyl_M1)
from isturm.errors import AmbiguousOffset, AtPole, DenominatorZero
from isturm.model import ModelData
from isturm.spectral import (EigenRecord, WeylPartialFraction,
                             spectral_data_from_json, spectral_data_to_json)

PI = np.pi
rng = np.random.default_rng(4)


def test_group_multiplicities_model_pattern():
    I, m = group_multiplicities([0, 0, 1, 4])
    assert I == [1, 3, 4]
    assert m[1] == 2 and m[3] == 1 and m[4] == 1


def test_group_multiplicities_distinct():
    I, m = group_multiplicities([1, 2, 3])
    assert I == [1, 2, 3]
    assert all(v == 1 for v in m.values())


def test_group_multiplicities_triple():
    I, m = group_multiplicities([1, 1, 1, 4])
    assert I == [1, 4]
    assert m[1] == 3


def test_detect_M1_integer_offset():
    rho = np.arange(1, 31) - 2.0
    sd = SpectralData.from_flat(np.maximum(rho, 0) ** 2 * 0 + rho**2,
                                np.full(30, 2 / PI))
    # use explicit records to keep rho signs: construct directly
    m1, case = detect_M1([EigenRecord(lam=r**2, rho=r, multiplicity=1, alpha_coeffs=(1,))
                          for r in rho])
    assert (m1, case) == (1, "M1=M2")


def test_detect_M1_half_offset():
    rho = np.arange(1, 31) - 2.5
    m1, case = detect_M1([EigenRecord(lam=r**2, rho=r, multiplicity=1, alpha_coeffs=(1,))
                          for r in rho])
    assert (m1, case) == (1, "M1=M2-1")


def test_detect_M1_ambiguous():
    rho = np.arange(1, 31) - 1.25
    with pytest.raises(AmbiguousOffset):
        detect_M1([EigenRecord(lam=r**2, rho=r, multiplicity=1, alpha_coeffs=(1,))
                   for r in rho])


def test_detect_M1_forward_data(step_poly_sd40):
    _, sd = step_poly_sd40
    assert detect_M1(sd) == (1, "M1=M2")


def test_reduce_weyl_identity():
    m1 = lambda lam: 1.0 / (lam - 2.0)
    for lam in (0.3, 5 + 1j):
        assert abs(reduce_weyl(m1, Polynomial([1]), Polynomial([0]), lam)
                   - m1(np.asarray(lam))) < 1e-15


def test_reduce_weyl_rational():
    m1 = lambda lam: 1.0 / (lam - 2.0)
    # p1 = lam, p2 = 1: M = lam/(lam-2) / ((lam-1)/(lam-2)) = lam/(lam-1)
    for lam in (0.5, 3.0, 2.5 + 1j):
        got = reduce_weyl(m1, Polynomial([0, 1]), Polynomial([1]), lam)
        assert abs(got - lam / (lam - 1)) < 1e-12


def test_reduce_weyl_forward_oracle(robin_sd25):
    prob, _ = robin_sd25
    p1, p2 = Polynomial([1]), Polynomial([0])
    m1 = lambda lam: weyl_M1(prob, p1, p2, lam, 1024)
    lams = rng.normal(scale=3, size=20) + 1j * (1 + np.abs(rng.normal(size=20)))
    got = reduce_weyl(m1, p1, p2, lams)
    want = weyl_M(prob, lams, 1024)
    np.testing.assert_allclose(got, want, atol=1e-8)


def test_reduce_weyl_inverse_moebius():
    # solve M = p1 M1 / (1 + p2 M1) for M1 and compose back
    p1, p2 = Polynomial([1, 1]), Polynomial([2])
    m1 = lambda lam: 0.3 / (lam - 1.5) + 0.1
    for lam in (0.2, 4.4, 1 + 2j):
        m = reduce_weyl(m1, p1, p2, lam)
        from isturm.problem import poly_eval
        m1_back = m / (poly_eval(p1, lam) - poly_eval(p2, lam) * m)
        assert abs(m1_back - m1(np.asarray(lam))) < 1e-10


def test_reduce_weyl_denominator_zero():
    m1 = lambda lam: np.asarray(-1.0 + 0 * lam)
    with pytest.raises(DenominatorZero):
        reduce_weyl(m1, Polynomial([1]), Polynomial([1]), 1.0)


def test_partial_fraction_model_tail():
    md = ModelData(0)
    pf = WeylPartialFraction(md.spectral_data(40), md)
    got = eval_partial_fraction(pf, -1.0, 2000)
    want = -np.cosh(PI) / np.sinh(PI)  # closed form at rho = i
    assert abs(got - want) < 2e-3


def test_partial_fraction_single_record():
    sd = SpectralData.from_flat([2.0], [1.0])
    pf = WeylPartialFraction(sd, ModelData(0))
    assert abs(eval_partial_fraction(pf, 3.0, 1) - 1.0) < 1e-15


def test_partial_fraction_double_pole():
    sd = SpectralData.from_flat([0.0, 0.0], [0.0, 1.0])
    pf = WeylPartialFraction(sd, ModelData(0))
    assert abs(eval_partial_fraction(pf, 2.0, 2) - 0.25) < 1e-15


def test_partial_fraction_at_pole():
    sd = SpectralData.from_flat([2.0], [1.0])
    pf = WeylPartialFraction(sd, ModelData(0))
    with pytest.raises(AtPole):
        eval_partial_fraction(pf, 2.0 + 1e-10, 1)


def test_partial_fraction_vs_weyl_M(robin_sd25):
    prob, sd = robin_sd25
    pf = WeylPartialFraction(sd, ModelData(0))
    lam = -2.0 + 1.0j  # distance >= 1 from the spectrum
    got = eval_partial_fraction(pf, lam, 4000)
    want = weyl_M(prob, lam, 1024)
    assert abs(got - want) < 5.0 / 4000 + 2e-3  # tail-bound scale


def test_spectral_json_roundtrip():
    md = ModelData(1)
    sd = md.spectral_data(6)
    data = spectral_data_to_json(sd)
    back = spectral_data_from_json(data)
    np.testing.assert_allclose(back.lam, sd.lam)
    np.testing.assert_allclose(back.alpha, sd.alpha)
    assert back.sizes == sd.sizes
    assert back.m1 == 1


def test_truncation_keeps_clusters():
    md = ModelData(2)
    sd = md.spectral_data(10)
    with pytest.raises(ValueError):
        sd.truncated(2)  # would split the triple cluster
    assert sd.truncated(5).K == 5
