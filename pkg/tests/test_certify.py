import itertools
import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from midshift.certify import (Certificate, InternalConsistencyError, _check_agreement, bareiss_det,
                              certify_che, certify_k_hyponormal, certify_mid, certify_n_contractive,
                              diagram_check, flatness_rigidity_check, float_psd, hankel,
                              is_contraction, ldl_psd, log_weight_zeros, principal_minors_psd)
from midshift.completion import stampfli_completion
from midshift.measures import BergerMeasure, shift_from_measure, two_atomic, uniform
from midshift.scalar import sqrt
from midshift.seq_core import PropertyVerdict
from midshift.shift_model import (agler, agler_family, bergman, constant, dirichlet,
                                  from_log_weight_squared, from_prefix, geom2, normalize,
                                  quotient_shift, reciprocal, scale, schur_power, schur_product,
                                  subshift, unweighted)
from midshift.transforms import aluthge, aluthge_iter

small = st.integers(-4, 4)


def laplace_det(m):
    if len(m) == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * laplace_det([row[:j] + row[j + 1:] for row in m[1:]])
               for j in range(len(m)))


@st.composite
def symmetric_matrices(draw, max_size=4):
    n = draw(st.integers(1, max_size))
    if draw(st.booleans()):
        # B^T B with a possibly rank-deficient B: PSD and often singular
        r = draw(st.integers(0, n))
        b = [[F(draw(small)) for _ in range(n)] for _ in range(r)]
        return [[sum((b[k][i] * b[k][j] for k in range(r)), F(0)) for j in range(n)] for i in range(n)]
    a = [[F(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            a[i][j] = a[j][i] = F(draw(small), draw(st.integers(1, 3)))
    return a


@settings(max_examples=300)
@given(symmetric_matrices())
def test_ldl_matches_principal_minors(a):
    ok, pivot = ldl_psd(a)
    assert ok == principal_minors_psd(a)
    assert (pivot is None) == ok


@given(symmetric_matrices())
def test_bareiss_matches_laplace(a):
    assert bareiss_det(a) == laplace_det(a)


def test_ldl_zero_pivot_rule():
    assert ldl_psd([[F(0), F(0)], [F(0), F(1)]]) == (True, None)
    assert ldl_psd([[F(0), F(1)], [F(1), F(1)]]) == (False, 0)
    assert ldl_psd([[F(1), F(2)], [F(2), F(3)]]) == (False, 1)


def test_float_psd():
    assert float_psd(np.eye(3))[0] == "pass"
    assert float_psd(np.array([[1.0, 0.0], [0.0, -1e-12]]))[0] == "marginal"
    outcome, lo = float_psd(np.array([[1.0, 2.0], [2.0, 3.0]]))
    assert outcome == "fail" and lo < 0


def test_hankel_examples():
    h = hankel(bergman(), 0, 1)
    assert h.entries == ((1, F(1, 2)), (F(1, 2), F(1, 3)))
    d = hankel(dirichlet(), 0, 1)
    assert d.entries == ((1, 2), (2, 3))
    assert bareiss_det(d.as_fraction()) == -1
    assert hankel(geom2(), 0, 0).entry(0, 0) == 1
    h = hankel(agler(3), 4, 3)
    for i in range(4):
        for j in range(4):
            assert h.entry(i, j) == h.entry(j, i) == agler(3).moment(4 + i + j)
    with pytest.raises(ValueError):
        hankel(bergman(), -1, 1)


def test_k_hyponormal_examples():
    assert certify_k_hyponormal(bergman(), 3, 20).verdict == "pass"
    c = certify_k_hyponormal(dirichlet(), 1, 5)
    assert c.verdict == "fail" and c.witness["n"] == 0 and c.witness["value"] == -1
    st_shift = stampfli_completion(F(1, 2), sqrt(F(1, 2)), 1)
    assert certify_k_hyponormal(st_shift, 2, 20).verdict == "pass"
    with pytest.raises(ValueError):
        certify_k_hyponormal(bergman(), 0)


def test_k_hyponormal_float_mode():
    c = certify_k_hyponormal(agler(3), 2, 10, exact=False)
    assert c.passed and c.arithmetic_mode == "float"
    c = certify_k_hyponormal(dirichlet(), 1, 3, exact=False)
    assert c.verdict == "fail" and c.details["witness_kind"] == "min_eigenvalue"


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 6), st.integers(1, 6)), min_size=1, max_size=3))
def test_measure_shifts_are_k_hyponormal(raw):
    total = sum(m for _, m in raw)
    atoms = [(F(t, 6), F(m, 2 * total)) for t, m in raw]
    s = shift_from_measure(BergerMeasure(atoms, uniform(F(1, 2))))
    assert certify_k_hyponormal(s, 3, 10).verdict == "pass"


def test_mid_examples():
    assert certify_mid(agler(3)).verdict == "pass"
    assert certify_mid(geom2()).verdict == "pass"
    c = certify_mid(dirichlet())
    assert c.verdict == "fail" and (c.witness["n"], c.witness["k"]) == (1, 0)
    assert c.notes  # Dirichlet is not a contraction
    assert c.details["moments_log_monotone"] == "fail"


def test_mid_float_mode():
    c = certify_mid(bergman(), 6, 20, exact=False)
    assert c.verdict == "pass" and c.arithmetic_mode == "float"


def test_certificate_invariants():
    with pytest.raises(ValueError):
        Certificate("x", "mid", {}, "fail")
    with pytest.raises(ValueError):
        Certificate("x", "mid", {}, "pass", {"n": 1})
    with pytest.raises(ValueError):
        Certificate("x", "mid", {}, "maybe")
    d = certify_mid(dirichlet(), 2, 3).to_dict()
    assert isinstance(d["witness"]["value"], float) and d["witness"]["value"] > 0
    assert set(d) == {"subject", "claim", "bounds", "verdict", "witness", "arithmetic_mode", "details",
                      "notes"}


def test_agreement_guard_detects_mismatch():
    s = bergman()
    fake_fail = PropertyVerdict("log_alternating", 2, 2, False, (1, 0, F(1)))
    real_pass = PropertyVerdict("log_monotone", 3, 2, True)
    with pytest.raises(InternalConsistencyError):
        _check_agreement(s, fake_fail, real_pass)
    _check_agreement(s, PropertyVerdict("log_alternating", 2, 2, True), real_pass)


def test_contractive_and_che_examples():
    assert certify_n_contractive(bergman(), 8, 40).verdict == "pass"
    assert certify_n_contractive(unweighted()).verdict == "pass"
    with pytest.warns(UserWarning):
        c = certify_n_contractive(dirichlet(), 1, 0)
    assert c.verdict == "fail" and c.witness["value"] == -1
    assert certify_che(dirichlet(), 8, 40).verdict == "pass"
    c = certify_che(bergman())
    assert c.verdict == "fail" and (c.witness["n"], c.witness["k"]) == (1, 0)
    assert certify_che(unweighted()).verdict == "pass"


def test_is_contraction():
    assert is_contraction(bergman())
    assert not is_contraction(dirichlet())
    assert is_contraction(normalize(dirichlet()))


MID_SHIFTS = [bergman(), agler(3), agler(4), geom2(), unweighted(), constant(F(1, 2)),
              quotient_shift(bergman(), 1), agler_family(F(5, 2))]
ALL_SHIFTS = MID_SHIFTS + [dirichlet(), from_prefix([F(9, 10)], bergman())]


@pytest.mark.parametrize("s", ALL_SHIFTS, ids=str)
@pytest.mark.parametrize("c", [F(1, 2), F(2)], ids=str)
def test_scaling_invariance(s, c):
    base = certify_mid(s, 8, 30).verdict
    assert certify_mid(normalize(scale(s, c)), 8, 30).verdict == base


@pytest.mark.parametrize("pair", list(itertools.combinations(MID_SHIFTS[:5], 2)), ids=str)
def test_schur_closure(pair):
    assert certify_mid(schur_product(*pair), 8, 40).verdict == "pass"


@pytest.mark.parametrize("s", MID_SHIFTS, ids=str)
@pytest.mark.parametrize("p", [F(1, 2), F(2)], ids=str)
def test_schur_power_closure(s, p):
    assert certify_mid(schur_power(s, p), 8, 40).verdict == "pass"


@pytest.mark.parametrize("k,p,j", list(itertools.product([2, 3, 4], [2, 3], [0, 1])))
def test_subshift_closure(k, p, j):
    assert certify_mid(subshift(agler(k), p, j), 8, 40).verdict == "pass"


@pytest.mark.parametrize("s", ALL_SHIFTS, ids=str)
def test_aluthge_equivalence(s):
    base = certify_mid(s, 8, 30).passed
    assert certify_mid(aluthge(s), 8, 30).passed == base
    assert certify_mid(schur_power(s, F(1, 2)), 8, 30).passed == base


@pytest.mark.parametrize("s", [bergman(), agler(3), dirichlet(), geom2()], ids=str)
def test_iterated_aluthge_equivalence(s):
    base = certify_mid(s, 6, 20).passed
    for m in (2, 3):
        assert certify_mid(aluthge_iter(s, m), 6, 20).passed == base


@pytest.mark.parametrize("s", ALL_SHIFTS, ids=str)
def test_hankel_implies_contractive(s):
    if certify_k_hyponormal(s, 4, 40).passed and is_contraction(s):
        assert certify_n_contractive(s, 8, 40).passed


def test_reciprocal_bridge():
    r = reciprocal(dirichlet())
    for n in range(40):
        assert r.weight_squared(n) == bergman().weight_squared(n)
    assert certify_che(dirichlet()).passed
    assert certify_mid(bergman()).passed


def test_diagram_examples():
    for s in (bergman(), quotient_shift(bergman(), 1)):
        r = diagram_check(s, 8, 40)
        assert all(r.verdicts().values())
        assert r.contraction and r.extension == 10
    r = diagram_check(dirichlet(), 8, 40)
    assert not any(r.verdicts().values())
    for v in (r.weights_CA, r.weights_logCA, r.moments_logCM, r.moments_CM):
        assert v.witness[0] in (1, 2)
    d = r.to_dict()
    assert d["weights_CA"]["verdict"] == "fail" and d["weights_CA"]["witness"]["n"] == 1


TWO_ATOMIC = shift_from_measure(two_atomic(F(1, 2), F(1, 2)))


@pytest.mark.parametrize("s", ALL_SHIFTS + [aluthge(bergman()), TWO_ATOMIC], ids=str)
def test_diagram_consistent_on_catalog(s):
    diagram_check(s, 6, 20)


def test_log_ca_but_not_ca():
    # weights² exp(-2^(1-n)): e^-2 - 2e^-1 + e^-1/2 > 0 breaks CA at order 2
    s = from_log_weight_squared(lambda n: -2 * F(1, 2) ** n, label="exp(-2^(1-n))")
    r = diagram_check(s, 8, 30)
    assert not r.weights_CA.passed and r.weights_CA.witness[:2] == (2, 0)
    assert math.isclose(r.weights_CA.witness[2], math.exp(-2) - 2 * math.exp(-1) + math.exp(-0.5))
    assert r.weights_logCA.passed and r.moments_logCM.passed and r.moments_CM.passed


def test_flatness_examples():
    two = flatness_rigidity_check(TWO_ATOMIC, 8, 30)
    assert (1, 1) in two.zeros and two.flat and not two.alarm and two.mid.passed
    b = flatness_rigidity_check(bergman(), 8, 30)
    assert b.zeros == [] and not b.alarm
    s = stampfli_completion(F(1, 2), sqrt(F(1, 2)), 1)
    r = flatness_rigidity_check(s, 8, 30)
    assert not r.mid.passed and not r.flat and not r.alarm
    assert r.to_dict()["mid_verdict"] == "fail"


def test_log_weight_zeros_float_mode():
    z = log_weight_zeros(TWO_ATOMIC, 3, 5, exact=False)
    assert (1, 1) in z and (1, 0) not in z
