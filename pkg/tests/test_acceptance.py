"""Acceptance criteria, one test per numbered criterion.

The terminal summary (see conftest.py) prints one PASS/FAIL line for each.
Run just this file with ``pytest tests/test_acceptance.py``.
"""

import io
import json
import math
import time
from contextlib import redirect_stdout
from fractions import Fraction as F

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from midshift import cli
from midshift.certify import certify_k_hyponormal, certify_mid, diagram_check, flatness_rigidity_check
from midshift.completion import (agler_subshift_completion, che_three_weight_test, gap_ratio,
                                 stampfli_completion, trivial_completion)
from midshift.measures import BergerMeasure, moment_match, shift_from_measure, two_atomic, uniform
from midshift.scalar import sqrt
from midshift.seq_core import Sequence, forward_diff, log_diff, log_diff_sign
from midshift.shift_model import (agler, agler_family, bergman, constant, dirichlet,
                                  from_log_weight_squared, geom2, is_flat, quotient_shift,
                                  schur_product, subshift, unweighted)
from midshift.transforms import aluthge, aluthge_q, inverse_aluthge

PI = math.pi

# initial weights of the Agler pre-images, k = 2..14
AGLER_PREIMAGE_ALPHA0 = [
    2 / PI, 1 / 2, 4 / (3 * PI), 3 / 8, 16 / (15 * PI), 5 / 16, 32 / (35 * PI), 35 / 128,
    256 / (315 * PI), 63 / 256, 512 / (693 * PI), 231 / 1024, 2048 / (3003 * PI),
]


def run_cli(*argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        status = cli.main(list(argv))
    return status, buf.getvalue()


def catalog_shifts():
    return [bergman(), agler(3), agler(4), agler(5), agler(6), agler_family(F(5, 2)), dirichlet(),
            geom2(), unweighted(), constant(F(1, 2))]


@pytest.mark.acceptance(1, "Agler pre-image table k=2..14 (closed form 1e-10, numeric limit 1e-6, < 10 s)")
def test_ac01_agler_preimage_table():
    t0 = time.perf_counter()
    status, out = run_cli("table-prop417", "--k", "2..14", "--format", "structured")
    elapsed = time.perf_counter() - t0
    assert status == 0
    rows = json.loads(out)["result"]["rows"]
    assert [r["k"] for r in rows] == list(range(2, 15))
    for r, want in zip(rows, AGLER_PREIMAGE_ALPHA0):
        assert abs(r["closed_form"] / want - 1) <= 1e-10
        assert abs(r["numeric_limit"] / want - 1) <= 1e-6
    assert [r["alpha0"] for r in rows[:6]] == ["2/π", "1/2", "4/(3π)", "3/8", "16/(15π)", "5/16"]
    assert elapsed < 10


@pytest.mark.acceptance(2, "Bergman pre-image: first five weights to 1e-8")
def test_ac02_bergman_preimage():
    r = inverse_aluthge(bergman())
    want = [2 / PI, PI / 4, 8 / (3 * PI), 9 * PI / 32, 128 / (45 * PI)]
    got = [float(r.shift.weight(n)) for n in range(5)]
    assert r.alpha0_source == "numeric_limit"
    assert all(abs(g - w) <= 1e-8 for g, w in zip(got, want))


@pytest.mark.acceptance(3, "geom2 pre-image: automatic alpha0 = 0.7421267409 +- 1e-8")
def test_ac03_geom2_alpha0():
    assert abs(inverse_aluthge(geom2()).alpha0 - 0.7421267409) <= 1e-8


@pytest.mark.acceptance(4, "AT(Bergman) fourth powers of weights equal (n+1)/(n+3) exactly, n <= 200")
def test_ac04_aluthge_bergman_exact():
    at = aluthge(bergman())
    for n in range(201):
        w2 = at.weight_squared(n)
        w4 = w2 * w2
        assert isinstance(w4, F)
        assert w4 == F(n + 1, n + 3)


@pytest.mark.acceptance(5, "LT_gamma(n+1,k) + 2 LT_alpha(n,k) = 0 on catalog shifts, n <= 8, k <= 30")
def test_ac05_log_identity():
    for s in catalog_shifts():
        g, w = s.moment_sequence(), s.weight_sequence()
        for n in range(1, 9):
            for k in range(31):
                sg, dg = log_diff_sign(g, n + 1, k)
                sw, dw = log_diff_sign(w, n, k)
                assert dg and dw, (s.label, n, k)
                assert sg == -sw, (s.label, n, k)
                assert abs(log_diff(g, n + 1, k) + 2 * log_diff(w, n, k)) <= 1e-10


@pytest.mark.acceptance(6, "Agler-family differences match (1-s) m! / prod (s+n+i) exactly")
def test_ac06_agler_family_differences():
    for s in (F(2), F(3), F(5, 2), F(73, 10)):
        seq = Sequence(lambda j, s=s: (j + 1) / (s + j))
        for m in range(1, 9):
            for n in range(21):
                want = (1 - s) * math.factorial(m) / math.prod(s + n + i for i in range(m + 1))
                got = forward_diff(seq, m, n)
                assert isinstance(got, F) and got == want


@pytest.mark.acceptance(7, "MID certification suite at (N=8, K=40), dirichlet fails at (1,0), < 30 s")
def test_ac07_mid_suite():
    t0 = time.perf_counter()
    passing = [agler(k) for k in range(2, 7)] + [
        geom2(), quotient_shift(bergman(), 1), subshift(agler(3), 2, 1),
        schur_product(agler(2), agler(3)), aluthge_q(bergman(), F(1, 3))]
    for s in passing:
        assert certify_mid(s, 8, 40).verdict == "pass", s.label
    c = certify_mid(dirichlet(), 8, 40)
    assert c.verdict == "fail"
    assert (c.witness["n"], c.witness["k"]) == (1, 0)
    assert time.perf_counter() - t0 < 30


@pytest.mark.acceptance(8, "quotient(1, bergman) moments equal 1/(2(n+1)) + 1/2 exactly, n <= 50")
def test_ac08_quotient_measure():
    q = quotient_shift(bergman(), 1)
    for n in range(51):
        assert q.moment(n) == F(1, 2 * (n + 1)) + F(1, 2)
    mu = BergerMeasure(((F(1), F(1, 2)),), uniform(F(1, 2)))
    assert moment_match(mu, q, upTo=50).passed


@pytest.mark.acceptance(9, "gap ratio closed forms agree on m <= 30, n <= 30, delta <= 10; (3,1,2) gives 1/2")
def test_ac09_gap_lemma():
    for m in range(2, 31):
        for n in range(31):
            for d in range(1, 11):
                g = gap_ratio(m, n, d)
                assert (1 - g.q) / (1 - 2 * g.p + g.q) == F(m + n, 2 * d + m + n) == g.ratio
    assert gap_ratio(3, 1, 2).ratio == F(1, 2)


@pytest.mark.acceptance(10, "non-flat completion of (0.37, 0.61) within 1e-3, MID, ratio bound, < 5 s")
def test_ac10_nonflat_completion():
    t0 = time.perf_counter()
    g = agler_subshift_completion(0.37, 0.61, 1e-3)
    s = g.shift
    assert certify_mid(s, 8, 40).verdict == "pass"
    assert not is_flat(s, 40)
    assert abs(float(s.weight_squared(0)) - 0.37) <= 1e-3
    assert abs(float(s.weight_squared(1)) - 0.61) <= 1e-3
    assert g.gap_ratio >= F(39, 87) - F(1, 1000)
    assert time.perf_counter() - t0 < 5


@pytest.mark.acceptance(11, "three-weight test: Agler-3 triple fails (i) with value 1/3; (0.4, 0.7, 0.8) passes")
def test_ac11_che_three_weights():
    r = che_three_weight_test(sqrt(F(1, 3)), sqrt(F(2, 4)), sqrt(F(3, 5)))
    assert not r.cond_i and r.value_i == F(1, 3)
    r = che_three_weight_test(0.4, 0.7, 0.8, squared=True)
    assert r.cond_i and r.cond_ii and r.sufficient


@pytest.mark.acceptance(12, "Stampfli (1/2, sqrt(1/2), 1): phi0, phi1, gamma_4, LT_gamma(3,0)=0, non-flat, 2-hyponormal")
def test_ac12_stampfli():
    s = stampfli_completion(F(1, 2), sqrt(F(1, 2)), 1)
    assert s.phi0 == F(-1, 4) and s.phi1 == F(3, 2)
    assert s.moment(4) == F(5, 32)
    assert log_diff_sign(s.moment_sequence(), 3, 0) == (0, True)
    assert not is_flat(s, 40)
    assert certify_k_hyponormal(s, 2, 20).verdict == "pass"


@pytest.mark.acceptance(13, "Hankel: Bergman PSD for k <= 4, n <= 40 (exact); Dirichlet fails at k=1, n=0, det -1")
def test_ac13_hankel():
    for k in range(1, 5):
        c = certify_k_hyponormal(bergman(), k, 40)
        assert c.verdict == "pass" and c.arithmetic_mode == "exact"
    c = certify_k_hyponormal(dirichlet(), 1, 5)
    assert c.verdict == "fail"
    assert c.witness["n"] == 0 and c.witness["value"] == -1


@pytest.mark.acceptance(14, "flatness rigidity: no MID shift with a vanishing LT_alpha is non-flat")
def test_ac14_flatness_rigidity():
    shifts = catalog_shifts() + [
        trivial_completion(F(1, 4), F(1, 2)), shift_from_measure(two_atomic(F(1, 2), F(1, 2))),
        quotient_shift(bergman(), 1), subshift(agler(3), 2, 1), aluthge(bergman()),
        stampfli_completion(F(1, 2), sqrt(F(1, 2)), 1)]
    alarms = []
    saw_zero = False
    for s in shifts:
        r = flatness_rigidity_check(s, 8, 30, tol=1e-12)
        saw_zero = saw_zero or (r.mid.verdict == "pass" and bool(r.zeros))
        if r.alarm:
            alarms.append(s.label)
    assert saw_zero  # the check is not vacuous
    assert alarms == []


def _cm_atoms():
    atom = st.tuples(st.integers(0, 12), st.integers(1, 12))
    return st.lists(atom, min_size=1, max_size=3)


@pytest.mark.acceptance(15, "diagram consistency on 1000 random log-CA weight sequences, < 60 s")
def test_ac15_diagram_random():
    count = 0

    @settings(max_examples=1000, deadline=None, database=None, derandomize=True,
              suppress_health_check=list(HealthCheck))
    @given(_cm_atoms())
    def check(atoms):
        nonlocal count
        # c_n = sum m t^n is completely monotone; weights^2 = exp(-c_n) are log CA
        pts = [(F(t, 12), F(m, 6)) for t, m in atoms]

        def log_w2(n):
            return -sum(m * t**n for t, m in pts)

        s = from_log_weight_squared(log_w2, label=f"exp(-cm{pts})")
        r = diagram_check(s, 6, 20)
        assert r.weights_logCA.passed and r.moments_logCM.passed and r.moments_CM.passed
        count += 1

    t0 = time.perf_counter()
    check()
    assert time.perf_counter() - t0 < 60
    assert count >= 1000
