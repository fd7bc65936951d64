from fractions import Fraction

import pytest

from conftest import analyse
from nielsen.asymptotics import classify
from nielsen.averaging import ExactSeq
from nielsen.errors import NeedsMoreTerms
from nielsen.multiplicities import is_prime, multiplicity_table, primes_up_to
from nielsen.periods import (density_estimates, hper_inequality, hper_prime_family, hper_prime_powers, hper_primes,
                             orbit_lower_bound, period_report)
from nielsen.zeta import assemble_zeta, extract_spectrum, fit_recurrence

THREE = ExactSeq.of([3 ** k - 1 for k in range(1, 25)])
PERIODIC = ExactSeq.of([0 if k % 3 == 0 else 3 for k in range(1, 25)])
ZERO = ExactSeq.of([0] * 24)


def spectrum_of(s):
    fit = fit_recurrence(s)
    return extract_spectrum(fit, assemble_zeta(fit, s))


def test_hper_primes_three_power():
    certs = {c.period: c for c in hper_primes(multiplicity_table(ExactSeq.of([2, 8, 26])))}
    assert set(certs) == {2, 3}
    assert certs[2].witness == (3,) and certs[3].witness == (8,)
    assert certs[2].line() == "2,primeDold,3"


def test_hper_primes_periodic():
    certs = hper_primes(multiplicity_table(ExactSeq.of([3, 3, 0])))
    assert [(c.period, c.witness) for c in certs] == [(3, (-1,))]


def test_hper_primes_zero():
    assert hper_primes(multiplicity_table(ZERO)) == []


def test_inequality_examples():
    c = hper_inequality(THREE, 4)
    assert c is not None and c.witness == (8, 80)
    assert hper_inequality(PERIODIC, 3) is None
    assert hper_inequality(THREE, 1).witness == (0, 2)
    assert hper_inequality(ZERO, 1) is None
    # two prime divisors: N(f^3) + N(f^2) < N(f^6)
    assert hper_inequality(THREE, 6).witness == (26 + 8, 728)


def test_inequality_needs_terms():
    with pytest.raises(NeedsMoreTerms):
        hper_inequality(ExactSeq.of([2, 8]), 3)


def test_prime_powers_three_power():
    r = hper_prime_powers(THREE, multiplicity_table(THREE), 3.0)
    assert r.monotone == "strict" and r.cofinite.threshold == 0 and r.cofinite.verified_up_to == 24
    periods = {(c.period, c.kind) for c in r.certified}
    assert {(p, "primeDold") for p in primes_up_to(24)} <= periods
    assert {(4, "primePowerDold"), (8, "primePowerDold"), (9, "primePowerDold"), (16, "primePowerDold")} <= periods


def test_prime_powers_doubling():
    a = analyse("circle_doubling")
    r = hper_prime_powers(a.nseq, a.table, a.spectrum.lambda_of)
    assert r.monotone == "strict" and r.cofinite.threshold == 0


def test_prime_powers_bounded():
    r = hper_prime_powers(PERIODIC, multiplicity_table(PERIODIC), 1.0)
    assert r.certified == () and r.cofinite is None and "lambda(f)=1" in r.reason


def test_prime_powers_imply_positive_multiplicity(catalog_name):
    a = analyse(catalog_name)
    r = hper_prime_powers(a.nseq, a.table, a.spectrum.lambda_of)
    for c in r.certified:
        assert a.table.I[c.period - 1] > 0


def test_primes_agree_with_inequality(catalog_name):
    # for a prime p the inequality reads N(f) < N(f^p), that is I_p > 0
    a = analyse(catalog_name)
    for p in primes_up_to(a.K):
        by_ineq = hper_inequality(a.nseq, p) is not None
        assert by_ineq == (a.table.I[p - 1] > 0)
        if by_ineq:
            assert a.table.A[p - 1] != 0


def test_family_three_power():
    sp = spectrum_of(THREE)
    r = hper_prime_family(sp, classify(sp), THREE)
    assert (r.status, r.m, r.q) == ("verified", 1, 1)
    assert r.primes == tuple(primes_up_to(24)) and "divisor" in r.note


def test_family_klein_negative_r():
    a = analyse("klein_rm3")
    assert list(a.nseq.values[:4]) == [3 ** k - (-1) ** k for k in range(1, 5)]
    r = hper_prime_family(a.spectrum, classify(a.spectrum), a.nseq)
    assert r.status == "verified" and r.m == 1 and r.primes


def test_family_bounded_not_applicable():
    sp = spectrum_of(PERIODIC)
    assert hper_prime_family(sp, classify(sp), PERIODIC).status == "notApplicable"


def test_family_primes_really_in_progression(catalog_name):
    a = analyse(catalog_name)
    r = hper_prime_family(a.spectrum, classify(a.spectrum), a.nseq)
    if r.status == "notApplicable":
        return
    for p in r.primes + r.failures:
        assert is_prime(p) and p % r.q == 1 % r.q


def test_orbit_bound_three_power():
    sp = spectrum_of(THREE)
    r = orbit_lower_bound(sp, multiplicity_table(THREE), 20)
    assert r.status == "pass" and r.count == 20 and r.bound <= Fraction(20, 2)


def test_orbit_bound_doubling():
    a = analyse("circle_doubling")
    r = orbit_lower_bound(a.spectrum, a.table, 10)
    assert r.status == "pass" and r.count == 10


def test_orbit_bound_bounded():
    a = analyse("torus2_order3")
    assert orbit_lower_bound(a.spectrum, a.table, 10).status == "notApplicable"


def test_orbit_bound_dominates_on_catalog(catalog_name):
    a = analyse(catalog_name)
    r = orbit_lower_bound(a.spectrum, a.table, a.K)
    assert r.status in ("pass", "notApplicable")


def test_density_three_power():
    sp = spectrum_of(THREE)
    t = multiplicity_table(THREE)
    pp = hper_prime_powers(THREE, t, sp.lambda_of)
    d = density_estimates(t, 20, classify(sp), pp.cofinite, sp)
    assert d.da_lower == 1 and d.theorem_value == 1


def test_density_periodic():
    d = density_estimates(multiplicity_table(PERIODIC), 12)
    assert d.da_lower == Fraction(2, 12) and d.count == 2


def test_density_periodic_bounded_has_no_theorem_annotation():
    sp = spectrum_of(PERIODIC)
    d = density_estimates(multiplicity_table(PERIODIC), 12, classify(sp), None, sp)
    assert d.theorem_value is None and d.theorem_lower is None


def test_density_zero():
    assert density_estimates(multiplicity_table(ZERO)).da_lower == 0


def test_period_report_torus2():
    a = analyse("torus2_order3")
    rep = period_report(a.spectrum, classify(a.spectrum), a.nseq, a.table)
    periods = {c.period for c in rep.hper_certified}
    assert 3 in periods and 2 not in periods and 1 in periods
    assert rep.orbit_bound is None and rep.cofinite is None


def test_period_report_certificates_reproduce(catalog_name):
    a = analyse(catalog_name)
    rep = period_report(a.spectrum, classify(a.spectrum), a.nseq, a.table)
    for c in rep.hper_certified:
        if c.kind == "reducibilityInequality":
            assert hper_inequality(a.nseq, c.period) == c
        elif c.kind == "primePowerDold":
            assert c.witness == (a.table.I[c.period - 1],)
        else:
            assert c.witness == (a.table.A[c.period - 1],)
