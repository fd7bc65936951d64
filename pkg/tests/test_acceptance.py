"""Acceptance criteria 1 to 10, one recorded PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v``; the lines are repeated in the
terminal summary under "acceptance criteria".
"""

import random
import time
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, CATALOG_NAMES, analyse, cofactor_det, exp_series, naive_power
from nielsen.algebra import QPoly, parse_ratfunc
from nielsen.asymptotics import classify, nonvanishing_window
from nielsen.averaging import both_seqs, nielsen_seq
from nielsen.errors import NielsenError
from nielsen.manifold import MapSpec, catalog_lookup
from nielsen.multiplicities import (dold, euler_check, gauss_check, mod2_profile, multiplicity_table,
                                    parity_theorem_check, primes_up_to, trace_congruences)
from nielsen.periods import hper_inequality, hper_prime_powers, hper_primes, period_report
from nielsen.zeta import (assemble_zeta, build_trace_model, default_dmax, extract_spectrum, fit_recurrence,
                          radius_report, required_terms, trace_sequence)


def record(n: int, ok: bool, detail: str):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def fresh(spec, K=None):
    need = required_terms(default_dmax(spec.dim, spec.order), 8)
    K = max(K or 0, need)
    nseq = nielsen_seq(spec, K)
    fit = fit_recurrence(nseq)
    zeta = assemble_zeta(fit, nseq)
    return nseq, fit, zeta, extract_spectrum(fit, zeta)


def sp_numpy(rows) -> float:
    # independent of the package root finder
    prod = 1.0
    for mu in np.linalg.eigvals(np.array(rows, dtype=float)):
        if abs(mu) > 1 + 1e-9:
            prod *= abs(mu)
    return prod


def bisect_largest_root(coeffs, lo, hi):
    f = lambda t: sum(c * t ** i for i, c in enumerate(coeffs))  # noqa: E731
    with mpmath.workdps(40):
        a, b = mpmath.mpf(lo), mpmath.mpf(hi)
        assert f(a) * f(b) < 0
        for _ in range(200):
            m = (a + b) / 2
            if f(a) * f(m) <= 0:
                b = m
            else:
                a = m
        return float((a + b) / 2)


# -- 1. Klein bottle table ----------------------------------------------------

# (alias, row label, table N(f^k), table N_f(z)); closed forms read off the table with (q, r) substituted
KLEIN_ROWS = [
    ("klein_r1", "r=1 (q=2)", lambda k: 0, "1"),
    ("klein_qr_pos", "r odd, qr>0 (r=3, q=2)", lambda k: 6 ** k - 2 ** k, "(1 - 2z)/(1 - 6z)"),
    ("klein_qr_neg", "r odd, qr<0 (r=3, q=-2)", lambda k: 6 ** k - 2 ** k, "(1 - 2z)/(1 - 6z)"),
    ("klein_r0", "q=0, r=0", lambda k: 1, "1/(1 - z)"),
    ("klein_r3", "q=0, r>0 (r=3)", lambda k: 3 ** k - 1, None),
    ("klein_rm3", "q=0, r<0 (r=-3)", lambda k: 3 ** k - (-1) ** k, "(1 + z)/(1 - 3z)"),
]


@pytest.mark.parametrize("alias,label,n_of_k,table_zeta", KLEIN_ROWS, ids=[r[0] for r in KLEIN_ROWS])
def test_criterion_1_klein_table(alias, label, n_of_k, table_zeta):
    t0 = time.perf_counter()
    spec = catalog_lookup(alias).spec
    nseq, _fit, zeta, _sp = fresh(spec)
    elapsed = time.perf_counter() - t0
    n_ok = [nseq[k] for k in range(1, 13)] == [n_of_k(k) for k in range(1, 13)]
    # the zeta the table's own N column determines, via the exp oracle
    implied = exp_series([n_of_k(k) for k in range(1, 41)], 41)
    z_ok = zeta.series(41) == implied
    if table_zeta is not None:
        z_ok = z_ok and zeta == parse_ratfunc(table_zeta)
    ok = n_ok and z_ok and elapsed < 1.0
    record(1, ok, f"[{label}] N(f^k) k<=12 exact={n_ok}, zeta {zeta} exact={z_ok}, {elapsed:.3f}s")


@pytest.mark.xfail(strict=True, reason="table lists (1 + z)/(1 - rz), which contradicts its own N column r^k - 1")
def test_criterion_1_klein_r3_literal_table_zeta():
    spec = catalog_lookup("klein_r3").spec
    _nseq, _fit, zeta, _sp = fresh(spec)
    literal = parse_ratfunc("(1 + z)/(1 - 3z)")
    ok = zeta == literal
    # literal row expands to N(f) = 4, while |1 - r| = 2
    line = (f"criterion 1: {'PASS' if ok else 'FAIL'} [q=0, r>0 literal table zeta {literal}] "
            f"computed {zeta}; literal zeta implies N(f)={int(literal.series(2)[1])}, table N column gives 2")
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


# -- 2. torus order-3 map -----------------------------------------------------


def test_criterion_2_torus2():
    a = analyse("torus2_order3")
    seq_ok = [a.nseq[k] for k in range(1, 25)] == [0 if k % 3 == 0 else 3 for k in range(1, 25)]
    w = complex(mpmath.exp(2j * mpmath.pi / 3))
    # (1 - w z)(1 - w' z) has coefficients 1, -(w + w'), w w'
    num = [1, -(w + w.conjugate()), w * w.conjugate()]
    num_ok = all(abs(complex(c) - e) < 1e-12 for c, e in zip(num, [1, 1, 1]))
    zeta_ok = a.zeta == parse_ratfunc("(1 + z + z^2)/(1 - z)^2") and num_ok
    lam_ok = abs(a.spectrum.lambda_of - 1) < 1e-10
    c = classify(a.spectrum)
    cls_ok = c.tag == "periodicDominant" and c.period == 3
    record(2, seq_ok and zeta_ok and lam_ok and cls_ok,
           f"seq 3,3,0 to k=24 {seq_ok}, zeta {a.zeta} {zeta_ok}, lambda={a.spectrum.lambda_of:.12g}, "
           f"class {c.tag}({c.period})")


# -- 3. T^4 map ------------------------------------------------------------------


def _t4_display_logcoeffs(K):
    """Log-coefficients of the displayed eight-factor N_f(z), exactly in Q(sqrt 3).

    The characteristic polynomial splits as (t^2 - s t + 1)(t^2 - u t + 1) with
    s, u = 1 +- sqrt 3; alpha, beta are the roots of the first factor and the
    unit-circle pair those of the second. The display gives
    c_k = -4 + 2 e_k + 2 a_k - a_k e_k with a_k, e_k the two power sums.
    """
    def mul(x, y):
        return (x[0] * y[0] + 3 * x[1] * y[1], x[0] * y[1] + x[1] * y[0])

    s, u = (Fraction(1), Fraction(1)), (Fraction(1), Fraction(-1))

    def power_sums(t):
        out = [(Fraction(2), Fraction(0)), t]
        while len(out) <= K:
            a = mul(t, out[-1])
            out.append((a[0] - out[-2][0], a[1] - out[-2][1]))
        return out

    A, E = power_sums(s), power_sums(u)
    c = []
    for k in range(1, K + 1):
        ae = mul(A[k], E[k])
        val = (-4 + 2 * E[k][0] + 2 * A[k][0] - ae[0], 2 * E[k][1] + 2 * A[k][1] - ae[1])
        assert val[1] == 0
        c.append(val[0])
    return c


def test_criterion_3_t4():
    a = analyse("t4_example")
    display = _t4_display_logcoeffs(40)
    series_ok = a.zeta.series(41) == exp_series(display, 41)
    beta = bisect_largest_root([1, -2, 0, -2, 1], 2, 3)
    rows = a.entry.spec.linearization.to_rows()
    sp = sp_numpy(rows)
    lam = a.spectrum.lambda_of
    lam_ok = abs(lam - beta) < 1e-9 and abs(lam - sp) < 1e-9
    r = radius_report(a.spectrum, a.entry.spec)
    lam_ok = lam_ok and abs(r.sp_exterior - sp) < 1e-9
    c = classify(a.spectrum)
    record(3, series_ok and lam_ok and c.tag == "intervalDense",
           f"series to k=40 {series_ok}, lambda={lam:.12g} beta={beta:.12g} sp={sp:.12g}, class {c.tag}")


# -- 4. G2 family ----------------------------------------------------------------


def test_criterion_4_g2():
    details, ok = [], True
    for l in (1, 2):
        name = next(n for n in CATALOG_NAMES if n.startswith(f"g2_even(l={l},"))
        a = analyse(name)
        want = parse_ratfunc(f"(1 - z)/(1 - {2 * l}z)")
        lam_want = max(1, 2 * abs(l))
        sp = sp_numpy(a.entry.spec.linearization.to_rows())
        good = a.zeta == want and abs(a.spectrum.lambda_of - lam_want) < 1e-9 and abs(sp - lam_want) < 1e-9
        ok = ok and good
        details.append(f"{name} {good}")
    for name in (n for n in CATALOG_NAMES if n.startswith("g2_rotation")):
        a = analyse(name)
        rows = a.entry.spec.linearization.to_rows()
        mu2 = cofactor_det([r[1:] for r in rows[1:]])  # |mu|^2 of the rotation block
        want = parse_ratfunc(f"(1 + z)(1 + {mu2}z)/((1 - z)(1 - {mu2}z))") if mu2 != 1 else \
            parse_ratfunc("(1 + z)^2/(1 - z)^2")
        lam_want = max(1, float(mu2))
        sp = sp_numpy(rows)
        good = a.zeta == want and abs(a.spectrum.lambda_of - lam_want) < 1e-9 and abs(sp - lam_want) < 1e-9
        ok = ok and good
        details.append(f"{name} |mu|^2={mu2} {good}")
    record(4, ok, "; ".join(details))


# -- 5. congruences --------------------------------------------------------------


def test_criterion_5_congruences():
    t0 = time.perf_counter()
    bad = []
    for name in CATALOG_NAMES:
        spec = catalog_lookup(name).spec
        nseq, fit, zeta, sp = fresh(spec, 64)
        values = list(nseq.values[:64])
        if not all(v.passed for v in gauss_check(values[:60])):
            bad.append(f"{name}:gauss")
        if not all(v.passed for v in euler_check(values)):
            bad.append(f"{name}:euler")
        model = build_trace_model(sp, fit, nseq)
        tc = trace_congruences(trace_sequence(model.m_plus, 64), trace_sequence(model.m_minus, 64))
        if not tc.passed:
            bad.append(f"{name}:trace")
    elapsed = time.perf_counter() - t0
    record(5, not bad and elapsed < 10.0,
           f"{len(CATALOG_NAMES)} entries, Gauss k<=60, Euler p^r<=64, companion traces; "
           f"failures={bad or 'none'}, {elapsed:.2f}s")


# -- 6. trace identity -----------------------------------------------------------


def test_criterion_6_trace_identity():
    bad, checked = [], 0
    for name in CATALOG_NAMES:
        a = analyse(name)
        if a.zeta.is_one():
            continue
        checked += 1
        model = build_trace_model(a.spectrum, a.fit, a.nseq)
        if model.traces(40) != list(a.nseq.values[:40]):
            bad.append(name)
    record(6, not bad and checked > 0, f"N(f^k) = tr M+^k - tr M-^k for k<=40 on {checked} entries; "
                                       f"failures={bad or 'none'}")


# -- 7. random torus maps ----------------------------------------------------------


def test_criterion_7_random_matrices():
    rng = random.Random(20261014)
    n_oracle = n_moebius = n_fit = n_fit_ok = 0
    failures = []
    for trial in range(200):
        n = 2 if trial < 100 else 3
        rows = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
        spec = MapSpec.build(f"rand{trial}", [], rows)
        K = required_terms(default_dmax(n, 1), 8)
        full = nielsen_seq(spec, K + 8)
        eye = [[int(i == j) for j in range(n)] for i in range(n)]
        oracle = []
        for k in range(1, K + 9):
            p = naive_power(rows, k)
            oracle.append(abs(cofactor_det([[eye[i][j] - p[i][j] for j in range(n)] for i in range(n)])))
        if list(full.values) == oracle:
            n_oracle += 1
        else:
            failures.append(f"oracle:{rows}")
        table = multiplicity_table(full)
        if table.rebuild() == full.values:
            n_moebius += 1
        else:
            failures.append(f"moebius:{rows}")
        head = nielsen_seq(spec, K)
        try:
            fit = fit_recurrence(head)
        except NielsenError:
            continue
        n_fit += 1
        # predict the 8 terms that were never shown to the fitter
        predicted = fit.S.series(K + 8)
        held = [full[k] for k in range(K + 1, K + 9)]
        if [predicted[k - 1] for k in range(K + 1, K + 9)] == held:
            n_fit_ok += 1
        else:
            failures.append(f"heldout:{rows}")
    ok = n_oracle == 200 and n_moebius == 200 and n_fit_ok == n_fit and not failures
    record(7, ok, f"cofactor oracle {n_oracle}/200, Moebius round trip {n_moebius}/200, "
                  f"held-out 8 terms {n_fit_ok}/{n_fit} fitted")


# -- 8. nonvanishing windows ---------------------------------------------------------


def test_criterion_8_windows():
    bad, checked = [], 0
    for name in CATALOG_NAMES:
        a = analyse(name)
        sp = a.spectrum
        if sp.r_of == 0 or sp.lambda_of < 1 - 1e-12:
            continue
        checked += 1
        w = nonvanishing_window(sp, a.nseq)
        if w.n_observed is None:
            bad.append(f"{name}:no N")
            continue
        n = w.window
        with mpmath.workdps(50):
            lam = mpmath.mpf(sp.lambda_of)
            big = [mpmath.mpf(a.nseq[k]) / lam ** k > w.gamma for k in range(1, 41)]
        for m in range(w.n_observed, 40 - n + 2):
            if not any(big[m - 1:m - 1 + n]):
                bad.append(f"{name}:window@{m}")
                break
        if not w.verified:
            bad.append(f"{name}:theory N")
    record(8, not bad and checked > 0, f"{checked} entries with lambda>=1, windows in [N_observed, 40]; "
                                       f"failures={bad or 'none'}")


# -- 9. homotopy minimal periods --------------------------------------------------------


def test_criterion_9_hper():
    parts, ok = [], True
    primes = primes_up_to(40)
    for name in ("circle_doubling", "klein_r3"):
        a = analyse(name)
        certified = {c.period for c in hper_primes(a.table)}
        pp = hper_prime_powers(a.nseq, a.table, a.spectrum.lambda_of)
        cof = pp.cofinite
        cover = cof is not None and cof.threshold == 0 and cof.verified_up_to >= 40
        cover = cover and all(a.table.I[k - 1] > 0 for k in range(1, 41))
        good = set(primes) <= certified and cover
        ok = ok and good
        parts.append(f"{name}: primes<=40 certified {set(primes) <= certified}, cofinite on [1,40] {cover}")
    a = analyse("torus2_order3")
    rep = period_report(a.spectrum, classify(a.spectrum), a.nseq, a.table)
    periods = {c.period for c in rep.hper_certified}
    two_rejected = 2 not in periods and a.table.A[1] == 0 and hper_inequality(a.nseq, 2) is None
    good = 3 in periods and two_rejected
    ok = ok and good
    parts.append(f"torus2_order3: 3 certified {3 in periods}, 2 rejected {two_rejected}")
    record(9, ok, "; ".join(parts))


# -- 10. parity theorem -------------------------------------------------------------------


def test_criterion_10_parity():
    a = analyse("torus2_order3", 45)
    prof = mod2_profile(build_trace_model(a.spectrum, a.fit, a.nseq))
    i9, i45 = dold(list(a.nseq.values), 9), dold(list(a.nseq.values), 45)
    v9, v45 = parity_theorem_check(a.table, prof, 9), parity_theorem_check(a.table, prof, 45)
    torus_ok = prof.alpha2 == 3 and i9 % 2 == 0 and i45 % 2 == 0 and v9.status == v45.status == "pass"
    b = analyse("klein_r3")
    kprof = mod2_profile(build_trace_model(b.spectrum, b.fit, b.nseq))
    odd = range(1, 40, 2)
    klein_even = all(dold(list(b.nseq.values), k) % 2 == 0 for k in odd)
    klein_thm = all(parity_theorem_check(b.table, kprof, k).status == "pass" for k in odd if k > 1)
    klein_ok = kprof.alpha2 == 1 and klein_even and klein_thm
    record(10, torus_ok and klein_ok,
           f"torus2 alpha2={prof.alpha2} I_9={i9} I_45={i45}; klein_r3 alpha2={kprof.alpha2} "
           f"I_k even for odd k<=39 {klein_even}")
