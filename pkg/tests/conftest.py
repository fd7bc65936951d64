"""Shared fixtures and independent oracles.

The oracles here avoid the package's own algorithms: determinants by cofactor
expansion, zeta power series by the Taylor expansion of exp, and so on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import pytest

from nielsen.averaging import ExactSeq, both_seqs
from nielsen.manifold import catalog, catalog_lookup
from nielsen.multiplicities import multiplicity_table
from nielsen.zeta import assemble_zeta, default_dmax, extract_spectrum, fit_recurrence, required_terms


def cofactor_det(rows) -> Fraction:
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(rows[0][0])
    total = Fraction(0)
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += (-1) ** j * Fraction(rows[0][j]) * cofactor_det(minor)
    return total


def naive_matmul(a, b):
    return [[sum(a[i][t] * b[t][j] for t in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def naive_power(m, k):
    n = len(m)
    out = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(k):
        out = naive_matmul(out, m)
    return out


def exp_series(values, n):
    """Coefficients of exp(sum_k values[k-1] z^k / k) up to z^(n-1), via z F' = (sum_k x_k z^k) F."""
    f = [Fraction(1)] + [Fraction(0)] * (n - 1)
    for m in range(1, n):
        f[m] = sum(Fraction(values[k - 1]) * f[m - k] for k in range(1, m + 1) if k <= len(values)) / m
    return f


def brute_moebius(n: int) -> int:
    # count prime factors with multiplicity by plain trial division
    primes, m, p = [], n, 2
    while m > 1:
        while m % p == 0:
            primes.append(p)
            m //= p
        p += 1
    if len(primes) != len(set(primes)):
        return 0
    return (-1) ** len(primes)


@dataclass
class Analysis:
    entry: object
    K: int
    lseq: ExactSeq
    nseq: ExactSeq
    fit: object
    zeta: object
    spectrum: object
    table: object


@lru_cache(maxsize=None)
def analyse(name: str, K: int | None = None) -> Analysis:
    entry = catalog_lookup(name)
    spec = entry.spec
    need = required_terms(default_dmax(spec.dim, spec.order), 8)
    K = max(K or 40, need)
    lseq, nseq = both_seqs(spec, K)
    fit = fit_recurrence(nseq)
    zeta = assemble_zeta(fit, nseq)
    sp = extract_spectrum(fit, zeta)
    return Analysis(entry, K, lseq, nseq, fit, zeta, sp, multiplicity_table(nseq))


CATALOG_NAMES = [e.name for e in catalog()]


@pytest.fixture(params=CATALOG_NAMES)
def catalog_name(request):
    return request.param


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
