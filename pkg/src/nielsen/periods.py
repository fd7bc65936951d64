"""Homotopy minimal period certificates, orbit counts and density estimates.

Everything here is a statement about the computed range 1..K. Infinite
conclusions (whole prime families, cofiniteness, liminf densities) are carried
as annotations naming the result that supplies them, never as computed facts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .asymptotics import AsymptoticClass
from .averaging import ExactSeq
from .errors import NeedsMoreTerms
from .multiplicities import MultiplicityTable, dold, factorize, primes_up_to
from .zeta import ZetaSpectrum

_MODULE = "periods"


@dataclass(frozen=True)
class Certificate:
    period: int
    kind: str  # primeDold, primePowerDold, reducibilityInequality
    witness: tuple[int, ...]  # the numbers proving it

    def line(self) -> str:
        return f"{self.period},{self.kind}," + " ".join(str(w) for w in self.witness)


@dataclass(frozen=True)
class Cofinite:
    threshold: int
    verified_up_to: int
    note: str = ""


@dataclass(frozen=True)
class PrimePowerReport:
    certified: tuple[Certificate, ...]
    monotone: str  # strict, eventual, none
    monotone_from: int | None
    cofinite: Cofinite | None
    reason: str = ""


@dataclass(frozen=True)
class FamilyReport:
    status: str  # verified, partial, notApplicable
    m: int | None = None
    q: int | None = None
    primes: tuple[int, ...] = ()
    failures: tuple[int, ...] = ()
    note: str = ""


@dataclass(frozen=True)
class OrbitBound:
    status: str  # pass, fail, notApplicable
    k: int
    n0: int | None = None
    bound: Fraction | None = None
    count: int | None = None


@dataclass(frozen=True)
class DensityEstimate:
    da_lower: Fraction
    count: int
    window: int
    theorem_value: int | None = None
    theorem_lower: Fraction | None = None
    note: str = ""


@dataclass(frozen=True)
class PeriodReport:
    hper_certified: tuple[Certificate, ...]
    orbit_bound: OrbitBound | None
    cofinite: Cofinite | None
    densities: DensityEstimate
    prime_powers: PrimePowerReport | None = None
    family: FamilyReport | None = None
    notes: tuple[str, ...] = field(default=())


def hper_primes(table: MultiplicityTable) -> list[Certificate]:
    """Primes p <= K with A_p != 0."""
    return [Certificate(p, "primeDold", (table.A[p - 1],)) for p in primes_up_to(table.K) if table.A[p - 1] != 0]


def hper_inequality(nseq: ExactSeq, m: int) -> Certificate | None:
    """m in HPer(f) when sum over primes p | m of N(f^(m/p)) < N(f^m)."""
    if m < 1:
        raise ValueError("m must be positive")
    if m > nseq.K:
        raise NeedsMoreTerms(f"needs N(f^{m}), have {nseq.K} terms", module=_MODULE, operation="hperInequality")
    total = sum(nseq[m // p] for p, _e in factorize(m)) if m > 1 else 0
    if total < nseq[m]:
        return Certificate(m, "reducibilityInequality", (total, nseq[m]))
    return None


def _monotone_start(values: tuple[int, ...], strict: bool) -> int | None:
    """Least k0 with the sequence (strictly) increasing on k0..K."""
    K = len(values)
    k0 = K
    while k0 > 1:
        a, b = values[k0 - 2], values[k0 - 1]
        if a < b or (not strict and a == b):
            k0 -= 1
        else:
            break
    return k0 if k0 < K else None


def hper_prime_powers(nseq: ExactSeq, table: MultiplicityTable, lambda_of: float | None = None) -> PrimePowerReport:
    """Prime and prime-power certificates plus a cofiniteness report under monotonicity."""
    values = nseq.values
    K = len(values)
    strict = _monotone_start(values, strict=True) == 1
    if lambda_of is not None and lambda_of <= 1:
        return PrimePowerReport((), "none", None, None, reason=f"lambda(f)={lambda_of:g} <= 1, sequence bounded")
    start = 1 if strict else _monotone_start(values, strict=False)
    if start is None or start >= K:
        return PrimePowerReport((), "none", None, None, reason="no monotone tail on the computed range")
    if lambda_of is None and not strict:
        return PrimePowerReport((), "eventual", start, None, reason="lambda(f) unknown")
    certs: list[Certificate] = []
    if strict:
        certs += [Certificate(p, "primeDold", (table.A[p - 1],)) for p in primes_up_to(K)]
    for q in range(4, K + 1):
        fac = factorize(q)
        if len(fac) == 1 and fac[0][1] > 1 and table.I[q - 1] > 0:
            certs.append(Certificate(q, "primePowerDold", (table.I[q - 1],)))
    last_bad = max((k for k in range(1, K + 1) if table.I[k - 1] <= 0), default=0)
    cof = Cofinite(last_bad, K, "I_k > 0 on (threshold, K]; cofiniteness beyond K is theorem-backed")
    return PrimePowerReport(tuple(certs), "strict" if strict else "eventual", start, cof)


def hper_prime_family(spectrum: ZetaSpectrum, cls: AsymptoticClass, nseq: ExactSeq) -> FamilyReport:
    """Primes p = 1 + l q with I_p(f^m) != 0, verified for m p <= K."""
    if spectrum.r_of == 0 or spectrum.lambda_of <= 1 + spectrum.tol:
        return FamilyReport("notApplicable", note="needs lambda(f) > 1")
    if cls.tag != "periodicDominant" or cls.period is None:
        return FamilyReport("notApplicable", note="needs a periodic dominant part")
    q = cls.period
    m = next((i for i in range(1, q + 1) if abs(cls.residues[i - 1]) > 1e-9), None)
    if m is None:
        return FamilyReport("notApplicable", q=q, note="dominant part vanishes identically")
    sub = [nseq[m * k] for k in range(1, nseq.K // m + 1)]
    primes, failures = [], []
    for p in primes_up_to(len(sub)):
        if p % q != 1 % q or p == 1:
            continue
        if dold(sub, p) != 0:
            primes.append(p)
        else:
            failures.append(p)
    note = (f"periods m0*p lie in HPer(f) for some divisor m0 of m={m}; "
            "infinitude of the progression 1 + l*q is theorem-backed, not computed")
    return FamilyReport("verified" if not failures else "partial", m, q, tuple(primes), tuple(failures), note)


def orbit_lower_bound(spectrum: ZetaSpectrum, table: MultiplicityTable, k: int) -> OrbitBound:
    """#{m <= k : A_m != 0} against (k - N0) / r(f)."""
    if spectrum.r_of == 0 or spectrum.lambda_of <= 1 + spectrum.tol:
        return OrbitBound("notApplicable", k)
    if k > table.K:
        raise NeedsMoreTerms(f"needs A_m up to m={k}", module=_MODULE, operation="orbitLowerBound")
    n = max(spectrum.n_of, 1)
    nonzero = [a != 0 for a in table.A]
    last_bad = 0
    for m in range(1, table.K - n + 2):
        if not any(nonzero[m - 1:m - 1 + n]):
            last_bad = m
    n0 = last_bad
    bound = Fraction(max(k - n0, 0), spectrum.r_of)
    count = sum(nonzero[:k])
    return OrbitBound("pass" if count >= bound else "fail", k, n0, bound, count)


def density_estimates(table: MultiplicityTable, K: int | None = None, cls: AsymptoticClass | None = None,
                      cofinite: Cofinite | None = None, spectrum: ZetaSpectrum | None = None) -> DensityEstimate:
    """#(A(f) cap [1, K]) / K, a finite-window proxy for DA(f)."""
    K = table.K if K is None else min(K, table.K)
    count = sum(1 for a in table.A[:K] if a != 0)
    est = Fraction(count, K) if K else Fraction(0)
    value, lower, note = None, None, "finite-window estimate, not a limit"
    # the theorem-backed values all rest on lambda(f) > 1, except the trivial case
    expanding = spectrum is None or (spectrum.r_of > 0 and spectrum.lambda_of > 1 + spectrum.tol)
    if cls is not None and cls.tag == "trivial":
        value, note = 0, "lambda(f)=0: DA(f)=0"
    elif expanding and ((cls is not None and cls.tag == "intervalDense") or cofinite is not None):
        value, note = 1, "theorem-backed limit DA(f)=DH(f)=DP(f)=1"
    elif expanding and cls is not None and cls.tag == "periodicDominant" and cls.period:
        lower, note = Fraction(1, cls.period), "theorem-backed bound DA(f) >= 1/q"
    if spectrum is not None and expanding and spectrum.n_of:
        bound = Fraction(1, spectrum.n_of)
        lower = bound if lower is None else max(lower, bound)
    return DensityEstimate(est, count, K, value, lower, note)


def period_report(spectrum: ZetaSpectrum, cls: AsymptoticClass, nseq: ExactSeq,
                  table: MultiplicityTable) -> PeriodReport:
    """All period results on one sequence."""
    certs = {c.period: c for c in hper_primes(table)}
    pp = hper_prime_powers(nseq, table, spectrum.lambda_of)
    for c in pp.certified:
        certs.setdefault(c.period, c)
    for m in range(1, nseq.K + 1):
        if m not in certs:
            c = hper_inequality(nseq, m)
            if c is not None:
                certs[m] = c
    unbounded = spectrum.r_of > 0 and spectrum.lambda_of > 1 + spectrum.tol
    orbit = orbit_lower_bound(spectrum, table, nseq.K) if unbounded else None
    family = hper_prime_family(spectrum, cls, nseq)
    dens = density_estimates(table, nseq.K, cls, pp.cofinite, spectrum)
    notes = ("certificates cover only the computed range",)
    return PeriodReport(tuple(certs[k] for k in sorted(certs)), orbit, pp.cofinite, dens, pp, family, notes)


__all__ = [
    "Certificate", "Cofinite", "DensityEstimate", "FamilyReport", "OrbitBound", "PeriodReport", "PrimePowerReport",
    "density_estimates", "hper_inequality", "hper_prime_family", "hper_prime_powers", "hper_primes",
    "orbit_lower_bound", "period_report",
]
