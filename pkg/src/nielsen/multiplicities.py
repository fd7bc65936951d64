"""Dold and algebraic multiplicities, Gauss and Euler congruences, parity of orbit counts."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cache

from .algebra import QMatrix, QPoly
from .averaging import ExactSeq
from .errors import CongruenceViolation, PreconditionError

_MODULE = "multiplicities_congruences"


@cache
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization by trial division."""
    if n < 1:
        raise ValueError("factorize needs n >= 1")
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def moebius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == ((n, 1),)


def primes_up_to(n: int) -> list[int]:
    return [p for p in range(2, n + 1) if is_prime(p)]


def dold(values, k: int) -> int:
    """I_k = sum_{d | k} mu(k/d) x_d for a 1-based sequence given as a list."""
    return sum(moebius(k // d) * values[d - 1] for d in divisors(k))


# ----------------------------------------------------------------------------
# tables and congruences


@dataclass(frozen=True)
class GaussVerdict:
    k: int
    dold: int
    passed: bool


@dataclass(frozen=True)
class EulerVerdict:
    p: int
    r: int
    difference: int
    passed: bool


@dataclass(frozen=True)
class MultiplicityTable:
    K: int
    N: tuple[int, ...]
    I: tuple[int, ...]
    A: tuple[int, ...]
    EP: tuple[int, ...]
    negative: tuple[bool, ...]
    gauss_verdicts: tuple[GaussVerdict, ...]
    euler_verdicts: tuple[EulerVerdict, ...]

    def rebuild(self) -> tuple[int, ...]:
        """N(f^k) = sum_{d | k} d A_d."""
        return tuple(sum(d * self.A[d - 1] for d in divisors(k)) for k in range(1, self.K + 1))

    @property
    def negative_indices(self) -> list[int]:
        return [k for k, flag in enumerate(self.negative, start=1) if flag]


def gauss_check(nseq: ExactSeq | list[int]) -> list[GaussVerdict]:
    values = list(nseq.values if isinstance(nseq, ExactSeq) else nseq)
    out = []
    for k in range(1, len(values) + 1):
        i_k = dold(values, k)
        out.append(GaussVerdict(k, i_k, i_k % k == 0))
    return out


def euler_check(nseq: ExactSeq | list[int]) -> list[EulerVerdict]:
    """N(f^(p^r)) = N(f^(p^(r-1))) mod p^r for every prime power p^r <= K."""
    values = list(nseq.values if isinstance(nseq, ExactSeq) else nseq)
    K = len(values)
    out = []
    for p in primes_up_to(K):
        r, q = 1, p
        while q <= K:
            diff = values[q - 1] - values[q // p - 1]
            out.append(EulerVerdict(p, r, diff, diff % q == 0))
            r, q = r + 1, q * p
    return out


def multiplicity_table(nseq: ExactSeq) -> MultiplicityTable:
    values = list(nseq.values)
    gauss = gauss_check(values)
    I, A = [], []
    for v in gauss:
        if not v.passed:
            raise CongruenceViolation(f"A_{v.k} = {Fraction(v.dold, v.k)} is not an integer; the sequence is corrupted",
                                      module=_MODULE, operation="multiplicityTable", k=v.k)
        I.append(v.dold)
        A.append(v.dold // v.k)
    return MultiplicityTable(
        K=len(values), N=tuple(values), I=tuple(I), A=tuple(A), EP=tuple(I),
        negative=tuple(i < 0 for i in I), gauss_verdicts=tuple(gauss), euler_verdicts=tuple(euler_check(values)),
    )


def nonzero_implication(table: MultiplicityTable) -> list[int]:
    """Exponents where I_k != 0 but N(f^k) = 0 (expected empty)."""
    return [k for k in range(1, table.K + 1) if table.I[k - 1] != 0 and table.N[k - 1] == 0]


@dataclass(frozen=True)
class TraceCongruences:
    gauss_plus: bool
    gauss_minus: bool
    euler_plus: bool
    euler_minus: bool

    @property
    def passed(self) -> bool:
        return self.gauss_plus and self.gauss_minus and self.euler_plus and self.euler_minus


def trace_congruences(plus_traces: list[int], minus_traces: list[int]) -> TraceCongruences:
    """Gauss and Euler congruences on tr(M^k) for the two integer matrices separately."""
    return TraceCongruences(
        all(v.passed for v in gauss_check(plus_traces)),
        all(v.passed for v in gauss_check(minus_traces)),
        all(v.passed for v in euler_check(plus_traces)),
        all(v.passed for v in euler_check(minus_traces)),
    )


# ----------------------------------------------------------------------------
# mod 2


@dataclass(frozen=True)
class Mod2Profile:
    alpha2: int | None
    preperiod: int
    residues: tuple[int, ...]
    window: int
    method: str  # "stateCycle" or "directSearch"
    conclusive: bool = True


def _recurrence_mod2(model) -> tuple[int, ...]:
    """Monic integer polynomial prod_c rev(g_c), reduced mod 2, ascending."""
    p = QPoly([1])
    for _rho, g in model.blocks:
        p = p * g.reversed()
    return tuple(int(c) % 2 for c in p.coeffs)


def _initial_bits(model, r: int) -> list[int]:
    from .zeta import trace_sequence

    plus = trace_sequence(model.m_plus, r)
    minus = trace_sequence(model.m_minus, r)
    return [(a - b) % 2 for a, b in zip(plus, minus)]


def mod2_profile(model, window: int = 1 << 16) -> Mod2Profile:
    """Minimal period alpha of N(f^k) mod 2, with N(f^(k+alpha)) = N(f^k) for every k >= 1.

    The bits obey the linear recurrence of the fitted denominator over F_2.
    When its constant term is odd the state map is invertible, the bit
    sequence is purely periodic and the state cycle length is alpha. Otherwise
    the bits are generated over the window and the least period is searched
    directly.
    """
    rec = _recurrence_mod2(model)
    r = len(rec) - 1
    if r == 0:
        return Mod2Profile(1, 0, (0,), window, "stateCycle")
    bits = _initial_bits(model, r)

    def step(state: tuple[int, ...]) -> int:
        return sum(rec[i] * state[i] for i in range(r)) % 2

    if rec[0] == 1:
        start = tuple(bits)
        state = start
        seen = [bits[0]]
        for n in range(1, window + 1):
            state = state[1:] + (step(state),)
            if state == start:
                return Mod2Profile(n, 0, tuple(seen), window, "stateCycle")
            seen.append(state[0])
        return Mod2Profile(None, 0, tuple(seen[:64]), window, "stateCycle", conclusive=False)
    seq = list(bits)
    while len(seq) < window:
        seq.append(step(tuple(seq[-r:])))
    for alpha in range(1, window // 2 + 1):
        if all(seq[i] == seq[i + alpha] for i in range(window - alpha)):
            return Mod2Profile(alpha, 0, tuple(seq[:alpha]), window, "directSearch")
    return Mod2Profile(None, 0, tuple(seq[:64]), window, "directSearch", conclusive=False)


def multiplicative_order(a: int, n: int) -> int:
    if n == 1:
        return 1
    x, k = a % n, 1
    while x != 1:
        x, k = x * a % n, k + 1
        if k > n:
            raise ValueError(f"{a} is not invertible mod {n}")
    return k


@dataclass(frozen=True)
class ParityVerdict:
    k: int
    status: str  # "pass", "fail", "notApplicable"
    reason: str
    dold: int | None = None


def parity_theorem_check(table: MultiplicityTable, profile: Mod2Profile, k: int) -> ParityVerdict:
    """For odd k satisfying the divisibility hypothesis, I_k(f) is even."""
    if k <= 0 or k % 2 == 0:
        return ParityVerdict(k, "notApplicable", "k must be odd")
    if k == 1:
        # sum_{d | k} mu(k/d) vanishes only for k > 1; I_1 = N(f) may be odd
        return ParityVerdict(k, "notApplicable", "k = 1 is excluded")
    if k > table.K:
        return ParityVerdict(k, "notApplicable", f"k exceeds the table length {table.K}")
    alpha = profile.alpha2
    if alpha is None:
        raise PreconditionError("mod-2 period unknown", module=_MODULE, operation="parityTheoremCheck")
    reason = ""
    if k % (alpha * alpha) == 0:
        reason = f"alpha^2 = {alpha * alpha} divides k"
    else:
        residues, x = set(), 1 % alpha
        while x not in residues:
            residues.add(x)
            x = 2 * x % alpha
        for p, _e in factorize(k):
            if p % alpha in residues:
                reason = f"prime {p} | k with {p} = 2^i mod {alpha}"
                break
    if not reason:
        return ParityVerdict(k, "notApplicable", "divisibility hypothesis fails")
    i_k = table.I[k - 1]
    return ParityVerdict(k, "pass" if i_k % 2 == 0 else "fail", reason, i_k)


def table_csv(table: MultiplicityTable) -> str:
    lines = ["k,N,I,A,EP,gauss,flags"]
    for k in range(1, table.K + 1):
        g = "pass" if table.gauss_verdicts[k - 1].passed else "fail"
        flag = "negative" if table.negative[k - 1] else ""
        lines.append(f"{k},{table.N[k - 1]},{table.I[k - 1]},{table.A[k - 1]},{table.EP[k - 1]},{g},{flag}")
    return "\n".join(lines) + "\n"
