"""Dominant/subdominant decomposition and the asymptotic trichotomy.

With lambda = lambda(f) and the dominant pairs |lambda_j| = lambda,

    N(f^k) / lambda^k = sum_dominant rho_j (lambda_j / lambda)^k + o(1).

The dominant part is periodic exactly when every lambda_j / lambda is a root of
unity; that is decided by the exact test in the algebra layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .algebra import certify_real, root_of_unity_order
from .algebra.roots import lcm_all
from .averaging import ExactSeq
from .errors import NeedsMoreTerms, PreconditionError, StructuralError
from .multiplicities import dold
from .zeta import ZetaSpectrum

_MODULE = "asymptotics"
_DPS = 50


def _need_lambda_at_least_one(spectrum: ZetaSpectrum, op: str):
    if spectrum.r_of == 0 or spectrum.lambda_of < 1 - spectrum.tol:
        raise PreconditionError("needs lambda(f) >= 1", module=_MODULE, operation=op)


@dataclass(frozen=True)
class DominantSplit:
    gamma_seq: tuple[float, ...]
    omega_seq: tuple[float, ...]


def _lambda_mp(spectrum: ZetaSpectrum):
    return max(abs(spectrum.pairs[i].lam.mp()) for i in spectrum.dominant)


def dominant_split(spectrum: ZetaSpectrum, K: int) -> DominantSplit:
    _need_lambda_at_least_one(spectrum, "dominantSplit")
    dom = set(spectrum.dominant)
    gam, omg = [], []
    with mpmath.workdps(_DPS):
        lam = _lambda_mp(spectrum)
        units = [p.lam.mp() / lam for p in spectrum.pairs]
        for k in range(1, K + 1):
            g = mpmath.fsum(p.rho * units[i] ** k for i, p in enumerate(spectrum.pairs) if i in dom)
            o = mpmath.fsum(p.rho * units[i] ** k for i, p in enumerate(spectrum.pairs) if i not in dom)
            gam.append(float(mpmath.re(g)))
            omg.append(float(mpmath.re(o)))
    return DominantSplit(tuple(gam), tuple(omg))


# ----------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class AsymptoticClass:
    tag: str  # trivial, periodicDominant, intervalDense, inconclusive
    period: int | None = None
    residues: tuple[float, ...] = ()
    angles: tuple[tuple[int, str], ...] = ()  # (rho, angle as a fraction of a full turn)
    witness: tuple[str, ...] = ()
    max_order: int = 360
    definitive: bool = True
    gamma: float | None = None
    window_n: int | None = None
    note: str = ""


def _pair_poly(spectrum: ZetaSpectrum, i: int, j: int):
    bi, bj = spectrum.pairs[i].block, spectrum.pairs[j].block
    pi, pj = spectrum.block_poly(bi), spectrum.block_poly(bj)
    if bi == bj:
        return pi, max(1, pi.degree * (pi.degree - 1))
    return pi * pj, pi.degree * pj.degree


def _conjugate_index(spectrum: ZetaSpectrum, i: int) -> int:
    z = spectrum.pairs[i].lam.value.conjugate()
    return min(spectrum.dominant, key=lambda j: abs(spectrum.pairs[j].lam.value - z))


def _least_order_dividing(u, bound: int) -> int:
    # u is known to be a root of unity of order dividing bound
    for e in sorted(d for d in range(1, bound + 1) if bound % d == 0):
        if abs(u ** e - 1) < mpmath.mpf(10) ** -20:
            return e
    raise StructuralError("root of unity order not found among divisors", module=_MODULE, operation="classify")


def classify(spectrum: ZetaSpectrum, max_order: int = 360) -> AsymptoticClass:
    """Trichotomy: trivial, periodic dominant part of period q, or dense limit points.

    The reference direction is a dominant lambda that is certified real and
    positive; without one, the phase of a dominant root is resolved through
    the ratio with its complex conjugate, which is again a root of the
    spectrum polynomial.
    """
    if spectrum.r_of == 0:
        return AsymptoticClass("trivial", max_order=max_order)
    dom = list(spectrum.dominant)
    pairs = spectrum.pairs
    ref = next((i for i in dom if pairs[i].lam.real > 0
                and certify_real(spectrum.block_poly(pairs[i].block), pairs[i].lam)), None)
    phase_order = 1
    note = ""
    definitive = True
    if ref is None:
        ref = dom[0]
        conj = _conjugate_index(spectrum, ref)
        poly, bound = _pair_poly(spectrum, ref, conj)
        verdict = root_of_unity_order(poly, pairs[ref].lam, pairs[conj].lam, max_order, bound, spectrum.tol)
        if verdict.order is None:
            tag = "intervalDense" if verdict.definitive else "inconclusive"
            return AsymptoticClass(tag, witness=(f"{pairs[ref].lam}/conj",), max_order=max_order,
                                   definitive=verdict.definitive,
                                   note="phase of the dominant root is not a rational angle")
        with mpmath.workdps(_DPS):
            unit = pairs[ref].lam.mp() / abs(pairs[ref].lam.mp())
            phase_order = _least_order_dividing(unit, 2 * verdict.order)
        note = f"phase of reference root has order {phase_order}"
    orders, witness = [], []
    for j in dom:
        if j == ref:
            orders.append(phase_order)
            continue
        poly, bound = _pair_poly(spectrum, j, ref)
        verdict = root_of_unity_order(poly, pairs[j].lam, pairs[ref].lam, max_order, bound, spectrum.tol)
        if verdict.order is None:
            witness.append(str(pairs[j].lam))
            definitive = definitive and verdict.definitive
            continue
        with mpmath.workdps(_DPS):
            unit = pairs[j].lam.mp() / abs(pairs[j].lam.mp())
            orders.append(_least_order_dividing(unit, math.lcm(verdict.order, phase_order)))
    if witness:
        tag = "intervalDense" if definitive else "inconclusive"
        return AsymptoticClass(tag, witness=tuple(witness), max_order=max_order, definitive=definitive, note=note)
    q = lcm_all(orders)
    angles = []
    with mpmath.workdps(_DPS):
        lam = _lambda_mp(spectrum)
        units = {j: pairs[j].lam.mp() / lam for j in dom}
        for j in dom:
            a = mpmath.arg(units[j]) / (2 * mpmath.pi)
            num = int(mpmath.nint(a * q)) % q
            g = math.gcd(num, q)
            angles.append((pairs[j].rho, f"{num // g}/{q // g}" if num else "0"))
        residues = tuple(float(mpmath.re(mpmath.fsum(pairs[j].rho * units[j] ** k for j in dom)))
                         for k in range(1, q + 1))
    return AsymptoticClass("periodicDominant", period=q, residues=tuple(round(r, 12) + 0.0 for r in residues),
                           angles=tuple(angles), max_order=max_order, note=note)


# ----------------------------------------------------------------------------
# nonvanishing windows


@dataclass(frozen=True)
class WindowReport:
    gamma: float
    n_theory: int | None
    n_observed: int | None
    K: int
    window: int
    verified: bool
    condition: float
    dold_n_observed: int | None = None
    dold_verified: bool | None = None
    scaled: tuple[float, ...] = field(default=(), repr=False)


def _inverse_norm(W: np.ndarray) -> float:
    """Upper estimate of the operator 2-norm of W^-1 by power iteration."""
    winv = np.linalg.inv(W)
    g = winv.conj().T @ winv
    x = np.ones(W.shape[0], dtype=complex)
    est = 0.0
    for _ in range(1000):
        y = g @ x
        new = float(np.linalg.norm(y))
        x = y / new
        if est and abs(new - est) <= 1e-8 * new:
            est = new
            break
        est = new
    sigma = math.sqrt(est) * (1 + 1e-6)
    return min(sigma, float(np.linalg.norm(winv, "fro")))


def _scaled_values(values, lam, K: int) -> list[float]:
    with mpmath.workdps(_DPS):
        return [float(mpmath.mpf(values[k - 1]) / lam ** k) for k in range(1, K + 1)]


def _first_good_start(flags: list[bool], n: int) -> int | None:
    """Least N such that every n-window starting at N..K-n+1 has a True entry."""
    K = len(flags)
    last_bad = 0
    for m in range(1, K - n + 2):
        if not any(flags[m - 1:m - 1 + n]):
            last_bad = m
    start = last_bad + 1
    return start if start <= K - n + 1 else None


def nonvanishing_window(spectrum: ZetaSpectrum, nseq: ExactSeq) -> WindowReport:
    """gamma from the Vandermonde operator of the dominant angles, and the windows it forces."""
    _need_lambda_at_least_one(spectrum, "nonvanishingWindow")
    dom = list(spectrum.dominant)
    n = len(dom)
    with mpmath.workdps(_DPS):
        lam = _lambda_mp(spectrum)
        zetas = [complex(spectrum.pairs[j].lam.mp() / lam) for j in dom]
        tail = [(abs(p.rho), float(abs(p.lam.mp()) / lam)) for i, p in enumerate(spectrum.pairs) if i not in dom]
    W = np.array([[z ** l for z in zetas] for l in range(n)], dtype=complex)
    cond = float(np.linalg.cond(W))
    if not math.isfinite(cond) or cond > 1e12:
        raise StructuralError(f"Vandermonde operator is numerically singular (cond {cond:.3g})",
                              module=_MODULE, operation="nonvanishingWindow")
    gamma = 1 / (2 * _inverse_norm(W))
    # tail bound sum |rho_i| (|lambda_i| / lambda)^m is decreasing in m
    n_theory = None
    for m in range(0, 100000):
        if sum(r * x ** m for r, x in tail) < gamma:
            n_theory = max(m - 1, 0)
            break
    K = nseq.K
    scaled = _scaled_values(nseq.values, lam, K)
    flags = [v > gamma for v in scaled]
    n_observed = _first_good_start(flags, n)
    verified = n_theory is not None and all(
        any(flags[m - 1:m - 1 + n]) for m in range(n_theory + 1, K - n + 2))
    dold_obs, dold_ok = None, None
    if spectrum.lambda_of > 1 + spectrum.tol:
        with mpmath.workdps(_DPS):
            dflags = [float(abs(mpmath.mpf(dold(nseq.values, k))) / lam ** k) >= gamma / 2 for k in range(1, K + 1)]
        dold_obs = _first_good_start(dflags, n)
        dold_ok = dold_obs is not None
    return WindowReport(gamma, n_theory, n_observed, K, n, verified, cond, dold_obs, dold_ok, tuple(scaled))


@dataclass(frozen=True)
class EarlyReport:
    status: str  # pass, fail, passVacuous
    earliest: int | None
    bounds: tuple[tuple[str, int, bool], ...]  # (which bound, value, satisfied)


def early_nonvanishing(spectrum: ZetaSpectrum, nseq: ExactSeq) -> EarlyReport:
    """Some N(f^i) != 0 with i <= r(f); i < r(f) when rho(f) = 0; i <= M(f)."""
    if spectrum.r_of == 0:
        return EarlyReport("passVacuous", None, ())
    need = max(spectrum.r_of, spectrum.M_of)
    if nseq.K < need:
        raise NeedsMoreTerms(f"needs {need} terms", module=_MODULE, operation="earlyNonvanishing")
    earliest = next((k for k, v in enumerate(nseq.values, start=1) if v), None)
    bounds = [("r(f)", spectrum.r_of, earliest is not None and earliest <= spectrum.r_of)]
    if spectrum.rho_sum == 0:
        bounds.append(("r(f)-1", spectrum.r_of - 1, earliest is not None and earliest <= spectrum.r_of - 1))
    bounds.append(("M(f)", spectrum.M_of, earliest is not None and earliest <= spectrum.M_of))
    status = "pass" if all(ok for _, _, ok in bounds) else "fail"
    return EarlyReport(status, earliest, tuple(bounds))
