"""Rational Nielsen zeta functions fitted from exact sequences.

The generating function S(z) = sum_k N(f^k) z^(k-1) of a Nielsen sequence is
u(z)/v(z) with v squarefree and integral residues, so

    N_f(z) = exp(sum_k N(f^k) z^k / k) = prod_i (1 - lambda_i z)^(-rho_i).

The pipeline fits v by Berlekamp-Massey over the rationals, groups the
reciprocal roots of v by residue exactly (gcd with w - c, where w(z) agrees
with the residue map on the roots of v), and only uses numeric roots to name
candidate residues and to report moduli.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .algebra import (ComplexApprox, QMatrix, QPoly, QRationalFunction, certify_real, char_poly, companion,
                      direct_sum, exterior_power, inverse_mod, poly_gcd, poly_roots, poly_roots_with_multiplicity,
                      squarefree_decomposition, zeta_series_from_sequence)
from .averaging import ExactSeq
from .errors import FitError, NeedsMoreTerms, PrecisionError, StructuralError
from .manifold import MapSpec

_MODULE = "zeta_spectrum"
NOT_REALIZABLE = "sequence is not a Nielsen-realizable rational zeta"


def default_dmax(dim: int, holonomy_order: int) -> int:
    return dim * holonomy_order * 2 ** dim


def required_terms(dmax: int, margin: int) -> int:
    return 2 * dmax + margin


# ----------------------------------------------------------------------------
# recurrence fitting


@dataclass(frozen=True)
class RecurrenceFit:
    minimal_denominator: QPoly
    numerator: QPoly
    fit_order: int
    verified: bool
    linear_complexity: int = 0
    dmax: int = 0
    margin: int = 0

    @property
    def S(self) -> QRationalFunction:
        return QRationalFunction(self.numerator, self.minimal_denominator)


def berlekamp_massey(s: list[Fraction]) -> tuple[QPoly, int]:
    """Shortest connection polynomial C (C(0) = 1) and its linear complexity L.

    sum_{i=0..L} C_i s_{n-i} = 0 for every L <= n < len(s).
    """
    c, b = [Fraction(1)], [Fraction(1)]
    L, m, bd = 0, 1, Fraction(1)
    for n in range(len(s)):
        d = s[n] + sum((c[i] * s[n - i] for i in range(1, L + 1) if i < len(c)), Fraction(0))
        if d == 0:
            m += 1
            continue
        coef = d / bd
        shifted = [Fraction(0)] * m + [coef * x for x in b]
        new = [(c[i] if i < len(c) else 0) - (shifted[i] if i < len(shifted) else 0)
               for i in range(max(len(c), len(shifted)))]
        if 2 * L <= n:
            b, bd, L, m = c, d, n + 1 - L, 1
        else:
            m += 1
        c = new
    return QPoly(c), L


def _rank(rows: list[list[Fraction]]) -> int:
    a = [list(r) for r in rows]
    rank, ncols = 0, len(a[0]) if a else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(a)) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for i in range(rank + 1, len(a)):
            if a[i][col]:
                f = a[i][col] / a[rank][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def hankel_rank_profile(s: list[int], max_size: int) -> list[int]:
    """Ranks of the leading j x j Hankel matrices [s_{a+b}] for j = 1..max_size."""
    out = []
    for j in range(1, max_size + 1):
        if 2 * j - 1 > len(s):
            break
        out.append(_rank([[Fraction(s[a + b]) for b in range(j)] for a in range(j)]))
    return out


def fit_recurrence(seq: ExactSeq, verify_margin: int = 8, dmax: int | None = None) -> RecurrenceFit:
    """Minimal v(z), v(0) = 1, with S(z) = u(z)/v(z) on the given terms.

    The first K - verify_margin terms are fitted; the remaining ones are held
    out and must be reproduced for ``verified`` to be true.
    """
    if dmax is None:
        dmax = default_dmax(seq.dim, seq.holonomy_order) if seq.dim else (seq.K - verify_margin) // 2
    need = required_terms(dmax, verify_margin)
    if seq.K < need:
        raise NeedsMoreTerms(f"fitting with Dmax={dmax} needs {need} terms, got {seq.K}",
                             module=_MODULE, operation="fitRecurrence", needed=need)
    s = [Fraction(v) for v in seq.values]
    n_fit = seq.K - verify_margin
    v, L = berlekamp_massey(s[:n_fit])
    if L > dmax:
        profile = hankel_rank_profile(list(seq.values[:n_fit]), dmax + 1)
        raise FitError(f"no recurrence of degree <= {dmax}; Hankel rank profile {profile}",
                       module=_MODULE, operation="fitRecurrence", hankel_ranks=profile)
    # u = S * v truncated below degree L
    u = QPoly(sum((v[i] * s[j - i] for i in range(j + 1)), Fraction(0)) for j in range(L))
    verified = True
    for n in range(n_fit, seq.K):
        if sum((v[i] * s[n - i] for i in range(min(L, n) + 1)), Fraction(0)) != 0:
            verified = False
            break
    return RecurrenceFit(v, u, n_fit, verified, L, dmax, verify_margin)


# ----------------------------------------------------------------------------
# exact residue grouping


def _numeric_residues(v: QPoly, w: QPoly, tol: float) -> list[tuple[ComplexApprox, mpmath.mpc]]:
    out = []
    for s, _m in squarefree_decomposition(v):
        for root in poly_roots(s, tol / 10):
            with mpmath.workdps(60):
                out.append((root, w(root.mp())))
    return out


def residue_blocks(fit: RecurrenceFit, tol: float = 1e-10) -> dict[int, QPoly]:
    """Split v into coprime factors g_c (g_c(0) = 1) by integer residue c.

    On the roots z0 = 1/lambda of v, S(z) has residue -rho; the polynomial
    w = -u (v')^(-1) mod v interpolates rho there, so the block with residue c
    is gcd(v, w - c). Degrees must add up to deg v.
    """
    v, u = fit.minimal_denominator, fit.numerator
    if v.degree <= 0:
        return {}
    if u.degree >= v.degree:
        raise StructuralError(f"{NOT_REALIZABLE}: deg u = {u.degree} >= deg v = {v.degree}",
                              module=_MODULE, operation="assembleZeta", witness=("degree", u.degree))
    if poly_gcd(v, v.derivative()).degree > 0:
        raise StructuralError(f"{NOT_REALIZABLE}: v has repeated roots (non-simple poles)",
                              module=_MODULE, operation="assembleZeta", witness=("repeated", str(v)))
    w = (-u * inverse_mod(v.derivative(), v)) % v
    candidates = set()
    for root, val in _numeric_residues(v, w, tol):
        c = int(mpmath.nint(val.real))
        if abs(val - c) > 1e-6:
            raise StructuralError(f"{NOT_REALIZABLE}: residue {mpmath.nstr(val, 12)} at 1/z0 = {root} is not an integer",
                                  module=_MODULE, operation="assembleZeta", witness=(str(root), str(val)))
        candidates.add(c)
    blocks = {}
    for c in sorted(candidates):
        g = poly_gcd(v, w - c)
        if g.degree > 0:
            blocks[c] = g.normalized_at_zero()
    if sum(g.degree for g in blocks.values()) != v.degree or 0 in blocks:
        raise StructuralError(f"{NOT_REALIZABLE}: residue blocks do not exhaust v",
                              module=_MODULE, operation="assembleZeta", witness=("blocks", sorted(blocks)))
    return blocks


def zeta_from_blocks(blocks: dict[int, QPoly]) -> QRationalFunction:
    num, den = QPoly([1]), QPoly([1])
    for c, g in blocks.items():
        if c < 0:
            num = num * g ** (-c)
        else:
            den = den * g ** c
    return QRationalFunction(num, den)


def assemble_zeta(fit: RecurrenceFit, seq: ExactSeq | None = None, tol: float = 1e-10) -> QRationalFunction:
    """N_f(z) from a verified fit, confirmed two ways.

    The logarithmic derivative identity N_f' = S N_f is checked exactly on
    rational functions; when the sequence is supplied, the series of N_f is
    compared with exp(sum N(f^k) z^k / k) term by term.
    """
    if not fit.verified:
        raise StructuralError("fit is not verified on held-out terms", module=_MODULE, operation="assembleZeta")
    zeta = zeta_from_blocks(residue_blocks(fit, tol))
    if zeta * fit.S != zeta.derivative():
        raise StructuralError(f"{NOT_REALIZABLE}: logarithmic derivative mismatch",
                              module=_MODULE, operation="assembleZeta")
    if seq is not None:
        n = seq.K + 1
        if zeta.series(n) != zeta_series_from_sequence(seq.values, n):
            raise StructuralError(f"{NOT_REALIZABLE}: exponential series mismatch",
                                  module=_MODULE, operation="assembleZeta")
    return zeta


# ----------------------------------------------------------------------------
# spectrum


@dataclass(frozen=True)
class SpectralPair:
    lam: ComplexApprox
    rho: int
    block: int  # index into ZetaSpectrum.blocks


@dataclass(frozen=True)
class ZetaSpectrum:
    zeta: QRationalFunction
    S: QRationalFunction
    pairs: tuple[SpectralPair, ...]
    blocks: tuple[tuple[int, QPoly], ...]  # (rho, g) with g(z) = prod (1 - lambda z)
    r_of: int
    lambda_of: float
    n_of: int
    rho_sum: int
    M_of: int
    m_of: int
    lambda_radius: float = 0.0
    dominant: tuple[int, ...] = ()
    tol: float = 1e-10

    def block_poly(self, i: int) -> QPoly:
        """Monic polynomial in t whose roots are the lambda values of block i."""
        return self.blocks[i][1].reversed()

    def lambda_poly(self) -> QPoly:
        p = QPoly([1])
        for _rho, g in self.blocks:
            p = p * g
        return p.reversed()

    def numeric_value(self, k: int) -> complex:
        return sum(p.rho * p.lam.value ** k for p in self.pairs)


def _dominant_indices(pairs: list[SpectralPair], tol: float) -> tuple[int, ...]:
    if not pairs:
        return ()
    with mpmath.workdps(60):
        mods = [abs(p.lam.mp()) for p in pairs]
        top = max(range(len(pairs)), key=lambda i: mods[i])
        lam = mods[top]
        dom = []
        for i, p in enumerate(pairs):
            gap = lam - mods[i]
            certain = p.lam.precise_radius + pairs[top].lam.precise_radius + mpmath.mpf(10) ** -40
            if gap <= certain:
                dom.append(i)
            elif gap <= tol * max(1, lam):
                raise PrecisionError(f"cannot decide whether |{p.lam}| equals lambda(f) at tol={tol}",
                                     module=_MODULE, operation="extractSpectrum")
    return tuple(dom)


def extract_spectrum(fit: RecurrenceFit, zeta: QRationalFunction, tol: float = 1e-10) -> ZetaSpectrum:
    """Pairs (lambda_i, rho_i) read off the pole and zero orders of N_f(z)."""
    if not fit.verified:
        raise StructuralError("fit is not verified", module=_MODULE, operation="extractSpectrum")
    if zeta.derivative() != zeta * fit.S:
        raise StructuralError("zeta function does not match the fitted generating function",
                              module=_MODULE, operation="extractSpectrum")
    blocks: list[tuple[int, QPoly]] = []
    for s, m in squarefree_decomposition(zeta.denominator):
        blocks.append((m, s.normalized_at_zero()))
    for s, m in squarefree_decomposition(zeta.numerator):
        blocks.append((-m, s.normalized_at_zero()))
    blocks.sort(key=lambda t: (-t[0], t[1].degree, t[1].coeffs))
    pairs: list[SpectralPair] = []
    for bi, (rho, g) in enumerate(blocks):
        for root in poly_roots(g.reversed(), tol / 10):
            pairs.append(SpectralPair(root, rho, bi))
    # conjugate lambdas share the same rho: each block is rational, so only cross-block overlap can break this
    for i in range(len(blocks)):
        for j in range(i + 1, len(blocks)):
            if poly_gcd(blocks[i][1], blocks[j][1]).degree > 0:
                raise StructuralError("conjugate reciprocal roots carry different rho",
                                      module=_MODULE, operation="extractSpectrum")
    pairs.sort(key=lambda p: (-round(p.lam.modulus, 9), -p.rho, -round(p.lam.real, 9), -p.lam.imag))
    dom = _dominant_indices(pairs, tol)
    lam = max((p.lam.modulus for p in pairs), default=0.0)
    lam_rad = max((pairs[i].lam.error_radius for i in dom), default=0.0)
    pos = sum(p.rho for p in pairs if p.rho > 0)
    neg = -sum(p.rho for p in pairs if p.rho < 0)
    return ZetaSpectrum(zeta=zeta, S=fit.S, pairs=tuple(pairs), blocks=tuple(blocks), r_of=len(pairs),
                        lambda_of=lam, n_of=len(dom), rho_sum=pos - neg, M_of=max(pos, neg), m_of=min(pos, neg),
                        lambda_radius=lam_rad, dominant=dom, tol=tol)


# ----------------------------------------------------------------------------
# trace model


@dataclass(frozen=True)
class TraceModel:
    m_plus: QMatrix
    m_minus: QMatrix
    blocks: tuple[tuple[int, QPoly], ...] = ()

    def traces(self, K: int) -> list[int]:
        """tr M+^k - tr M-^k for k = 1..K."""
        plus, minus = trace_sequence(self.m_plus, K), trace_sequence(self.m_minus, K)
        return [a - b for a, b in zip(plus, minus)]


def trace_sequence(m: QMatrix, K: int) -> list[int]:
    """tr(m^k) for k = 1..K by repeated multiplication."""
    if m.rows == 0:
        return [0] * K
    out, power = [], QMatrix.identity(m.rows)
    for _ in range(K):
        power = power @ m
        t = power.trace()
        out.append(int(t) if t.denominator == 1 else t)
    return out


def build_trace_model(spectrum: ZetaSpectrum, fit: RecurrenceFit | None = None,
                      seq: ExactSeq | None = None) -> TraceModel:
    """Integer matrices M+ and M- with N(f^k) = tr M+^k - tr M-^k."""
    plus, minus = [], []
    for rho, g in spectrum.blocks:
        monic = g.reversed()
        if not monic.is_integral():
            raise StructuralError(f"block {monic.to_str('t')} is not an integer polynomial",
                                  module=_MODULE, operation="buildTraceModel")
        comp = companion(monic.coeffs)
        (plus if rho > 0 else minus).extend([comp] * abs(rho))
    model = TraceModel(direct_sum(plus), direct_sum(minus), spectrum.blocks)
    if seq is not None:
        got = model.traces(seq.K)
        for k, (a, b) in enumerate(zip(got, seq.values), start=1):
            if a != b:
                raise StructuralError(f"trace identity fails at k={k}: {a} != {b}",
                                      module=_MODULE, operation="buildTraceModel", k=k)
    return model


# ----------------------------------------------------------------------------
# radius of convergence and exterior spectral radius


@dataclass(frozen=True)
class RadiusReport:
    lambda_of: float
    radius: float | None  # R = 1/lambda(f), None when lambda(f) = 0 (entire)
    sp_exterior: float
    eigenvalue_one: bool
    hypothesis: str  # "noEigenvalueOne", "lambdaAtLeastOne" or "none"
    asserted: bool
    agrees: bool
    n_infinity: float | None
    entropy_lower_bound: float | None


def exterior_spectral_radius(d: QMatrix, tol: float = 1e-10) -> float:
    """sp of the full exterior power: product of |mu| over eigenvalues with |mu| > 1."""
    prod = 1.0
    for mu in poly_roots(char_poly(d), tol / 10):
        if mu.modulus > 1 + mu.error_radius + tol:
            prod *= mu.modulus
    return prod


def radius_report(spectrum: ZetaSpectrum, spec: MapSpec, tol: float = 1e-10) -> RadiusReport:
    lam = spectrum.lambda_of
    cp = char_poly(spec.linearization)
    eig_one = cp(Fraction(1)) == 0
    sp = exterior_spectral_radius(spec.linearization, tol)
    if not eig_one:
        hyp = "noEigenvalueOne"
    elif lam >= 1 - tol:
        hyp = "lambdaAtLeastOne"
    else:
        hyp = "none"
    agrees = abs(lam - sp) <= tol * max(1.0, sp)
    if hyp != "none" and not agrees:
        raise StructuralError(f"lambda(f) = {lam!r} differs from sp = {sp!r} under hypothesis {hyp}",
                              module=_MODULE, operation="radiusReport")
    n_inf = lam if hyp == "noEigenvalueOne" else None
    entropy = math.log(lam) if n_inf is not None and lam > 0 else None
    return RadiusReport(lam, 1 / lam if lam > 0 else None, sp, eig_one, hyp, hyp != "none", agrees, n_inf, entropy)


def torus_closed_form(spec: MapSpec, tol: float = 1e-10) -> QRationalFunction | None:
    """Independent route to N_f(z) on tori, or None when the holonomy is not trivial.

    With p (resp. n) real eigenvalues of D above 1 (resp. below -1), the sign of
    det(I - D^k) is (-1)^(p + n k), so N_f(z) = L_f((-1)^n z)^((-1)^(p+n)), and
    L_f(z) = prod_i det(I - z L_i)^((-1)^(i+1)) with L_i the exterior powers.
    """
    if spec.order != 1:
        return None
    d = spec.linearization
    p_count = n_count = 0
    for root, _m, s in poly_roots_with_multiplicity(char_poly(d), tol / 10):
        if not certify_real(s, root):
            continue
        if root.real > 1 + root.error_radius:
            p_count += _m
        elif root.real < -1 - root.error_radius:
            n_count += _m
        elif abs(abs(root.real) - 1) <= root.error_radius and root.exact is None:
            raise PrecisionError("real eigenvalue too close to +-1", module=_MODULE, operation="closedForm")
    lz = QRationalFunction.one()
    for i in range(spec.dim + 1):
        factor = QRationalFunction(char_poly(exterior_power(d, i)).reversed())
        lz = lz * (factor if i % 2 else factor ** -1)
    sign = -1 if n_count % 2 else 1
    num, den = lz.numerator.scale_var(sign), lz.denominator.scale_var(sign)
    out = QRationalFunction(num, den)
    return out if (p_count + n_count) % 2 == 0 else out ** -1
