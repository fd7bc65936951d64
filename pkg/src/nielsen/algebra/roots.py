"""Certified numeric roots of rational polynomials and exact root-of-unity tests.

Roots are the only approximate objects in the package. Each one carries an
inclusion radius: the disk around the stored value is guaranteed to hold
exactly one true root (counted per squarefree factor). The radii come from
Weierstrass corrections, which give disjoint inclusion disks once the
approximations are good enough.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

import mpmath
import numpy as np

from ..errors import ConvergenceError, PrecisionError, PreconditionError
from .poly import QPoly, powered_roots_poly, squarefree_decomposition, squarefree_part

_MODULE = "exact_algebra"
_BASE_DPS = 60
_MAX_DPS = 480


@dataclass(frozen=True)
class ComplexApprox:
    real: float
    imag: float
    error_radius: float
    # high-precision value and exact rational value when the root is rational
    precise: object = field(default=None, compare=False, repr=False)
    exact: Fraction | None = field(default=None, compare=False, repr=False)
    # inclusion radius of ``precise`` itself, before rounding to floats
    precise_radius: float = field(default=0.0, compare=False, repr=False)

    @property
    def value(self) -> complex:
        return complex(self.real, self.imag)

    @property
    def modulus(self) -> float:
        return abs(self.value)

    def mp(self):
        if self.precise is not None:
            return self.precise
        return mpmath.mpc(self.real, self.imag)

    def __str__(self) -> str:
        if self.imag == 0:
            return f"{self.real:.12g}"
        sign = "+" if self.imag >= 0 else "-"
        return f"{self.real:.12g}{sign}{abs(self.imag):.12g}i"


def _mp_coeffs(p: QPoly):
    return [mpmath.mpf(c.numerator) / c.denominator for c in p.coeffs]


def _horner(coeffs, z):
    acc = mpmath.mpc(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def _aberth(coeffs, z, dps, sweeps=400):
    n = len(z)
    dcoeffs = [i * c for i, c in enumerate(coeffs) if i]
    eps = mpmath.mpf(10) ** (-(dps - 8))
    for _ in range(sweeps):
        worst = mpmath.mpf(0)
        for i in range(n):
            zi = z[i]
            pv = _horner(coeffs, zi)
            if pv == 0:
                continue
            dv = _horner(dcoeffs, zi)
            ratio = pv / dv if dv != 0 else pv
            s = mpmath.fsum(1 / (zi - z[j]) for j in range(n) if j != i and zi != z[j])
            step = ratio / (1 - ratio * s)
            z[i] = zi - step
            worst = max(worst, abs(step) / max(1, abs(z[i])))
        if worst < eps:
            return z, True
    return z, False


def _weierstrass_radii(coeffs, z, dps):
    n = len(z)
    lead = coeffs[-1]
    slack = mpmath.mpf(10) ** (-(dps - 6))
    radii = []
    for i in range(n):
        denom = lead
        for j in range(n):
            if j != i:
                denom *= z[i] - z[j]
        w = _horner(coeffs, z[i]) / denom if denom != 0 else mpmath.inf
        radii.append(n * abs(w) + slack * max(1, abs(z[i])))
    return radii


def _disjoint(z, radii) -> bool:
    n = len(z)
    return all(abs(z[i] - z[j]) > radii[i] + radii[j] for i in range(n) for j in range(i + 1, n))


def _squarefree_roots(s: QPoly, tol: float) -> list[ComplexApprox]:
    n = s.degree
    if n == 1:
        x = -s[0] / s[1]
        fx = float(x)
        return [ComplexApprox(fx, 0.0, abs(fx) * 2.0 ** -52, mpmath.mpc(mpmath.mpf(x.numerator) / x.denominator), x)]
    scale = max(abs(c) for c in s.coeffs)
    start = np.roots([float(c / scale) for c in reversed(s.coeffs)])
    dps = _BASE_DPS
    best = None
    with mpmath.workdps(dps):
        z = [mpmath.mpc(complex(w)) for w in start]
    while dps <= _MAX_DPS:
        with mpmath.workdps(dps):
            coeffs = _mp_coeffs(s)
            z = [mpmath.mpc(w) for w in z]
            # numpy occasionally returns coincident starts; spread them
            for i in range(n):
                for j in range(i):
                    if abs(z[i] - z[j]) < mpmath.mpf(10) ** (-12):
                        z[i] += mpmath.mpc(0, 1) * mpmath.mpf(10) ** (-6) * (i + 1)
            z, converged = _aberth(coeffs, z, dps)
            radii = _weierstrass_radii(coeffs, z, dps)
            best = [complex(w) for w in z]
            if converged and _disjoint(z, radii):
                out = []
                for w, r in zip(z, radii):
                    fw = complex(w)
                    total = r + abs(w - mpmath.mpc(fw))
                    rad = float(total) * (1 + 2.0 ** -40) + 1e-300
                    if rad > tol:
                        break
                    out.append(ComplexApprox(fw.real, fw.imag, rad, +w, None, float(r) * 2))
                else:
                    return out
        dps *= 2
    raise ConvergenceError(f"roots of degree-{n} factor did not certify below tol={tol}",
                           module=_MODULE, operation="polyRoots", best=best)


def _root_key(c: ComplexApprox):
    return (-round(c.modulus, 9), -round(c.real, 9), -c.imag)


def poly_roots_with_multiplicity(p: QPoly, tol: float = 1e-10) -> list[tuple[ComplexApprox, int, QPoly]]:
    """Roots of p grouped as (root, multiplicity, squarefree factor holding it)."""
    if p.is_zero():
        raise PreconditionError("zero polynomial has no finite root set", module=_MODULE, operation="polyRoots")
    out = []
    for s, m in squarefree_decomposition(p):
        for c in _squarefree_roots(s, tol):
            out.append((c, m, s))
    out.sort(key=lambda t: _root_key(t[0]))
    return out


def poly_roots(p: QPoly, tol: float = 1e-10) -> list[ComplexApprox]:
    """All complex roots of p, repeated according to multiplicity."""
    return [c for c, m, _ in poly_roots_with_multiplicity(p, tol) for _ in range(m)]


def certify_real(s: QPoly, root: ComplexApprox) -> bool:
    """True when the root is provably real.

    The inclusion disk holds exactly one root of s; an exact sign change of s
    across the real diameter of that disk places a real root inside it.
    """
    if root.exact is not None:
        return True
    if abs(root.imag) > root.error_radius:
        return False
    x = Fraction(root.real)
    r = Fraction(root.error_radius)
    a, b = s(x - r), s(x + r)
    return a * b < 0


# ----------------------------------------------------------------------------
# roots of unity


def _totient(q: int) -> int:
    result, n, p = q, q, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def max_order_for_degree(d: int) -> int:
    """Largest q with phi(q) <= d; a root of unity of degree <= d has order <= this."""
    # phi(q) >= sqrt(q / 2), so q <= 2 d^2 bounds the scan
    best = 1
    for q in range(1, 2 * d * d + 3):
        if _totient(q) <= d:
            best = q
    return best


@dataclass(frozen=True)
class UnityVerdict:
    order: int | None
    max_order: int
    degree_bound: int
    order_bound: int

    @property
    def definitive(self) -> bool:
        """Absence of an order is a proof (not just a search limit)."""
        return self.order is not None or self.max_order >= self.order_bound


def _locate(c: ComplexApprox, roots: list[ComplexApprox]) -> int:
    best, arg = None, None
    for i, z in enumerate(roots):
        d = abs(z.value - c.value)
        if best is None or d < best:
            best, arg = d, i
    if best is None or best > roots[arg].error_radius + c.error_radius + 1e-9 * max(1.0, c.modulus):
        raise PreconditionError(f"{c} is not a root of the given polynomial",
                                module=_MODULE, operation="isRootOfUnityRatio")
    return arg


def _coincidence_pairs(p_q: QPoly) -> int:
    # ordered pairs i != j with equal roots, read off exact multiplicities
    return sum(s.degree * m * (m - 1) for s, m in squarefree_decomposition(p_q))


def root_of_unity_order(p: QPoly, root_a: ComplexApprox, root_b: ComplexApprox, max_order: int,
                        degree_bound: int | None = None, tol: float = 1e-10) -> UnityVerdict:
    """Least q <= max_order with (root_a / root_b)^q = 1, certified exactly.

    Candidates come from a high-precision screen. A candidate q is accepted
    only after the exact polynomial with roots z_i^q (built from Newton power
    sums) confirms that the numerically coincident pairs (z_i^q, z_j^q) are
    exactly the coincidences it has. ``degree_bound`` bounds the algebraic
    degree of the ratio; orders with phi(q) above it are impossible.
    """
    if abs(root_a.modulus - root_b.modulus) > root_a.error_radius + root_b.error_radius + tol:
        raise PreconditionError("roots have different moduli", module=_MODULE, operation="isRootOfUnityRatio")
    base = squarefree_part(p)
    n = base.degree
    dbound = degree_bound if degree_bound is not None else max(1, n * (n - 1))
    qbound = max_order_for_degree(dbound)

    roots = poly_roots(base, tol / 10)
    ia, ib = _locate(root_a, roots), _locate(root_b, roots)
    if ia == ib:
        return UnityVerdict(1, max_order, dbound, qbound)
    limit = min(max_order, qbound)
    with mpmath.workdps(_BASE_DPS):
        zs = [r.mp() for r in roots]
        ratio = zs[ia] / zs[ib]
        screen = mpmath.mpf(10) ** (-25)
        t = mpmath.mpc(1)
        for q in range(1, limit + 1):
            t *= ratio
            if abs(t - 1) > screen:
                continue
            pq = powered_roots_poly(base, q)
            expected = _coincidence_pairs(pq)
            powers = [z ** q for z in zs]
            near = {(i, j) for i in range(n) for j in range(n)
                    if i != j and abs(powers[i] - powers[j]) <= screen * max(1, abs(powers[i]))}
            if len(near) > expected:
                raise PrecisionError(f"cannot separate roots at order {q}; tighten tol",
                                     module=_MODULE, operation="isRootOfUnityRatio")
            if len(near) == expected and (ia, ib) in near:
                return UnityVerdict(q, max_order, dbound, qbound)
    return UnityVerdict(None, max_order, dbound, qbound)


def is_root_of_unity_ratio(p: QPoly, root_a: ComplexApprox, root_b: ComplexApprox,
                           max_order: int, degree_bound: int | None = None) -> int | None:
    return root_of_unity_order(p, root_a, root_b, max_order, degree_bound).order


def lcm_all(values) -> int:
    return reduce(math.lcm, values, 1)
