"""Univariate polynomials with exact rational coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from ..errors import DimensionError
from .matrix import QMatrix, as_fraction


def _trim(c: list[Fraction]) -> tuple[Fraction, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class QPoly:
    """Coefficients in ascending degree; the zero polynomial is ``()``."""

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", _trim([as_fraction(c) for c in coeffs]))

    @classmethod
    def monomial(cls, k: int, c=1) -> "QPoly":
        return cls([0] * k + [c])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "QPoly":
        p = cls([1])
        for r in roots:
            p = p * cls([-as_fraction(r), 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __add__(self, other) -> "QPoly":
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return QPoly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> "QPoly":
        return QPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> "QPoly":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "QPoly":
        return _coerce(other) - self

    def __mul__(self, other) -> "QPoly":
        other = _coerce(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return QPoly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] += x * y
        return QPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "QPoly":
        result, base = QPoly([1]), self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __divmod__(self, other: "QPoly"):
        other = _coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        dq = len(r) - len(other.coeffs)
        if dq < 0:
            return QPoly(), self
        q = [Fraction(0)] * (dq + 1)
        lead = other.coeffs[-1]
        db = len(other.coeffs) - 1
        for k in range(dq, -1, -1):
            c = r[k + db] / lead
            q[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    r[k + j] -= c * b
        return QPoly(q), QPoly(r[:db])

    def __floordiv__(self, other) -> "QPoly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "QPoly":
        return divmod(self, other)[1]

    def exact_div(self, other: "QPoly") -> "QPoly":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("polynomial division is not exact")
        return q

    def __call__(self, x):
        """Horner evaluation; ``x`` may be a scalar of any ring or a QMatrix."""
        if isinstance(x, QMatrix):
            if not x.is_square:
                raise DimensionError("polynomial of a non-square matrix",
                                     module="exact_algebra", operation="QPoly.__call__")
            acc = QMatrix.zeros(x.rows)
            eye = QMatrix.identity(x.rows)
            for c in reversed(self.coeffs):
                acc = acc @ x + eye.scale(c)
            return acc
        acc = 0 * x if not isinstance(x, (int, Fraction)) else Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + _cast(c, x)
        return acc

    def derivative(self) -> "QPoly":
        return QPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> "QPoly":
        if self.is_zero():
            return self
        lc = self.lead
        return QPoly(c / lc for c in self.coeffs)

    def normalized_at_zero(self) -> "QPoly":
        """Scale so the constant term is 1 (requires p(0) != 0)."""
        c0 = self[0]
        if c0 == 0:
            raise ZeroDivisionError("constant term is zero")
        return QPoly(c / c0 for c in self.coeffs)

    def reversed(self, degree: int | None = None) -> "QPoly":
        """z^d p(1/z) with d = degree (defaults to deg p)."""
        d = self.degree if degree is None else degree
        c = list(self.coeffs) + [Fraction(0)] * (d + 1 - len(self.coeffs))
        return QPoly(reversed(c[:d + 1]))

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def primitive(self) -> tuple[Fraction, "QPoly"]:
        """Split into content * primitive integer polynomial.

        The primitive part has a positive lowest nonzero coefficient.
        """
        if self.is_zero():
            return Fraction(0), self
        den = lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = gcd(g, v)
        low = next(v for v in ints if v)
        if low < 0:
            g = -g
        return Fraction(g, den), QPoly(Fraction(v, g) for v in ints)

    def scale_var(self, a) -> "QPoly":
        """p(a z)."""
        a = as_fraction(a)
        return QPoly(c * a ** i for i, c in enumerate(self.coeffs))

    def mod_int(self, p: int) -> tuple[int, ...]:
        if not self.is_integral():
            raise ValueError("reduction mod p needs integer coefficients")
        c = [int(x) % p for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        return tuple(c)

    def __repr__(self) -> str:
        return f"QPoly({[str(c) for c in self.coeffs]})"

    def to_str(self, var: str = "z") -> str:
        return format_poly(self, var)


def _coerce(x) -> QPoly:
    return x if isinstance(x, QPoly) else QPoly([x])


def _cast(c: Fraction, like):
    if isinstance(like, (int, Fraction)):
        return c
    if isinstance(like, complex) or isinstance(like, float):
        return float(c)
    try:
        import mpmath

        if isinstance(like, (mpmath.mpc, mpmath.mpf)):
            return mpmath.mpf(c.numerator) / c.denominator
    except ImportError:  # pragma: no cover
        pass
    return float(c)


def poly_gcd(a: QPoly, b: QPoly) -> QPoly:
    """Monic gcd; gcd(0, 0) = 0."""
    while b:
        a, b = b, a % b
        if b:
            b = b.monic()
    return a.monic()


def poly_xgcd(a: QPoly, b: QPoly) -> tuple[QPoly, QPoly, QPoly]:
    """Return (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = a, b
    s0, s1 = QPoly([1]), QPoly()
    t0, t1 = QPoly(), QPoly([1])
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    lc = r0.lead
    return r0.monic(), s0 * (1 / lc), t0 * (1 / lc)


def inverse_mod(a: QPoly, m: QPoly) -> QPoly:
    g, s, _ = poly_xgcd(a % m, m)
    if g.degree != 0:
        raise ArithmeticError("polynomial is not invertible modulo m")
    return s % m


def squarefree_decomposition(p: QPoly) -> list[tuple[QPoly, int]]:
    """Yun's algorithm: p = c * prod s_i^i with s_i monic, squarefree, coprime.

    Returns the nonconstant factors as (s_i, i).
    """
    if p.degree <= 0:
        return []
    out = []
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p // a
    c = dp // a
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        if a.degree > 0:
            out.append((a.monic(), i))
        b = b // a
        c = d // a
        d = c - b.derivative()
        i += 1
    return out


def squarefree_part(p: QPoly) -> QPoly:
    if p.degree <= 0:
        return p.monic()
    return (p // poly_gcd(p, p.derivative())).monic()


def char_poly(m: QMatrix) -> QPoly:
    """Monic characteristic polynomial det(tI - m) by Faddeev-LeVerrier."""
    m._require_square("char_poly")
    n = m.rows
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    eye = QMatrix.identity(n)
    mk = QMatrix.zeros(n)
    for k in range(1, n + 1):
        mk = m @ mk + eye.scale(coeffs[n - k + 1])
        coeffs[n - k] = -(m @ mk).trace() / k
    return QPoly(coeffs)


def power_sums(p: QPoly, count: int) -> list[Fraction]:
    """Power sums s_1..s_count of the roots of p (with multiplicity), Newton identities."""
    n = p.degree
    if n <= 0:
        return [Fraction(0)] * count
    mp = p.monic()
    # mp = z^n + e_1 z^{n-1} + ... ; e_i = mp[n - i]
    e = [mp[n - i] for i in range(n + 1)]
    s: list[Fraction] = []
    for k in range(1, count + 1):
        acc = -k * e[k] if k <= n else Fraction(0)
        for i in range(1, min(k - 1, n) + 1):
            acc -= e[i] * s[k - i - 1]
        s.append(acc)
    return s


def poly_from_power_sums(sums: Sequence[Fraction], n: int) -> QPoly:
    """Monic degree-n polynomial whose roots have power sums s_1..s_n."""
    e = [Fraction(1)] + [Fraction(0)] * n
    for k in range(1, n + 1):
        acc = -as_fraction(sums[k - 1])
        for i in range(1, k):
            acc -= e[i] * sums[k - i - 1]
        e[k] = acc / k
    return QPoly([e[n - j] for j in range(n + 1)])


def powered_roots_poly(p: QPoly, q: int) -> QPoly:
    """Monic polynomial whose roots are the q-th powers of the roots of p."""
    n = p.degree
    s = power_sums(p, n * q)
    return poly_from_power_sums([s[q * k - 1] for k in range(1, n + 1)], n)


def _divisors(n: int, cap: int = 10 ** 6) -> list[int] | None:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if d > cap:
            return None
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def split_rational_linear(p: QPoly) -> tuple[list[QPoly], QPoly]:
    """Peel off the distinct rational linear factors of p.

    Returns primitive integer linear factors and the cofactor. Candidates come
    from the rational root theorem; very large coefficients skip the search.
    """
    if p.degree <= 1:
        return ([p.primitive()[1]] if p.degree == 1 else []), (QPoly([1]) if p.degree == 1 else p)
    _, prim = p.primitive()
    c0 = next(int(c) for c in prim.coeffs if c)
    lead = int(prim.lead)
    tops, bottoms = _divisors(c0), _divisors(lead)
    if tops is None or bottoms is None:
        return [], p
    factors, rest = [], prim
    for a in tops:
        for b in bottoms:
            if gcd(a, b) != 1:
                continue
            for root in (Fraction(a, b), Fraction(-a, b)):
                if rest.degree >= 1 and rest(root) == 0:
                    lin = QPoly([-root.numerator, root.denominator]).primitive()[1]
                    factors.append(lin)
                    rest = rest.exact_div(lin)
    return factors, rest


def format_poly(p: QPoly, var: str = "z") -> str:
    """Ascending-power rendering, e.g. ``1 - 3z + z^2``."""
    if p.is_zero():
        return "0"
    parts: list[str] = []
    for i, c in enumerate(p.coeffs):
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            mon = var if i == 1 else f"{var}^{i}"
            if mag == 1:
                body = mon
            elif mag.denominator == 1:
                body = f"{mag}{mon}"
            else:
                body = f"({mag}){mon}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)
