"""Rational functions in z normalized to value 1 denominator at the origin,
truncated power series helpers, and a small parser for rendered forms."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .matrix import as_fraction
from .poly import QPoly, poly_gcd, split_rational_linear, squarefree_decomposition


@dataclass(frozen=True)
class QRationalFunction:
    numerator: QPoly
    denominator: QPoly

    def __init__(self, numerator, denominator=QPoly([1])):
        num = numerator if isinstance(numerator, QPoly) else QPoly([numerator])
        den = denominator if isinstance(denominator, QPoly) else QPoly([denominator])
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = poly_gcd(num, den) if num else QPoly([1])
        if g.degree > 0:
            num, den = num // g, den // g
        if num.is_zero():
            den = QPoly([1])
        c0 = den[0]
        if c0 == 0:
            raise ValueError("rational function has a pole at z = 0")
        object.__setattr__(self, "numerator", QPoly(c / c0 for c in num.coeffs))
        object.__setattr__(self, "denominator", QPoly(c / c0 for c in den.coeffs))

    @classmethod
    def one(cls) -> "QRationalFunction":
        return cls(QPoly([1]))

    def is_one(self) -> bool:
        return self.numerator == QPoly([1]) and self.denominator == QPoly([1])

    def __mul__(self, other: "QRationalFunction") -> "QRationalFunction":
        return QRationalFunction(self.numerator * other.numerator, self.denominator * other.denominator)

    def __truediv__(self, other: "QRationalFunction") -> "QRationalFunction":
        return QRationalFunction(self.numerator * other.denominator, self.denominator * other.numerator)

    def __pow__(self, k: int) -> "QRationalFunction":
        if k < 0:
            return QRationalFunction(self.denominator ** (-k), self.numerator ** (-k))
        return QRationalFunction(self.numerator ** k, self.denominator ** k)

    def derivative(self) -> "QRationalFunction":
        p, q = self.numerator, self.denominator
        return QRationalFunction(p.derivative() * q - p * q.derivative(), q * q)

    def series(self, n: int) -> list[Fraction]:
        """First n Taylor coefficients at z = 0."""
        return series_div(list(self.numerator.coeffs), list(self.denominator.coeffs), n)

    def __call__(self, z):
        return self.numerator(z) / self.denominator(z)

    def to_str(self) -> str:
        return format_ratfunc(self)

    def __str__(self) -> str:
        return self.to_str()


def series_div(num: Sequence[Fraction], den: Sequence[Fraction], n: int) -> list[Fraction]:
    d0 = as_fraction(den[0])
    out: list[Fraction] = []
    for k in range(n):
        acc = as_fraction(num[k]) if k < len(num) else Fraction(0)
        for j in range(1, min(k, len(den) - 1) + 1):
            if den[j]:
                acc -= den[j] * out[k - j]
        out.append(acc / d0)
    return out


def series_exp(a: Sequence[Fraction], n: int) -> list[Fraction]:
    """exp of a power series with a[0] = 0, first n coefficients.

    Uses b' = a' b, i.e. k b_k = sum_{j=1..k} j a_j b_{k-j}.
    """
    if a and a[0] != 0:
        raise ValueError("series_exp needs zero constant term")
    b = [Fraction(1)]
    for k in range(1, n):
        acc = Fraction(0)
        for j in range(1, k + 1):
            if j < len(a) and a[j]:
                acc += j * a[j] * b[k - j]
        b.append(acc / k)
    return b[:n]


def zeta_series_from_sequence(values: Sequence[int], n: int) -> list[Fraction]:
    """Coefficients of exp(sum_k N_k z^k / k) up to z^(n-1)."""
    a = [Fraction(0)] + [Fraction(v, k) for k, v in enumerate(values, start=1)]
    if n > len(a):
        raise ValueError("not enough sequence terms for the requested series length")
    return series_exp(a[:n], n)


def _factor_string(p: QPoly) -> tuple[Fraction, str, int]:
    """Split p into a rational content and juxtaposed factors.

    Factors are primitive integer polynomials with positive lowest coefficient:
    a power of z first, then rational linear factors and the remaining
    squarefree parts, ordered by multiplicity and degree.
    """
    if p.degree <= 0:
        return (p[0] if p else Fraction(0)), "", 0
    shift = 0
    while p[shift] == 0:
        shift += 1
    rest = QPoly(p.coeffs[shift:])
    pieces = []
    for sq, m in squarefree_decomposition(rest):
        linear, other = split_rational_linear(sq)
        pieces += [(f, m) for f in linear]
        if other.degree > 0:
            pieces.append((other.primitive()[1], m))
    pieces.sort(key=lambda t: (t[1], t[0].degree, [abs(c) for c in t[0].coeffs], t[0].coeffs))
    prod = QPoly([1])
    for prim, m in pieces:
        prod = prod * prim ** m
    content = rest.lead / prod.lead
    parts = []
    if shift:
        parts.append("z" if shift == 1 else f"z^{shift}")
    for prim, m in pieces:
        body = f"({prim.to_str()})"
        parts.append(body if m == 1 else f"{body}^{m}")
    return content, "".join(parts), len(parts)


def format_ratfunc(f: QRationalFunction) -> str:
    """Canonical text: factored integer polynomials in ascending powers.

    Examples: ``1``, ``(1 - z)/(1 - 3z)``, ``(1 + z + z^2)/(1 - z)^2``,
    ``3*(1 + z)/(1 - z^3)``, ``(1 + z)(1 + 2z)/((1 - z)(1 - 2z))``.
    """
    num, den = f.numerator, f.denominator
    if num.is_zero():
        return "0"
    cn, tn, _ = _factor_string(num)
    cd, td, nd = _factor_string(den)
    c = cn / cd
    if not tn:
        head = str(c)
    elif c == 1:
        head = tn
    elif c == -1:
        head = "-" + tn
    else:
        head = f"{c}*{tn}"
    if not td:
        return head
    return f"{head}/({td})" if nd > 1 else f"{head}/{td}"


# ----------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|(z)|(\^)|([-+*/()]))")


def parse_ratfunc(text: str) -> QRationalFunction:
    """Parse expressions in z built from integers, + - * / ^ and parentheses.

    Juxtaposition multiplies (``3z``, ``2(1+z)``). Exponents must be
    nonnegative integers; division may only occur between polynomials.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"unexpected character at {pos} in {text!r}")
        pos = m.end()
        num, var, caret, op = m.groups()
        tokens.append(num if num is not None else var or caret or op)
    parser = _Parser(tokens)
    value = parser.expr()
    if parser.i != len(tokens):
        raise ValueError(f"trailing input in {text!r}")
    return QRationalFunction(*value)


class _Parser:
    # values are (numerator, denominator) QPoly pairs

    def __init__(self, tokens):
        self.t = tokens
        self.i = 0

    def peek(self):
        return self.t[self.i] if self.i < len(self.t) else None

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expr(self):
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take() == "-" else 1
        n, d = self.term()
        n = n * sign
        while self.peek() in ("+", "-"):
            op = self.take()
            n2, d2 = self.term()
            n = n * d2 + (n2 * d if op == "+" else -(n2 * d))
            d = d * d2
        return n, d

    def term(self):
        n, d = self.power()
        while True:
            tok = self.peek()
            if tok == "*":
                self.take()
                n2, d2 = self.power()
                n, d = n * n2, d * d2
            elif tok == "/":
                self.take()
                n2, d2 = self.power()
                n, d = n * d2, d * n2
            elif tok is not None and (tok == "(" or tok == "z" or tok.isdigit()):
                n2, d2 = self.power()
                n, d = n * n2, d * d2
            else:
                return n, d

    def power(self):
        n, d = self.atom()
        if self.peek() == "^":
            self.take()
            tok = self.take()
            if tok is None or not tok.isdigit():
                raise ValueError("exponent must be a nonnegative integer")
            k = int(tok)
            n, d = n ** k, d ** k
        return n, d

    def atom(self):
        tok = self.take()
        if tok is None:
            raise ValueError("unexpected end of input")
        if tok.isdigit():
            return QPoly([int(tok)]), QPoly([1])
        if tok == "z":
            return QPoly([0, 1]), QPoly([1])
        if tok == "(":
            v = self.expr()
            if self.take() != ")":
                raise ValueError("missing ')'")
            return v
        if tok == "-":
            n, d = self.power()
            return -n, d
        raise ValueError(f"unexpected token {tok!r}")
