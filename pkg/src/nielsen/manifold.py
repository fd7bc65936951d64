"""Input model for affine maps on infra-solvmanifolds of type (R).

A map is described by the induced linear parts of its holonomy group and the
linearization D of an affine homotopy lift. Specs arrive as JSON documents or
come from the built-in catalog of worked examples.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Callable

from .algebra import QMatrix, det
from .errors import DimensionError, ParseError

_MODULE = "manifold_model"


@dataclass(frozen=True)
class MapSpec:
    name: str
    dim: int
    holonomy: tuple[QMatrix, ...]
    linearization: QMatrix
    translation: tuple[Fraction, ...] | None = None
    # set when loading had to add the identity to the holonomy list
    identity_added: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionError("dim must be positive", module=_MODULE, operation="MapSpec")
        if not self.holonomy:
            raise DimensionError("holonomy must be nonempty", module=_MODULE, operation="MapSpec")
        for i, a in enumerate(self.holonomy):
            if (a.rows, a.cols) != (self.dim, self.dim):
                raise DimensionError(f"holonomy[{i}] is {a.rows}x{a.cols}, expected {self.dim}x{self.dim}",
                                     module=_MODULE, operation="MapSpec")
            if not a.is_integral():
                raise DimensionError(f"holonomy[{i}] has non-integer entries", module=_MODULE, operation="MapSpec")
            if det(a) == 0:
                raise DimensionError(f"holonomy[{i}] is singular", module=_MODULE, operation="MapSpec")
        d = self.linearization
        if (d.rows, d.cols) != (self.dim, self.dim):
            raise DimensionError(f"linearization is {d.rows}x{d.cols}, expected {self.dim}x{self.dim}",
                                 module=_MODULE, operation="MapSpec")
        if self.translation is not None and len(self.translation) != self.dim:
            raise DimensionError("translation length differs from dim", module=_MODULE, operation="MapSpec")
        if QMatrix.identity(self.dim) not in self.holonomy:
            raise DimensionError("holonomy must contain the identity", module=_MODULE, operation="MapSpec")

    @property
    def order(self) -> int:
        return len(self.holonomy)

    @classmethod
    def build(cls, name: str, holonomy, linearization, translation=None) -> "MapSpec":
        """Convenience constructor from nested lists; adds the identity if missing."""
        hol = [m if isinstance(m, QMatrix) else QMatrix.from_rows(m) for m in holonomy]
        lin = linearization if isinstance(linearization, QMatrix) else QMatrix.from_rows(linearization)
        eye = QMatrix.identity(lin.rows)
        added = eye not in hol
        if added:
            hol.insert(0, eye)
        tr = tuple(Fraction(x) for x in translation) if translation is not None else None
        return cls(name, lin.rows, tuple(hol), lin, tr, identity_added=added)


# ----------------------------------------------------------------------------
# JSON documents


def _num(x, fieldname: str) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise ParseError(f"expected an integer or a \"p/q\" string, got {x!r}", field=fieldname,
                         module=_MODULE, operation="loadSpec")
    try:
        return Fraction(x.strip()) if isinstance(x, str) else Fraction(x)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"malformed rational {x!r}", field=fieldname, module=_MODULE, operation="loadSpec") from None


def _matrix(obj, fieldname: str) -> QMatrix:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise ParseError("expected a nonempty list of rows", field=fieldname, module=_MODULE, operation="loadSpec")
    width = len(obj[0])
    if any(len(r) != width for r in obj):
        raise ParseError("ragged matrix rows", field=fieldname, module=_MODULE, operation="loadSpec")
    rows = [[_num(x, f"{fieldname}[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(obj)]
    return QMatrix.from_rows(rows)


def _line_of(text: str, key: str) -> int | None:
    m = re.search(rf'"{re.escape(key)}"\s*:', text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def load_spec(source: str | Path) -> MapSpec:
    """Parse a spec document given as a path or as JSON text."""
    text = str(source)
    if isinstance(source, Path) or not text.lstrip().startswith("{"):
        try:
            text = Path(source).read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(f"cannot read spec file: {exc}", module=_MODULE, operation="loadSpec") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, module=_MODULE, operation="loadSpec") from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", line=1, module=_MODULE, operation="loadSpec")
    for key in ("name", "dim", "holonomy", "linearization"):
        if key not in doc:
            raise ParseError(f"missing required field {key!r}", field=key, module=_MODULE, operation="loadSpec")
    name, dim = doc["name"], doc["dim"]
    if not isinstance(name, str):
        raise ParseError("name must be a string", field="name", line=_line_of(text, "name"),
                         module=_MODULE, operation="loadSpec")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise ParseError("dim must be a positive integer", field="dim", line=_line_of(text, "dim"),
                         module=_MODULE, operation="loadSpec")
    hol_doc = doc["holonomy"]
    if not isinstance(hol_doc, list) or not hol_doc:
        raise ParseError("holonomy must be a nonempty list of matrices", field="holonomy",
                         line=_line_of(text, "holonomy"), module=_MODULE, operation="loadSpec")
    holonomy = [_matrix(m, f"holonomy[{i}]") for i, m in enumerate(hol_doc)]
    lin = _matrix(doc["linearization"], "linearization")
    translation = None
    if doc.get("translation") is not None:
        tr = doc["translation"]
        if not isinstance(tr, list):
            raise ParseError("translation must be a list", field="translation", module=_MODULE, operation="loadSpec")
        translation = [_num(x, f"translation[{i}]") for i, x in enumerate(tr)]
    for i, m in enumerate(holonomy):
        if (m.rows, m.cols) != (dim, dim):
            raise DimensionError(f"holonomy[{i}] is {m.rows}x{m.cols}, expected {dim}x{dim}",
                                 module=_MODULE, operation="loadSpec")
    if (lin.rows, lin.cols) != (dim, dim):
        raise DimensionError(f"linearization is {lin.rows}x{lin.cols}, expected {dim}x{dim}",
                             module=_MODULE, operation="loadSpec")
    return MapSpec.build(name, holonomy, lin, translation)


def _enc(x: Fraction):
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def spec_to_dict(spec: MapSpec) -> dict:
    doc = {
        "name": spec.name,
        "dim": spec.dim,
        "holonomy": [[[_enc(x) for x in row] for row in m.to_rows()] for m in spec.holonomy],
        "linearization": [[_enc(x) for x in row] for row in spec.linearization.to_rows()],
    }
    if spec.translation is not None:
        doc["translation"] = [_enc(x) for x in spec.translation]
    return doc


def dump_spec(spec: MapSpec) -> str:
    return json.dumps(spec_to_dict(spec), indent=2)


# ----------------------------------------------------------------------------
# closure


@dataclass(frozen=True)
class ClosureVerdict:
    closed: bool
    witness: tuple[int, int] | None = None
    reason: str = ""


def validate_holonomy_closure(spec: MapSpec) -> ClosureVerdict:
    """Check the holonomy list is closed under products (hence a finite group).

    The witness is a pair of indices whose product is missing. A finite set of
    invertible matrices closed under products is automatically closed under
    inverses, so products suffice.
    """
    members = set(spec.holonomy)
    for (i, a), (j, b) in product(enumerate(spec.holonomy), repeat=2):
        if a @ b not in members:
            return ClosureVerdict(False, (i, j), f"holonomy[{i}] * holonomy[{j}] is not in the set")
    return ClosureVerdict(True)


# ----------------------------------------------------------------------------
# catalog


@dataclass(frozen=True)
class CatalogEntry:
    spec: MapSpec
    expected_n: Callable[[int], int] | None = None
    expected_n_text: str | None = None
    expected_zeta: str | None = None
    expected_lambda: str | None = None
    table_zeta: str | None = None
    notes: str = ""

    @property
    def name(self) -> str:
        return self.spec.name


KLEIN_A = [[1, 0], [0, -1]]
G2_A = [[1, 0, 0], [0, -1, 0], [0, 0, -1]]
T4_D = [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [-1, 2, 0, 2]]
T4_ZETA = "(1 + 2z + 6z^2 + 2z^3 + z^4)(1 - z)^4/(1 - 2z - 2z^3 + z^4)^2"


def _fmt_lin(a: int, b: int) -> str:
    """Render 1 + a z with integer a."""
    if a == 0:
        return "1"
    sign = "+" if a > 0 else "-"
    mag = abs(a)
    return f"1 {sign} {'' if mag == 1 else mag}z"


def klein(r: int, l: int = 0, q: int = 0) -> CatalogEntry:
    """Map of type (r, l, q) on the Klein bottle.

    For odd r the linearization is diag(r, q); for even r it is [[r, 0], [2l, 0]]
    with q = 0. Expected values follow the closed-form table, with the table's
    rendered zeta kept verbatim in ``table_zeta`` for rows that carry one.
    """
    if r % 2 == 0 and q != 0:
        raise ValueError("even r forces q = 0")
    lin = [[r, 0], [0, q]] if r % 2 else [[r, 0], [2 * l, 0]]
    spec = MapSpec.build(f"klein(r={r},l={l},q={q})", [[[1, 0], [0, 1]], KLEIN_A], lin)
    if r == 1:
        return CatalogEntry(spec, lambda k: 0, "0", "1", "0", "1")
    if q == 0 and r == 0:
        return CatalogEntry(spec, lambda k: 1, "1", "1/(1 - z)", "1", "1/(1 - z)")
    if q == 0 and r > 0:
        zeta = f"(1 - z)/({_fmt_lin(-r, 0)})"
        table = f"(1 + z)/({_fmt_lin(-r, 0)})"
        return CatalogEntry(spec, lambda k: r ** k - 1, f"{r}^k - 1", zeta, str(r), table,
                            notes="table row lists (1 + z)/(1 - rz); direct evaluation gives (1 - z)/(1 - rz)")
    if q == 0 and r < 0:
        zeta = f"(1 + z)/({_fmt_lin(r, 0)})"
        return CatalogEntry(spec, lambda k: (-r) ** k - (-1) ** k, f"({-r})^k - (-1)^k", zeta, str(-r), zeta)
    if q * r > 0:
        zeta = f"({_fmt_lin(-q, 0)})/({_fmt_lin(-q * r, 0)})"
        return CatalogEntry(spec, lambda k: (q * r) ** k - q ** k, f"({q * r})^k - ({q})^k", zeta, str(q * r), zeta)
    if q * r < 0:
        zeta = f"({_fmt_lin(q, 0)})/({_fmt_lin(q * r, 0)})"
        return CatalogEntry(spec, lambda k: (-q * r) ** k - (-q) ** k, f"({-q * r})^k - ({-q})^k", zeta,
                            str(-q * r), zeta)
    # odd r, q = 0 but r != 1 falls under the q = 0 rows above; nothing remains
    raise ValueError("unreachable Klein parameters")  # pragma: no cover


def g2_even(l: int, m: int = 0, n: int = 0) -> CatalogEntry:
    lin = [[2 * l, 0, 0], [2 * m, 0, 0], [2 * n, 0, 0]]
    spec = MapSpec.build(f"g2_even(l={l},m={m},n={n})", [G2_A], lin)
    if l == 0:
        zeta, lam = "1/(1 - z)", "1"
    elif l > 0:
        zeta, lam = f"(1 - z)/({_fmt_lin(-2 * l, 0)})", str(2 * l)
    else:
        zeta, lam = f"(1 + z)/({_fmt_lin(2 * l, 0)})", str(-2 * l)
    return CatalogEntry(spec, lambda k: abs((2 * l) ** k - 1), f"|({2 * l})^k - 1|", zeta, lam)


def g2_rotation(d: int, e: int) -> CatalogEntry:
    x = d * d + e * e
    lin = [[-1, 0, 0], [0, d, e], [0, -e, d]]
    spec = MapSpec.build(f"g2_rotation(d={d},e={e})", [G2_A], lin)
    if x == 1:
        zeta = "(1 + z)^2/(1 - z)^2"
    elif x == 0:
        zeta = "(1 + z)/(1 - z)"
    else:
        zeta = f"(1 + z)(1 + {x}z)/((1 - z)(1 - {x}z))"
    return CatalogEntry(spec, lambda k: 2 * (1 + x ** k) if k % 2 else 0, f"2(1 + {x}^k) for odd k, 0 for even k",
                        zeta, str(max(1, x)))


def g2_symmetric(d: int, e: int, f: int) -> CatalogEntry:
    """Symmetric block [[d, e], [e, f]].

    The closed form 2(1 + (mu1 mu2)^k) for odd k needs (1 - mu1^k)(1 - mu2^k) >= 0 for
    every odd k, which holds when both eigenvalues exceed 1 or both lie in [-1, 1]
    appropriately; expected values are attached only when that is the case.
    """
    lin = [[-1, 0, 0], [0, d, e], [0, e, f]]
    spec = MapSpec.build(f"g2_symmetric(d={d},e={e},f={f})", [G2_A], lin)
    p = d * f - e * e
    tr = d + f
    # both eigenvalues > 1 iff char poly t^2 - tr t + p is positive at 1 with vertex beyond 1
    both_large = (1 - tr + p) > 0 and tr > 2
    if not both_large:
        return CatalogEntry(spec, notes="closed form with dropped absolute values does not apply")
    zeta = f"(1 + z)(1 + {p}z)/((1 - z)(1 - {p}z))"
    return CatalogEntry(spec, lambda k: 2 * (1 + p ** k) if k % 2 else 0, f"2(1 + {p}^k) for odd k, 0 for even k",
                        zeta, str(p))


def _torus(name: str, rows) -> MapSpec:
    return MapSpec.build(name, [], rows)


def _base_entries() -> list[CatalogEntry]:
    return [
        CatalogEntry(_torus("circle_identity", [[1]]), lambda k: 0, "0", "1", "0", "1"),
        CatalogEntry(_torus("circle_doubling", [[2]]), lambda k: 2 ** k - 1, "2^k - 1", "(1 - z)/(1 - 2z)", "2"),
        CatalogEntry(_torus("torus2_order3", [[0, 1], [-1, -1]]), lambda k: 0 if k % 3 == 0 else 3,
                     "3, 3, 0 repeating", "(1 + z + z^2)/(1 - z)^2", "1",
                     notes="zeta is (1 - wz)(1 - w'z)/(1 - z)^2 with w a primitive cube root of unity"),
        # the eight-factor display reduces to (1 - z)^2 det(I - z L2) / (det(I - zD) det(I - z L3))
        # with L2, L3 the second and third exterior powers of D; frozen here after reduction
        CatalogEntry(_torus("t4_example", T4_D), None, "-det(I - D^k)", T4_ZETA, "beta",
                     notes="beta is the largest real root of t^4 - 2t^3 - 2t + 1"),
    ]


KLEIN_ROWS = [(1, 0, 2), (3, 0, 2), (3, 0, -2), (0, 1, 0), (3, 0, 0), (-3, 0, 0)]

ALIASES = {
    "klein_r3": "klein(r=3,l=0,q=0)",
    "klein_rm3": "klein(r=-3,l=0,q=0)",
    "klein_r1": "klein(r=1,l=0,q=2)",
    "klein_r0": "klein(r=0,l=1,q=0)",
    "klein_qr_pos": "klein(r=3,l=0,q=2)",
    "klein_qr_neg": "klein(r=3,l=0,q=-2)",
    "g2_even": "g2_even(l=1,m=0,n=0)",
    "g2_rotation": "g2_rotation(d=1,e=1)",
    "g2_symmetric": "g2_symmetric(d=3,e=1,f=2)",
}


def catalog() -> list[CatalogEntry]:
    entries = _base_entries()
    entries += [klein(r, l, q) for r, l, q in KLEIN_ROWS]
    entries += [g2_even(1), g2_even(2, 1, -1), g2_even(-1), g2_even(0)]
    entries += [g2_rotation(1, 1), g2_rotation(2, 1), g2_rotation(0, 1)]
    entries += [g2_symmetric(3, 1, 2), g2_symmetric(2, 1, 1)]
    return entries


_PARAM = re.compile(r"^(klein|g2_even|g2_rotation|g2_symmetric)\((.*)\)$")
_FAMILIES = {"klein": klein, "g2_even": g2_even, "g2_rotation": g2_rotation, "g2_symmetric": g2_symmetric}


def catalog_lookup(name: str) -> CatalogEntry:
    """Find a catalog entry by name or alias; parametrized family names are built on demand."""
    from .errors import UsageError

    key = ALIASES.get(name, name).replace(" ", "").replace("ℓ", "l")
    for entry in catalog():
        if entry.name == key:
            return entry
    m = _PARAM.match(key)
    if m:
        kwargs = {}
        for part in filter(None, m.group(2).split(",")):
            k, _, v = part.partition("=")
            try:
                kwargs[k] = int(v)
            except ValueError:
                raise UsageError(f"bad parameter {part!r}", module=_MODULE, operation="catalog") from None
        try:
            return _FAMILIES[m.group(1)](**kwargs)
        except (TypeError, ValueError) as exc:
            raise UsageError(str(exc), module=_MODULE, operation="catalog") from None
    raise UsageError(f"unknown catalog entry {name!r}", module=_MODULE, operation="catalog")
