"""Lefschetz and Nielsen number sequences from the averaging formulas.

    L(f^k) = (1/#Phi) sum_A det(I - A D^k)
    N(f^k) = (1/#Phi) sum_A |det(I - A D^k)|

Powers of D are built incrementally and shared across the holonomy.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Literal

from .algebra import QMatrix, det
from .errors import ModelError, UsageError
from .manifold import MapSpec

_MODULE = "averaging"

Kind = Literal["Nielsen", "Lefschetz"]


@dataclass(frozen=True)
class ExactSeq:
    kind: Kind
    values: tuple[int, ...]
    spec_name: str
    dim: int = 0
    holonomy_order: int = 1

    @property
    def K(self) -> int:
        return len(self.values)

    def __getitem__(self, k: int) -> int:
        """Value at the 1-based exponent k."""
        if not 1 <= k <= len(self.values):
            raise IndexError(f"exponent {k} outside 1..{len(self.values)}")
        return self.values[k - 1]

    def __len__(self) -> int:
        return len(self.values)

    @classmethod
    def of(cls, values, kind: Kind = "Nielsen", spec_name: str = "", dim: int = 0, holonomy_order: int = 1):
        return cls(kind, tuple(int(v) for v in values), spec_name, dim, holonomy_order)


def _determinants(spec: MapSpec, K: int) -> Iterator[tuple[int, list[Fraction]]]:
    eye = QMatrix.identity(spec.dim)
    power = eye
    for k in range(1, K + 1):
        power = power @ spec.linearization
        yield k, [det(eye - a @ power) for a in spec.holonomy]


def _average(total: Fraction, spec: MapSpec, k: int, what: str) -> int:
    avg = total / spec.order
    if avg.denominator != 1:
        raise ModelError(f"{what} average at k={k} is {avg}, not an integer; the matrices do not describe a manifold map",
                         module=_MODULE, operation=f"{what.lower()}Seq", k=k)
    return int(avg)


def both_seqs(spec: MapSpec, K: int) -> tuple["ExactSeq", "ExactSeq"]:
    """Lefschetz and Nielsen sequences from one shared power ladder."""
    if K < 1:
        raise UsageError("K must be positive", module=_MODULE, operation="nielsenSeq")
    lvals, nvals = [], []
    for k, dets in _determinants(spec, K):
        lvals.append(_average(sum(dets, Fraction(0)), spec, k, "Lefschetz"))
        nvals.append(_average(sum((abs(d) for d in dets), Fraction(0)), spec, k, "Nielsen"))
    meta = dict(spec_name=spec.name, dim=spec.dim, holonomy_order=spec.order)
    return ExactSeq("Lefschetz", tuple(lvals), **meta), ExactSeq("Nielsen", tuple(nvals), **meta)


def lefschetz_seq(spec: MapSpec, K: int) -> ExactSeq:
    if K < 1:
        raise UsageError("K must be positive", module=_MODULE, operation="lefschetzSeq")
    vals = [_average(sum(dets, Fraction(0)), spec, k, "Lefschetz") for k, dets in _determinants(spec, K)]
    return ExactSeq("Lefschetz", tuple(vals), spec.name, spec.dim, spec.order)


def nielsen_seq(spec: MapSpec, K: int) -> ExactSeq:
    if K < 1:
        raise UsageError("K must be positive", module=_MODULE, operation="nielsenSeq")
    vals = [_average(sum((abs(d) for d in dets), Fraction(0)), spec, k, "Nielsen")
            for k, dets in _determinants(spec, K)]
    return ExactSeq("Nielsen", tuple(vals), spec.name, spec.dim, spec.order)


@dataclass(frozen=True)
class BoundVerdict:
    passed: bool
    first_violation: int | None = None
    detail: str = ""


def bound_check(lseq: ExactSeq, nseq: ExactSeq) -> BoundVerdict:
    """|L(f^k)| <= N(f^k) for every k."""
    if lseq.kind != "Lefschetz" or nseq.kind != "Nielsen":
        raise UsageError("expected a Lefschetz and a Nielsen sequence", module=_MODULE, operation="boundCheck")
    if lseq.spec_name != nseq.spec_name or lseq.K != nseq.K:
        raise UsageError("sequences come from different specs or lengths", module=_MODULE, operation="boundCheck")
    for k, (l, n) in enumerate(zip(lseq.values, nseq.values), start=1):
        if abs(l) > n:
            return BoundVerdict(False, k, f"|L(f^{k})| = {abs(l)} > N(f^{k}) = {n}")
    return BoundVerdict(True)


def seq_csv(lseq: ExactSeq, nseq: ExactSeq) -> str:
    lines = ["k,L,N"]
    lines += [f"{k},{l},{n}" for k, (l, n) in enumerate(zip(lseq.values, nseq.values), start=1)]
    return "\n".join(lines) + "\n"
