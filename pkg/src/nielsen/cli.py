"""Command-line interface: ``nielsen seq|zeta|congruence|classify|periods|catalog|all``.

Exit status 0 on success, 1 on verdict or structural failures, 2 on usage and
parse errors. Every error message names the module and operation of origin.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from functools import cached_property

from .algebra import parse_ratfunc
from .asymptotics import classify, early_nonvanishing, nonvanishing_window
from .averaging import bound_check, both_seqs
from .errors import NielsenError, UsageError
from .manifold import CatalogEntry, MapSpec, catalog, catalog_lookup, load_spec
from .multiplicities import mod2_profile, multiplicity_table, parity_theorem_check, trace_congruences
from .periods import period_report
from .report import Stage, render
from .zeta import (assemble_zeta, build_trace_model, default_dmax, extract_spectrum, fit_recurrence, radius_report,
                   required_terms, torus_closed_form, trace_sequence)

COMMANDS = ("seq", "zeta", "congruence", "classify", "periods", "catalog", "all")
STAGES = ("seq", "zeta", "congruence", "classify", "periods")
MARGIN = 8


@dataclass
class RunConfig:
    command: str
    spec_source: str | None = None
    from_catalog: bool = False
    max_k: int = 24
    tol: float = 1e-10
    max_order: int = 360
    out_format: str = "text"
    header: bool = True


@dataclass
class RunResult:
    status: int
    output: str
    notices: list[str] = field(default_factory=list)
    error: str | None = None


class Pipeline:
    """Stage results computed on demand and shared between stages."""

    def __init__(self, spec: MapSpec, config: RunConfig, entry: CatalogEntry | None = None):
        self.spec = spec
        self.config = config
        self.entry = entry
        self.notices: list[str] = []
        self.failed: list[str] = []

    @cached_property
    def K(self) -> int:
        k = self.config.max_k
        if self.config.command == "seq":
            return k
        need = required_terms(default_dmax(self.spec.dim, self.spec.order), MARGIN)
        if k < need:
            self.notices.append(f"notice: raising --max-k from {k} to {need} for recurrence fitting")
            return need
        return k

    @cached_property
    def seqs(self):
        return both_seqs(self.spec, self.K)

    @cached_property
    def fit(self):
        return fit_recurrence(self.seqs[1], MARGIN)

    @cached_property
    def zeta(self):
        return assemble_zeta(self.fit, self.seqs[1], self.config.tol)

    @cached_property
    def spectrum(self):
        return extract_spectrum(self.fit, self.zeta, self.config.tol)

    @cached_property
    def model(self):
        return build_trace_model(self.spectrum, self.fit, self.seqs[1])

    @cached_property
    def table(self):
        return multiplicity_table(self.seqs[1])

    @cached_property
    def cls(self):
        return classify(self.spectrum, self.config.max_order)

    # -- stages ---------------------------------------------------------------

    def stage_seq(self) -> Stage:
        lseq, nseq = self.seqs
        bound = bound_check(lseq, nseq)
        if not bound.passed:
            self.failed.append("seq")
        payload = {"spec": self.spec.name, "dim": self.spec.dim, "holonomyOrder": self.spec.order, "K": self.K,
                   "lefschetz": list(lseq.values), "nielsen": list(nseq.values),
                   "boundCheck": {"passed": bound.passed, "firstViolation": bound.first_violation}}
        rows = [[k, l, n] for k, (l, n) in enumerate(zip(lseq.values, nseq.values), start=1)]
        return Stage("seq", payload, (["k", "L", "N"], rows), "ok" if bound.passed else "fail")

    def _lefschetz_zeta(self) -> str:
        lseq = self.seqs[0]
        try:
            fit = fit_recurrence(lseq, MARGIN)
            return assemble_zeta(fit, lseq, self.config.tol).to_str()
        except NielsenError as exc:
            return f"unavailable: {exc}"

    def stage_zeta(self) -> Stage:
        sp, fit = self.spectrum, self.fit
        model = self.model
        radius = radius_report(sp, self.spec, self.config.tol)
        payload = {
            "spec": self.spec.name, "K": self.K, "zeta": self.zeta.to_str(), "generatingFunction": fit.S.to_str(),
            "fit": {"linearComplexity": fit.linear_complexity, "fitOrder": fit.fit_order, "verified": fit.verified,
                    "dmax": fit.dmax, "margin": fit.margin},
            "rOf": sp.r_of, "lambdaOf": sp.lambda_of, "lambdaErrorRadius": sp.lambda_radius, "nOf": sp.n_of,
            "rhoOf": sp.rho_sum, "MOf": sp.M_of, "mOf": sp.m_of,
            "spectrum": [{"lambda": str(p.lam), "modulus": p.lam.modulus, "errorRadius": p.lam.error_radius,
                          "rho": p.rho} for p in sp.pairs],
            "radius": {"R": radius.radius, "spExterior": radius.sp_exterior, "eigenvalueOne": radius.eigenvalue_one,
                       "hypothesis": radius.hypothesis, "agrees": radius.agrees, "nInfinity": radius.n_infinity,
                       "entropyLowerBound": radius.entropy_lower_bound},
            "traceModel": {"plusSize": model.m_plus.rows, "minusSize": model.m_minus.rows, "verifiedUpTo": self.K},
            "lefschetzZeta": self._lefschetz_zeta(),
        }
        closed = torus_closed_form(self.spec, self.config.tol)
        if closed is not None:
            payload["closedForm"] = {"zeta": closed.to_str(), "agrees": closed == self.zeta}
            if closed != self.zeta:
                self.failed.append("zeta")
        if self.entry is not None and self.entry.expected_zeta is not None:
            match = parse_ratfunc(self.entry.expected_zeta) == self.zeta
            payload["catalogZeta"] = {"expected": self.entry.expected_zeta, "matches": match}
            if not match:
                self.failed.append("zeta")
        rows = [[i, p.lam.real, p.lam.imag, p.lam.modulus, p.lam.error_radius, p.rho]
                for i, p in enumerate(sp.pairs, start=1)]
        status = "fail" if "zeta" in self.failed else "ok"
        return Stage("zeta", payload, (["i", "lambdaReal", "lambdaImag", "modulus", "errorRadius", "rho"], rows),
                     status)

    def stage_congruence(self) -> Stage:
        tab = self.table
        model = self.model
        gauss_ok = all(v.passed for v in tab.gauss_verdicts)
        euler_ok = all(v.passed for v in tab.euler_verdicts)
        tc = trace_congruences(trace_sequence(model.m_plus, self.K), trace_sequence(model.m_minus, self.K))
        prof = mod2_profile(model)
        parity = []
        if prof.alpha2 is not None:
            for k in range(1, self.K + 1, 2):
                v = parity_theorem_check(tab, prof, k)
                if v.status != "notApplicable":
                    parity.append({"k": k, "status": v.status, "I": v.dold, "reason": v.reason})
        parity_ok = all(p["status"] == "pass" for p in parity)
        rebuild_ok = tab.rebuild() == tab.N
        ok = gauss_ok and euler_ok and tc.passed and parity_ok and rebuild_ok
        if not ok:
            self.failed.append("congruence")
        payload = {
            "spec": self.spec.name, "K": tab.K, "gauss": gauss_ok, "euler": euler_ok,
            "eulerChecked": [f"{v.p}^{v.r}" for v in tab.euler_verdicts],
            "moebiusRoundTrip": rebuild_ok,
            "traceCongruences": {"gaussPlus": tc.gauss_plus, "gaussMinus": tc.gauss_minus,
                                 "eulerPlus": tc.euler_plus, "eulerMinus": tc.euler_minus},
            "negativeDold": tab.negative_indices,
            "mod2": {"alpha2": prof.alpha2, "preperiod": prof.preperiod, "method": prof.method,
                     "conclusive": prof.conclusive},
            "parity": parity,
        }
        rows = []
        for k in range(1, tab.K + 1):
            rows.append([k, tab.N[k - 1], tab.I[k - 1], tab.A[k - 1], tab.EP[k - 1],
                         "pass" if tab.gauss_verdicts[k - 1].passed else "fail",
                         "negative" if tab.negative[k - 1] else ""])
        return Stage("congruence", payload, (["k", "N", "I", "A", "EP", "gauss", "flags"], rows),
                     "ok" if ok else "fail")

    def stage_classify(self) -> Stage:
        sp, cls, nseq = self.spectrum, self.cls, self.seqs[1]
        payload = {"spec": self.spec.name, "tag": cls.tag, "period": cls.period, "residues": list(cls.residues),
                   "angles": [f"{rho}@{a}" for rho, a in cls.angles], "witness": list(cls.witness),
                   "maxOrder": cls.max_order, "definitive": cls.definitive}
        if cls.note:
            payload["classNote"] = cls.note
        notes = []
        if cls.tag == "intervalDense":
            notes.append("interval density of limit points is theorem-backed; the certified fact is the algebraic "
                         "witness (a dominant ratio that is not a root of unity)")
        if sp.r_of and sp.lambda_of >= 1 - sp.tol:
            w = nonvanishing_window(sp, nseq)
            payload["window"] = {"gamma": w.gamma, "windowN": w.n_observed, "nTheory": w.n_theory,
                                 "range": [w.n_observed, w.K], "length": w.window, "verified": w.verified,
                                 "conditionNumber": w.condition, "doldWindowN": w.dold_n_observed,
                                 "doldVerified": w.dold_verified}
            if not w.verified:
                self.failed.append("classify")
        else:
            payload["window"] = {"status": "notApplicable", "reason": "needs lambda(f) >= 1"}
        early = early_nonvanishing(sp, nseq)
        payload["early"] = {"status": early.status, "earliest": early.earliest,
                            "bounds": [f"{name}={val}:{'pass' if ok else 'fail'}" for name, val, ok in early.bounds]}
        if early.status == "fail":
            self.failed.append("classify")
        return Stage("classify", payload, None, "fail" if "classify" in self.failed else "ok", notes)

    def stage_periods(self) -> Stage:
        rep = period_report(self.spectrum, self.cls, self.seqs[1], self.table)
        payload = {"spec": self.spec.name, "K": self.K,
                   "hperCertified": [{"period": c.period, "kind": c.kind, "witness": list(c.witness)}
                                     for c in rep.hper_certified]}
        if rep.cofinite is not None:
            payload["cofinite"] = {"threshold": rep.cofinite.threshold, "verifiedUpTo": rep.cofinite.verified_up_to,
                                   "note": rep.cofinite.note}
        elif rep.prime_powers is not None and rep.prime_powers.reason:
            payload["cofinite"] = {"status": "notApplicable", "reason": rep.prime_powers.reason}
        if rep.orbit_bound is not None:
            ob = rep.orbit_bound
            payload["orbitBound"] = {"status": ob.status, "k": ob.k, "N0": ob.n0, "bound": ob.bound,
                                     "count": ob.count}
            if ob.status == "fail":
                self.failed.append("periods")
        fam = rep.family
        payload["primeFamily"] = {"status": fam.status, "m": fam.m, "q": fam.q, "primes": list(fam.primes),
                                  "failures": list(fam.failures), "note": fam.note}
        d = rep.densities
        payload["densities"] = {"DAlower": d.da_lower, "count": d.count, "window": d.window,
                                "theoremValue": d.theorem_value, "theoremLower": d.theorem_lower, "note": d.note}
        rows = [[c.period, c.kind, " ".join(str(w) for w in c.witness)] for c in rep.hper_certified]
        return Stage("periods", payload, (["period", "kind", "witness"], rows),
                     "fail" if "periods" in self.failed else "ok", list(rep.notes))


def _catalog_stage() -> Stage:
    rows, entries = [], []
    for e in catalog():
        entries.append({"name": e.name, "dim": e.spec.dim, "holonomyOrder": e.spec.order,
                        "expectedZeta": e.expected_zeta, "expectedN": e.expected_n_text})
        rows.append([e.name.replace(",", ";"), e.spec.dim, e.spec.order, e.expected_zeta or "",
                     (e.expected_n_text or "").replace(",", ";")])
    return Stage("catalog", {"entries": entries},
                 (["name", "dim", "holonomyOrder", "expectedZeta", "expectedN"], rows))


def _resolve(config: RunConfig) -> tuple[MapSpec, CatalogEntry | None]:
    if not config.spec_source:
        raise UsageError("one of --spec or --catalog is required", module="cli", operation="run")
    if config.from_catalog:
        entry = catalog_lookup(config.spec_source)
        return entry.spec, entry
    return load_spec(config.spec_source), None


def _check_config(config: RunConfig):
    if config.command not in COMMANDS:
        raise UsageError(f"unknown command {config.command!r}", module="cli", operation="run")
    if config.max_k < 1:
        raise UsageError("--max-k must be positive", module="cli", operation="run")
    if config.max_order < 1:
        raise UsageError("--max-order must be positive", module="cli", operation="run")
    if not config.tol > 0:
        raise UsageError("--tol must be positive", module="cli", operation="run")
    if config.out_format not in ("text", "csv", "json"):
        raise UsageError(f"unknown format {config.out_format!r}", module="cli", operation="run")


def run(config: RunConfig) -> RunResult:
    """One command; the report is deterministic given the config."""
    try:
        _check_config(config)
        if config.command == "catalog":
            return RunResult(0, render([_catalog_stage()], config.out_format, config.header))
        if config.command == "all":
            return run_all(config)
        spec, entry = _resolve(config)
        pipe = Pipeline(spec, config, entry)
        stage = getattr(pipe, f"stage_{config.command}")()
        out = render([stage], config.out_format, config.header)
        return RunResult(1 if pipe.failed else 0, out, pipe.notices)
    except NielsenError as exc:
        return RunResult(exc.exit_status, "", [], str(exc))


def run_all(config: RunConfig) -> RunResult:
    """seq, zeta, congruence, classify, periods in order, bundled; a failure yields a flagged partial bundle."""
    try:
        spec, entry = _resolve(config)
    except NielsenError as exc:
        return RunResult(exc.exit_status, "", [], str(exc))
    pipe = Pipeline(spec, config, entry)
    stages: list[Stage] = []
    for name in STAGES:
        try:
            stages.append(getattr(pipe, f"stage_{name}")())
        except NielsenError as exc:
            stages.append(Stage(name, {"error": str(exc)}, None, "error"))
            out = render(stages, config.out_format, config.header, partial=True)
            return RunResult(exc.exit_status, out, pipe.notices, str(exc))
    out = render(stages, config.out_format, config.header)
    return RunResult(1 if pipe.failed else 0, out, pipe.notices)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"nielsen: error: [cli.parse] {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nielsen", description="Nielsen and Lefschetz sequences, zeta functions and periods "
                                            "of affine maps on infra-solvmanifolds of type (R).")
    p.add_argument("command", choices=COMMANDS)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--spec", metavar="PATH", help="JSON map description file")
    src.add_argument("--catalog", metavar="NAME", help="catalog entry or alias")
    p.add_argument("--max-k", type=int, default=24, help="number of iterates (raised automatically for fitting)")
    p.add_argument("--tol", type=float, default=1e-10, help="root inclusion radius bound")
    p.add_argument("--max-order", type=int, default=360, help="root of unity search limit")
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("--no-header", action="store_true", help="omit the version header line")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = RunConfig(
        command=args.command, spec_source=args.catalog or args.spec, from_catalog=args.catalog is not None,
        max_k=args.max_k, tol=args.tol, max_order=args.max_order, out_format=args.format,
        header=not args.no_header,
    )
    result = run(config)
    for n in result.notices:
        print(n, file=sys.stderr)
    if result.output:
        sys.stdout.write(result.output)
    if result.error:
        print(f"nielsen: error: {result.error}", file=sys.stderr)
    return result.status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
