"""Exact Nielsen and Lefschetz sequences, Nielsen zeta functions, congruences and periods
for affine maps on infra-solvmanifolds of type (R)."""

from .asymptotics import AsymptoticClass, DominantSplit, classify, dominant_split, early_nonvanishing, nonvanishing_window
from .averaging import ExactSeq, bound_check, both_seqs, lefschetz_seq, nielsen_seq
from .errors import NielsenError
from .manifold import MapSpec, catalog, catalog_lookup, dump_spec, load_spec, validate_holonomy_closure
from .multiplicities import (MultiplicityTable, euler_check, gauss_check, mod2_profile, moebius, multiplicity_table,
                             parity_theorem_check)
from .periods import (PeriodReport, density_estimates, hper_inequality, hper_prime_family, hper_prime_powers,
                      hper_primes, orbit_lower_bound, period_report)
from .report import VERSION as __version__
from .zeta import (RecurrenceFit, TraceModel, ZetaSpectrum, assemble_zeta, build_trace_model, extract_spectrum,
                   fit_recurrence, radius_report)

__all__ = [
    "AsymptoticClass", "DominantSplit", "ExactSeq", "MapSpec", "MultiplicityTable", "NielsenError", "PeriodReport",
    "RecurrenceFit", "TraceModel", "ZetaSpectrum", "assemble_zeta", "both_seqs", "bound_check", "build_trace_model",
    "catalog", "catalog_lookup", "classify", "density_estimates", "dominant_split", "dump_spec", "early_nonvanishing",
    "euler_check", "extract_spectrum", "fit_recurrence", "gauss_check", "hper_inequality", "hper_prime_family",
    "hper_prime_powers", "hper_primes", "lefschetz_seq", "load_spec", "mod2_profile", "moebius", "multiplicity_table",
    "nielsen_seq", "nonvanishing_window", "orbit_lower_bound", "parity_theorem_check", "period_report",
    "radius_report", "validate_holonomy_closure",
]
