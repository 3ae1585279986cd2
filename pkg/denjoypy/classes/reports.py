from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
import sympy as sp
from mpmath import iv

from denjoypy.classes.rational_interval import RationalInterval
from denjoypy.parser.constants import SERIES_COLUMNS
from denjoypy.shared.intervals import format_endpoint, lower, upper
from denjoypy.shared.utilities import IndexWindow


@dataclass(frozen=True)
class GapClass:
    """
    One length class of an orbit partition.

    Every gap in the class runs from a point t*alpha to a point (t + d)*alpha, so its length is the
    linear form ``d * alpha - j`` with integers d = ``difference`` and j = ``shift``.
    """

    difference: int
    shift: int
    multiplicity: int
    length: RationalInterval

    @property
    def form(self) -> Tuple[int, int]:
        return self.difference, self.shift

    def to_dict(self) -> dict:
        return {
            "difference": self.difference,
            "multiplicity": self.multiplicity,
            "length": float(self.length),
            "length_lo": float(self.length.lo),
            "length_hi": float(self.length.hi),
        }


@dataclass
class ThreeGapReport:
    """
    Gap structure of the orbit {t alpha : t_min <= t <= t_max}.

    Classes are sorted by decreasing length, so ``classes[0]`` is the maximal gap. ``reference_n``
    is the convergent index the orbit is compared against, with ``reference_norm`` enclosing
    ||q_n alpha||. ``anomalous`` holds the single odd gap of a symmetric orbit when present.
    """

    alpha: str
    t_min: int
    t_max: int
    classes: List[GapClass]
    reference_n: Optional[int] = None
    reference_norm: Optional[RationalInterval] = None
    anomalous: Optional[GapClass] = None
    ordering_depth: Optional[int] = None
    analytic: bool = False
    alpha_float: float = float("nan")
    orbit: Optional[np.ndarray] = None
    gap_differences: Optional[np.ndarray] = None

    @property
    def n_points(self) -> int:
        return self.t_max - self.t_min + 1

    @property
    def max_gap(self) -> GapClass:
        return self.classes[0]

    @property
    def min_gap(self) -> GapClass:
        return self.classes[-1]

    @property
    def multiplicities(self) -> List[int]:
        return [c.multiplicity for c in self.classes]

    def total_length(self) -> RationalInterval:
        """Interval enclosing the sum of all gap lengths, which is exactly 1."""
        lo = sum((c.multiplicity * c.length.lo for c in self.classes), sp.Integer(0))
        hi = sum((c.multiplicity * c.length.hi for c in self.classes), sp.Integer(0))
        return RationalInterval(lo, hi)

    def to_dict(self) -> dict:
        out = {
            "alpha": self.alpha,
            "t_min": self.t_min,
            "t_max": self.t_max,
            "n_points": self.n_points,
            "analytic": self.analytic,
            "classes": [c.to_dict() for c in self.classes],
            "max_gap": self.max_gap.to_dict(),
            "min_gap": self.min_gap.to_dict(),
            "reference_n": self.reference_n,
            "reference_norm": None,
            "anomalous": None if self.anomalous is None else self.anomalous.to_dict(),
        }
        if self.reference_norm is not None:
            out["reference_norm"] = {
                "lo": float(self.reference_norm.lo),
                "hi": float(self.reference_norm.hi),
            }
        return out

    def plot_frame(self) -> pd.DataFrame:
        """
        One row per orbit point in circle order: the index t, the position t*alpha mod 1 and the
        length of the gap that follows it.
        """
        if self.orbit is None:
            raise ValueError("Plot data is only available for enumerated orbits.")

        lengths = {c.difference: float(c.length) for c in self.classes}
        positions = np.mod(self.orbit.astype(float) * self.alpha_float, 1.0)
        return pd.DataFrame(
            {
                "t": self.orbit,
                "position": positions,
                "gap_length": [lengths[int(d)] for d in self.gap_differences],
                "gap_difference": self.gap_differences,
            }
        )


@dataclass(frozen=True)
class BoundRow:
    """
    One estimator value at convergent index n.

    The interval is stored as raw mpmath endpoints so that rows pickle across joblib workers.
    ``direction`` says which endpoint is the certified bound.
    """

    n: int
    q: Optional[int]
    N: Optional[int]
    Q: Optional[int]
    method: str
    beta: float
    value_mpi: tuple
    truncation_L: Optional[int] = None
    offset: Optional[int] = None
    m: Optional[int] = None
    direction: str = "lower"

    @property
    def value(self) -> "iv.mpf":
        return iv.make_mpf(self.value_mpi)

    @property
    def bound(self) -> float:
        """The certified endpoint as a float, rounded in the safe direction."""
        return lower(self.value) if self.direction == "lower" else upper(self.value)

    def to_record(self) -> dict:
        return {
            "n": self.n,
            "q_n": "" if self.q is None else self.q,
            "N_n": "" if self.N is None else self.N,
            "Q_n": "" if self.Q is None else self.Q,
            "method": self.method,
            "beta": self.beta,
            "value_lo": format_endpoint(self.value, "lower"),
            "value_hi": format_endpoint(self.value, "upper"),
            "truncation_L": "" if self.truncation_L is None else self.truncation_L,
            "offset": "" if self.offset is None else self.offset,
            "direction": self.direction,
        }


@dataclass(frozen=True)
class LiminfSummary:
    """
    Finite-window proxy for a liminf: the smallest certified value over the window and the
    least-squares slope of ln(value) against n.
    """

    window: IndexWindow
    infimum: float
    trend_slope: float
    n_values: List[int] = field(default_factory=list)
    log_values: List[float] = field(default_factory=list)
    label: str = "empirical liminf over a finite window (not a certified liminf)"

    def to_dict(self) -> dict:
        return {
            "window": str(self.window),
            "infimum": self.infimum,
            "trend_slope": self.trend_slope,
            "label": self.label,
        }


@dataclass
class BoundSeries:
    method: str
    beta: float
    rows: List[BoundRow]
    alpha: str = ""
    model: str = ""
    empirical_liminf: Optional[LiminfSummary] = None

    @property
    def n_values(self) -> List[int]:
        return [row.n for row in self.rows]

    def row(self, n: int) -> BoundRow:
        for r in self.rows:
            if r.n == n:
                return r
        raise KeyError(f"No row for n = {n} in the {self.method} series")

    def window_rows(self, window: IndexWindow) -> List[BoundRow]:
        return [r for r in self.rows if r.n in window]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([r.to_record() for r in self.rows], columns=SERIES_COLUMNS)

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "beta": self.beta,
            "alpha": self.alpha,
            "model": self.model,
            "rows": [r.to_record() for r in self.rows],
            "empirical_liminf": (
                None if self.empirical_liminf is None else self.empirical_liminf.to_dict()
            ),
        }


@dataclass(frozen=True)
class BisectionResult:
    """
    Bracket [beta_lo, beta_hi] for the dimension lower bound from bisection on the positivity
    predicate. ``status`` is "bracketed", "saturated" (the predicate holds on the whole bracket)
    or "indeterminate".
    """

    beta_lo: float
    beta_hi: float
    status: str
    method: str
    window: IndexWindow
    threshold: float
    tolerance: float
    evaluations: List[Tuple[float, bool]] = field(default_factory=list)

    @property
    def estimate(self) -> float:
        return (self.beta_lo + self.beta_hi) / 2

    def to_dict(self) -> dict:
        return {
            "beta_lo": self.beta_lo,
            "beta_hi": self.beta_hi,
            "status": self.status,
            "method": self.method,
            "window": str(self.window),
            "threshold": self.threshold,
            "tolerance": self.tolerance,
            "evaluations": [{"beta": b, "positive": p} for b, p in self.evaluations],
        }


@dataclass(frozen=True)
class ClosedFormBound:
    value: float
    delta: float
    nu_hat: float
    provenance: str = "depends on a finite-window estimate of the Diophantine class"

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "delta": self.delta,
            "nu_hat": self.nu_hat,
            "provenance": self.provenance,
        }


@dataclass
class UpperCoverSummary:
    """
    Covering upper bounds (2n+1)^(1-delta) tail(n)^delta per n, with the limit constant they tend to
    in the normalized convention and in the convention that keeps the raw lengths.
    """

    series: BoundSeries
    limit_constant: Optional[float]
    printed_convention_constant: Optional[float]
    printed_sign_note: str
    conclusion: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "series": self.series.to_dict(),
            "limit_constant": self.limit_constant,
            "printed_convention_constant": self.printed_convention_constant,
            "printed_sign_note": self.printed_sign_note,
            "conclusion": self.conclusion,
        }


@dataclass(frozen=True)
class CorollaryRow:
    eps: float
    exponent: float
    verdict: bool
    fitted_constant: float
    log_ratio_slope: float
    degenerate: bool

    def to_dict(self) -> dict:
        return {
            "eps": self.eps,
            "exponent": self.exponent,
            "verdict": self.verdict,
            "fitted_constant": self.fitted_constant,
            "log_ratio_slope": self.log_ratio_slope,
            "degenerate": self.degenerate,
        }


@dataclass
class CorollaryCheck:
    delta: float
    rows: List[CorollaryRow]
    samples: List[int]
    label: str = "heuristic evidence along a sampled subsequence, not a proof"

    @property
    def verdict(self) -> bool:
        return all(r.verdict for r in self.rows)

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "verdict": self.verdict,
            "rows": [r.to_dict() for r in self.rows],
            "samples": self.samples,
            "label": self.label,
        }


@dataclass
class DimensionReport:
    """
    Everything known about dim_H of the minimal set for one (alpha, gap sequence) pair, with the
    provenance of every number.
    """

    inputs: Dict[str, object]
    beta_star_lower: BisectionResult
    closed_form_lower: Optional[ClosedFormBound] = None
    nu_estimate: Optional[dict] = None
    upper_jensen: Optional[UpperCoverSummary] = None
    upper_corollary_check: Optional[CorollaryCheck] = None
    reference_constants: Optional[Dict[str, float]] = None

    def to_dict(self) -> dict:
        return {
            "inputs": self.inputs,
            "beta_star_lower": self.beta_star_lower.to_dict(),
            "closed_form_lower": (
                None if self.closed_form_lower is None else self.closed_form_lower.to_dict()
            ),
            "nu_estimate": self.nu_estimate,
            "upper_jensen": None if self.upper_jensen is None else self.upper_jensen.to_dict(),
            "upper_corollary_check": (
                None if self.upper_corollary_check is None else self.upper_corollary_check.to_dict()
            ),
            "reference_constants": self.reference_constants,
        }
