from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
import sympy as sp
from mpmath import iv

from denjoypy.exceptions.exceptions import (
    EmptyRangeError,
    InvalidExceptionValueError,
    InvalidOrderStatisticError,
)
from denjoypy.parser.constants import DEFAULT_PRECISION, TAIL_TERMS, ZETA_TERMS
from denjoypy.shared.intervals import (
    hull,
    interval_min,
    interval_sum,
    lower_mpf,
    midpoint,
    to_interval,
    upper_mpf,
    with_working_precision,
    working_precision,
)
from denjoypy.solvers.zeta import bracketed_power_tail, zeta_interval

STRUCTURE_DECREASING = "decreasing-in-|n|"
STRUCTURE_EXCEPTIONS = "decreasing-with-listed-exceptions"
STRUCTURE_TABLE = "table-then-decreasing"

BASE_POWER = "power"
BASE_LOGCUBED = "logcubed"

RULE_REMAINDER_TERMS = 64


@dataclass(frozen=True)
class ExceptionRule:
    """
    Sparse replacements of the base gap lengths, given before normalization.

    Either a power rule, where the indices +-B^k (k >= 1) receive the length R^(-k), or a finite
    map from indices to lengths, or both.
    """

    index_base: Optional[int] = None
    value_base: Optional[int] = None
    explicit: Tuple[Tuple[int, sp.Rational], ...] = field(default_factory=tuple)

    def __post_init__(self):
        if (self.index_base is None) != (self.value_base is None):
            raise ValueError("A power exception rule needs both an index base and a value base.")
        if self.index_base is not None:
            if self.index_base < 2:
                raise ValueError(f"The index base of an exception rule must be >= 2, found {self.index_base}")
            if self.value_base <= 0:
                raise InvalidExceptionValueError(self.index_base, self.value_base)
            if self.value_base == 1:
                raise ValueError("The value base of an exception rule must exceed 1 for the lengths to be summable.")

        explicit = tuple((int(i), sp.Rational(v)) for i, v in self.explicit)
        for i, v in explicit:
            if v <= 0:
                raise InvalidExceptionValueError(i, v)
        object.__setattr__(self, "explicit", tuple(sorted(explicit)))

    @classmethod
    def power(cls, index_base: int, value_base: int) -> "ExceptionRule":
        return cls(index_base=int(index_base), value_base=int(value_base))

    @classmethod
    def from_mapping(cls, mapping: Dict[int, float]) -> "ExceptionRule":
        return cls(explicit=tuple(mapping.items()))

    @property
    def has_rule(self) -> bool:
        return self.index_base is not None

    def describe(self) -> str:
        parts = []
        if self.has_rule:
            parts.append(f"pow{self.index_base}to{self.value_base}")
        if self.explicit:
            parts.append("explicit(" + ",".join(f"{i}:{v}" for i, v in self.explicit) + ")")
        return ";".join(parts)

    def _rule_power(self, i: int) -> Optional[int]:
        """k with |i| = B^k, k >= 1, or None."""
        if not self.has_rule:
            return None
        a = abs(i)
        if a < self.index_base:
            return None
        k = 0
        while a % self.index_base == 0:
            a //= self.index_base
            k += 1
        return k if a == 1 else None

    def value(self, i: int) -> Optional[sp.Rational]:
        for j, v in self.explicit:
            if j == i:
                return v
        k = self._rule_power(i)
        if k is None:
            return None
        return sp.Rational(1, self.value_base**k)

    def is_exception(self, i: int) -> bool:
        return self.value(i) is not None

    def indices_in(self, lo: int, hi: int) -> List[int]:
        """All exception indices in [lo, hi], sorted."""
        found = {i for i, _ in self.explicit if lo <= i <= hi}
        if self.has_rule:
            reach = max(abs(lo), abs(hi))
            b = self.index_base
            while b <= reach:
                for i in (-b, b):
                    if lo <= i <= hi:
                        found.add(i)
                b *= self.index_base
        return sorted(found)

    def first_power_beyond(self, n: int) -> int:
        """Smallest k >= 1 with B^k > n."""
        k, b = 1, self.index_base
        while b <= n:
            b *= self.index_base
            k += 1
        return k


@dataclass(frozen=True)
class KernelData:
    """
    Float description of a sequence for the njit offset-search kernels.

    ``kind`` is 0 for the power base (|i|+1)^(-s) and 1 for the log-cubed base. Table values cover
    the indices -table_radius..table_radius (table_radius is -1 without a table).
    """

    kind: int
    params: np.ndarray
    table_radius: int
    table: np.ndarray
    exception_indices: np.ndarray
    exception_values: np.ndarray


class GapSequence:
    """
    A two-sided sequence of gap lengths l_n = |J_n| with a certified normalization.

    The sequence is ``scale * raw(n) / total``, where ``raw`` is the unnormalized model and
    ``total`` an interval enclosing the sum of ``raw`` over all integers, so that the lengths sum
    to ``scale`` (1 unless the sequence was rescaled). Every length is returned as an ``iv.mpf``
    interval evaluated at ``precision`` bits.

    Instances are built by the constructors in ``denjoypy.solvers.gap_lengths`` and are immutable;
    all queries are pure.

    Parameters
    ----------
    model : str
        One of "classical", "perturbed", "logcubed", "table".
    base : str
        "power" for (|n|+1)^(-s) or "logcubed" for (|n|+2)^(-3) ln(|n|+2).
    exponent : sympy.Rational, optional
        The exponent s of the power base, 1/delta for the classical model.
    delta : sympy.Rational, optional
        Smoothness class, when the model has one.
    exceptions : ExceptionRule, optional
        Replacements of the base lengths.
    table : dict of int to float, optional
        Explicit lengths for -T <= n <= T; the base applies beyond.
    scale : sympy.Rational or float, optional
        Total mass of the sequence, 1 by default.
    precision : int, optional
        Working precision in bits.
    zeta_terms, tail_terms : int, optional
        Summands added explicitly before integral bracketing in the normalization and in tail sums.
    """

    def __init__(
        self,
        model: str,
        base: str,
        exponent: Optional[sp.Rational] = None,
        delta: Optional[sp.Rational] = None,
        exceptions: Optional[ExceptionRule] = None,
        table: Optional[Dict[int, float]] = None,
        scale=1,
        precision: int = DEFAULT_PRECISION,
        zeta_terms: int = ZETA_TERMS,
        tail_terms: int = TAIL_TERMS,
        name: Optional[str] = None,
    ):
        self.model = model
        self.base = base
        self.exponent = None if exponent is None else sp.Rational(exponent)
        self.delta = None if delta is None else sp.Rational(delta)
        self.exceptions = exceptions
        self.scale = scale
        self.precision = int(precision)
        self.zeta_terms = int(zeta_terms)
        self.tail_terms = int(tail_terms)
        self.shifted = base == BASE_LOGCUBED

        self.table = None
        self.table_radius = -1
        if table is not None:
            self.table_radius = max(abs(i) for i in table)
            self.table = {int(i): float(v) for i, v in table.items()}

        if self.table is not None:
            self.structure = STRUCTURE_TABLE
        elif exceptions is not None:
            self.structure = STRUCTURE_EXCEPTIONS
        else:
            self.structure = STRUCTURE_DECREASING

        self.name = name if name is not None else self.describe()

        with working_precision(self.precision):
            total = self._raw_total()
            self._total_mpi = total._mpi_
            self._normalizer_mpi = (to_interval(scale) / total)._mpi_

    def describe(self) -> str:
        if self.model == "classical":
            return f"classical:{self.delta}"
        if self.model == "perturbed":
            base = f"classical:{self.delta}" if self.base == BASE_POWER else "logcubed"
            return f"perturbed:{base};{self.exceptions.describe()}"
        if self.model == "table":
            return f"table(radius={self.table_radius});tail=classical:{self.delta}"
        return self.model

    @property
    def normalizer(self) -> "iv.mpf":
        """Interval containing scale / (sum of the raw lengths)."""
        return iv.make_mpf(self._normalizer_mpi)

    @property
    def total_mass(self) -> "iv.mpf":
        """Interval containing the sum of the raw, unnormalized lengths (c_delta for classical)."""
        return iv.make_mpf(self._total_mpi)

    @property
    def normalization_tolerance(self) -> float:
        """Relative width of the normalizer, the certification tolerance of sum(l_n) = scale."""
        lo, hi = lower_mpf(self.normalizer), upper_mpf(self.normalizer)
        return float((hi - lo) / lo)

    # ------------------------------------------------------------------ raw model

    def _base_raw(self, i: int) -> "iv.mpf":
        k = abs(i)
        if self.base == BASE_POWER:
            if self.exponent.q == 1:
                return iv.mpf(k + 1) ** (-int(self.exponent))
            return iv.mpf(k + 1) ** (-to_interval(self.exponent))
        m = iv.mpf(k + 2)
        return iv.log(m) / m**3

    def _raw(self, i: int) -> "iv.mpf":
        if self.table is not None and abs(i) <= self.table_radius:
            return iv.mpf(self.table[i])
        if self.exceptions is not None:
            value = self.exceptions.value(i)
            if value is not None:
                return to_interval(value)
        return self._base_raw(i)

    def _base_tail(self, n: int) -> "iv.mpf":
        """Sum of the base lengths over k > n (one side)."""
        if self.base == BASE_POWER:
            return bracketed_power_tail(n + 2, self.exponent, self.tail_terms)

        start = n + 3
        last = start + self.tail_terms - 1
        partial = interval_sum(iv.log(iv.mpf(m)) / iv.mpf(m) ** 3 for m in range(start, last + 1))
        remainder = hull(
            lower_mpf(_logcubed_integral(last + 1)), upper_mpf(_logcubed_integral(last))
        )
        return partial + remainder

    def _rule_adjustment(self, n: int) -> "iv.mpf":
        """
        Sum over exception indices B^k > n (one side) of R^(-k) minus the replaced base length.
        """
        rule = self.exceptions
        b, r, s = rule.index_base, rule.value_base, self.exponent
        k0 = rule.first_power_beyond(n)

        replacements = to_interval(sp.Rational(r, r - 1) / sp.Rational(r) ** k0)

        k_last = k0 + RULE_REMAINDER_TERMS - 1
        replaced = interval_sum(self._base_raw(b**k) for k in range(k0, k_last + 1))
        # (B^k + 1)^(-s) <= B^(-ks), a geometric series beyond k_last
        ratio = iv.mpf(b) ** (-to_interval(s))
        remainder = ratio ** (k_last + 1) / (1 - ratio)
        replaced = replaced + hull(0, upper_mpf(remainder))

        return replacements - replaced

    def _explicit_adjustment(self, predicate) -> "iv.mpf":
        terms = [
            to_interval(v) - self._base_raw(i) for i, v in self.exceptions.explicit if predicate(i)
        ]
        return interval_sum(terms)

    def _raw_total(self) -> "iv.mpf":
        if self.base == BASE_POWER:
            base_total = 2 * zeta_interval(self.exponent, self.zeta_terms, self.precision).value - 1
        else:
            base_total = self._base_raw(0) + 2 * self._base_tail(0)

        if self.table is not None:
            inside = interval_sum(iv.mpf(v) for v in self.table.values())
            return inside + 2 * self._base_tail(self.table_radius)

        total = base_total
        if self.exceptions is not None:
            if self.exceptions.has_rule:
                total = total + 2 * self._rule_adjustment(0)
            total = total + self._explicit_adjustment(lambda i: True)
        return total

    def _raw_tail(self, n: int) -> "iv.mpf":
        if self.table is not None and n < self.table_radius:
            inside = interval_sum(
                iv.mpf(v) for i, v in self.table.items() if n < abs(i) <= self.table_radius
            )
            return inside + 2 * self._base_tail(self.table_radius)

        tail = 2 * self._base_tail(n)
        if self.exceptions is not None:
            if self.exceptions.has_rule:
                tail = tail + 2 * self._rule_adjustment(n)
            tail = tail + self._explicit_adjustment(lambda i: abs(i) > n)
        return tail

    # ------------------------------------------------------------------ queries

    @with_working_precision
    def length(self, i: int) -> "iv.mpf":
        """Interval containing l_i."""
        return self.normalizer * self._raw(int(i))

    @with_working_precision
    def raw_length(self, i: int) -> "iv.mpf":
        """Interval containing the unnormalized model value at i."""
        return self._raw(int(i))

    @with_working_precision
    def tail_sum(self, n: int) -> "iv.mpf":
        """Interval containing the sum of l_k over |k| > n."""
        if n < 0:
            raise ValueError(f"tail_sum needs n >= 0, found {n}")
        return self.normalizer * self._raw_tail(int(n))

    def is_exception(self, i: int) -> bool:
        return self.exceptions is not None and self.exceptions.is_exception(i)

    def _monotone_candidates(self, parts, m: int) -> List[int]:
        """
        Indices of the m smallest base (non-exception) lengths in the monotone parts of a range.

        ``parts`` is either one range (lo, hi) or a pair of one-sided ranges left of and right of
        the table. Base lengths decrease in |i|, so candidates are taken from the ends with the
        larger absolute index first.
        """
        picks = []
        if len(parts) == 1:
            (l, r), = parts
            while len(picks) < m and l <= r:
                if self.is_exception(l):
                    l += 1
                elif self.is_exception(r):
                    r -= 1
                elif abs(r) >= abs(l):
                    picks.append(r)
                    r -= 1
                else:
                    picks.append(l)
                    l += 1
            return picks

        (l, l_end), (r_end, r) = parts
        while len(picks) < m and (l <= l_end or r >= r_end):
            if l <= l_end and self.is_exception(l):
                l += 1
            elif r >= r_end and self.is_exception(r):
                r -= 1
            elif r >= r_end and (l > l_end or abs(r) >= abs(l)):
                picks.append(r)
                r -= 1
            else:
                picks.append(l)
                l += 1
        return picks

    def candidate_indices(self, lo: int, hi: int, m: int) -> List[int]:
        """
        A set of indices guaranteed to contain the m smallest lengths on [lo, hi].
        """
        if lo > hi:
            raise EmptyRangeError(lo, hi)
        if m < 1 or m > hi - lo + 1:
            raise InvalidOrderStatisticError(m, hi - lo + 1)

        candidates = []
        if self.table is not None:
            radius = self.table_radius
            t_lo, t_hi = max(lo, -radius), min(hi, radius)
            if t_lo <= t_hi:
                candidates.extend(range(t_lo, t_hi + 1))
            left = (lo, min(hi, -radius - 1))
            right = (max(lo, radius + 1), hi)
            candidates.extend(self._monotone_candidates((left, right), m))
        else:
            candidates.extend(self._monotone_candidates(((lo, hi),), m))

        if self.exceptions is not None:
            candidates.extend(self.exceptions.indices_in(lo, hi))

        return sorted(set(candidates))

    @with_working_precision
    def range_k_smallest(self, lo: int, hi: int, m: int) -> List["iv.mpf"]:
        """
        Intervals enclosing the m smallest lengths on [lo, hi], with multiplicity, ascending.
        """
        if m == 1:
            return [self.range_min(lo, hi)]

        values = [self.length(i) for i in self.candidate_indices(lo, hi, m)]
        values.sort(key=lower_mpf)
        return values[:m]

    @with_working_precision
    def range_min(self, lo: int, hi: int) -> "iv.mpf":
        """Interval enclosing min{l_i : lo <= i <= hi}."""
        return interval_min(self.length(i) for i in self.candidate_indices(lo, hi, 1))

    @with_working_precision
    def block_smallest_sum(self, lo: int, hi: int, m: int) -> "iv.mpf":
        """Interval enclosing the sum of the m smallest lengths on [lo, hi]."""
        return interval_sum(self.range_k_smallest(lo, hi, m))

    @with_working_precision
    def block_order_statistic(self, lo: int, hi: int, m: int) -> "iv.mpf":
        """
        Interval enclosing the m-th smallest length on [lo, hi].

        The endpoints are the m-th smallest lower and upper endpoints over the candidates, which
        stays an enclosure when the candidate intervals overlap.
        """
        values = [self.length(i) for i in self.candidate_indices(lo, hi, m)]
        lo_ends = sorted(lower_mpf(v) for v in values)
        hi_ends = sorted(upper_mpf(v) for v in values)
        return hull(lo_ends[m - 1], hi_ends[m - 1])

    # ------------------------------------------------------------------ float view

    def kernel_data(self, reach: int) -> KernelData:
        """
        Float data for the njit kernels, with exception indices listed up to |i| <= reach.
        """
        factor = midpoint(self.normalizer)
        if self.base == BASE_POWER:
            params = np.array([factor, float(self.exponent)])
            kind = 0
        else:
            params = np.array([factor, 0.0])
            kind = 1

        if self.table is not None:
            radius = self.table_radius
            table = np.array([self.table[i] * factor for i in range(-radius, radius + 1)])
        else:
            radius = -1
            table = np.zeros(0)

        exception_indices = np.zeros(0, dtype=np.int64)
        exception_values = np.zeros(0)
        if self.exceptions is not None:
            indices = self.exceptions.indices_in(-reach, reach)
            exception_indices = np.array(indices, dtype=np.int64)
            exception_values = np.array([float(self.exceptions.value(i)) * factor for i in indices])

        return KernelData(
            kind=kind,
            params=params,
            table_radius=radius,
            table=table,
            exception_indices=exception_indices,
            exception_values=exception_values,
        )

    def __repr__(self):
        return f"GapSequence({self.name}, scale={self.scale})"


def _logcubed_integral(a: int) -> "iv.mpf":
    """Integral of ln(x) / x^3 over [a, infinity), that is (2 ln a + 1) / (4 a^2)."""
    a = iv.mpf(a)
    return (2 * iv.log(a) + 1) / (4 * a**2)
