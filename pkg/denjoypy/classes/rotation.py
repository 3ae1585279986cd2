import warnings
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import sympy as sp

from denjoypy.classes.rational_interval import RationalInterval
from denjoypy.exceptions.exceptions import (
    InsufficientExpansionError,
    ShallowRefinementWarning,
)
from denjoypy.parser.constants import PRESET_QUOTIENTS

MAX_EXTRA_REFINEMENT = 512


class QuotientSource(ABC):
    """
    A stream of partial quotients a_1, a_2, ... of a number in (0, 1).

    Sources receive the denominators computed so far so that rule-driven streams (square growth)
    can define the next quotient from them.
    """

    @abstractmethod
    def quotient(self, n: int, denominators: Sequence[int]) -> Optional[int]:
        """
        Partial quotient a_n.

        Parameters
        ----------
        n : int
            Index of the quotient, starting at 1.
        denominators : sequence of int
            The denominators q_{-1}, q_0, ..., q_{n-1}.

        Returns
        -------
        int or None
            The quotient, or None when the stream is exhausted.
        """
        raise NotImplementedError

    @abstractmethod
    def describe(self) -> str:
        raise NotImplementedError


class PeriodicQuotients(QuotientSource):
    def __init__(self, period: Sequence[int], prefix: Sequence[int] = ()):
        if len(period) == 0:
            raise ValueError("A periodic quotient list needs at least one term.")
        self.period = tuple(int(a) for a in period)
        self.prefix = tuple(int(a) for a in prefix)

    def quotient(self, n, denominators):
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return self.period[(n - 1 - len(self.prefix)) % len(self.period)]

    def describe(self):
        period = ",".join(map(str, self.period))
        if self.prefix:
            return f"cf:{','.join(map(str, self.prefix))};({period})*"
        return f"cf:{period}"


class PrefixThenConstant(QuotientSource):
    """Finite list of quotients, optionally continued by a constant."""

    def __init__(self, prefix: Sequence[int], then: Optional[int] = None):
        self.prefix = tuple(int(a) for a in prefix)
        self.then = None if then is None else int(then)

    def quotient(self, n, denominators):
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return self.then

    def describe(self):
        out = "cfonce:" + ",".join(map(str, self.prefix))
        if self.then is not None:
            out += f";then:{self.then}"
        return out


class SquareGrowthRule(QuotientSource):
    """a_1 = q_1 and a_{n+1} = q_n, so that q_{n+1} = q_n^2 + q_{n-1}."""

    def __init__(self, q1: int):
        if int(q1) < 1:
            raise ValueError(f"squaregrowth needs q1 >= 1, found {q1}")
        self.q1 = int(q1)

    def quotient(self, n, denominators):
        if n == 1:
            return self.q1
        return denominators[n]

    def describe(self):
        return f"squaregrowth:{self.q1}"


@dataclass(frozen=True)
class Convergent:
    """
    The n-th convergent p_n/q_n together with the quantities the estimates are built from.

    ``theta`` is a rational interval certified to contain ||q_n alpha||, ``N`` is the three-gap
    threshold floor((q_n + q_{n+1}) / 2) and ``Q`` the block length q_n + q_{n+1}.
    """

    n: int
    p: int
    q: int
    a_next: int
    q_next: int
    theta: RationalInterval
    refinement_depth: int

    @property
    def N(self) -> int:
        return (self.q + self.q_next) // 2

    @property
    def Q(self) -> int:
        return self.q + self.q_next

    def chain_bounds(self) -> Tuple[sp.Rational, sp.Rational]:
        """
        Open bounds on ||q_n alpha|| from the standard inequalities

            1/((a_{n+1} + 2) q_n) < ||q_n alpha|| < 1/(a_{n+1} q_n),
            1/(q_{n+1} + q_n) < ||q_n alpha|| < 1/q_{n+1},

        intersected.
        """
        lower = max(
            sp.Rational(1, (self.a_next + 2) * self.q), sp.Rational(1, self.q_next + self.q)
        )
        upper = min(sp.Rational(1, self.a_next * self.q), sp.Rational(1, self.q_next))
        return lower, upper

    def satisfies_chain(self) -> bool:
        return self.theta.strictly_inside(*self.chain_bounds())

    def theta_form(self) -> Tuple[int, int]:
        """
        ||q_n alpha|| as the linear form d*alpha - j, returned as (d, j).
        """
        if self.n % 2 == 0:
            return self.q, self.p
        return -self.q, -self.p


class RotationNumber:
    """
    An irrational rotation number alpha in (0, 1), represented by its partial quotients.

    Quotients, numerators and denominators are extended lazily and cached. Extension mutates the
    instance, so callers that share one RotationNumber across workers must extend it up front
    (``extend``) before fanning out.

    Parameters
    ----------
    source : QuotientSource
        The partial-quotient stream.
    name : str, optional
        Descriptor used in reports. Defaults to the source's description.
    """

    def __init__(self, source: QuotientSource, name: Optional[str] = None):
        self.source = source
        self.name = name if name is not None else source.describe()

        self._a: List[int] = []
        self._p: List[int] = [1, 0]
        self._q: List[int] = [0, 1]
        self._convergents: Dict[int, Convergent] = {}

    @classmethod
    def golden(cls) -> "RotationNumber":
        return cls(PeriodicQuotients(PRESET_QUOTIENTS["golden"]), name="golden")

    @classmethod
    def sqrt3m1(cls) -> "RotationNumber":
        return cls(PeriodicQuotients(PRESET_QUOTIENTS["sqrt3m1"]), name="sqrt3m1")

    @classmethod
    def periodic(cls, period: Sequence[int], prefix: Sequence[int] = ()) -> "RotationNumber":
        return cls(PeriodicQuotients(period, prefix))

    @classmethod
    def square_growth(cls, q1: int = 2) -> "RotationNumber":
        return cls(SquareGrowthRule(q1))

    @classmethod
    def from_quotients(cls, prefix: Sequence[int], then: Optional[int] = None) -> "RotationNumber":
        return cls(PrefixThenConstant(prefix, then))

    @property
    def depth(self) -> int:
        """Number of partial quotients computed so far."""
        return len(self._a)

    def extend(self, depth: int) -> "RotationNumber":
        """
        Compute partial quotients through ``depth``.

        Raises
        ------
        InsufficientExpansionError
            If the quotient stream ends before ``depth``.
        """
        if self.try_extend(depth) < depth:
            raise InsufficientExpansionError(depth, self.depth, self.name)
        return self

    def try_extend(self, depth: int) -> int:
        """Extend as far as the stream allows, up to ``depth``; return the depth reached."""
        while len(self._a) < depth:
            n = len(self._a) + 1
            a = self.source.quotient(n, self._q)
            if a is None:
                break
            if int(a) != a or a < 1:
                raise ValueError(f"Partial quotient a_{n} = {a} of {self.name} is not a positive integer.")
            a = int(a)
            self._a.append(a)
            self._p.append(a * self._p[-1] + self._p[-2])
            self._q.append(a * self._q[-1] + self._q[-2])
        return len(self._a)

    def a(self, n: int) -> int:
        self.extend(n)
        return self._a[n - 1]

    def p(self, n: int) -> int:
        self.extend(n)
        return self._p[n + 1]

    def q(self, n: int) -> int:
        self.extend(n)
        return self._q[n + 1]

    def quotients(self, depth: int) -> List[int]:
        self.extend(depth)
        return self._a[:depth]

    def alpha_interval(self, depth: int) -> RationalInterval:
        """
        Interval containing alpha determined by a_1, ..., a_depth alone.

        Alpha equals [0; a_1, ..., a_depth, x] for some x >= 1, so it lies between p_m/q_m and
        the mediant (p_m + p_{m-1})/(q_m + q_{m-1}). Consecutive intervals are nested and the
        width is 1/(q_m (q_m + q_{m-1})).
        """
        self.extend(depth)
        p, q = self.p(depth), self.q(depth)
        p_prev, q_prev = self._p[depth], self._q[depth]
        return RationalInterval.hull(sp.Rational(p, q), sp.Rational(p + p_prev, q + q_prev))

    def _norm_at_depth(self, n: int, depth: int) -> RationalInterval:
        return abs(self.alpha_interval(depth).affine(self.q(n), self.p(n)))

    def convergent(self, n: int) -> Convergent:
        """
        The n-th convergent with a certified interval for ||q_n alpha||.

        The interval is q_n * [alpha] - p_n on an alpha-interval refined until the relative width
        is at most 2/q_{n+2} and the interval sits strictly inside the standard chain of bounds.
        """
        if n in self._convergents:
            return self._convergents[n]

        self.extend(n + 2)
        q_n, q_next, q_next2 = self.q(n), self.q(n + 1), self.q(n + 2)
        target = q_n * (q_n + q_next) * q_next2

        depth = n + 2
        while True:
            q_m, q_prev = self.q(depth), self._q[depth]
            theta = self._norm_at_depth(n, depth)
            candidate = Convergent(
                n=n,
                p=self.p(n),
                q=q_n,
                a_next=self.a(n + 1),
                q_next=q_next,
                theta=theta,
                refinement_depth=depth,
            )
            if 2 * q_m * (q_m + q_prev) >= target and candidate.satisfies_chain():
                break
            if depth - n > MAX_EXTRA_REFINEMENT or self.try_extend(depth + 1) <= depth:
                warnings.warn(
                    f"The interval for ||q_{n} alpha|| of {self.name} could only be refined to depth "
                    f"{depth}; its relative width may exceed 2/q_{n + 2}.",
                    ShallowRefinementWarning,
                )
                break
            depth += 1

        self._convergents[n] = candidate
        return candidate

    def to_float(self) -> float:
        """Double-precision value of alpha, from a convergent with q > 2^60 when available."""
        depth = 1
        self.extend(1)
        while self.q(depth) < 2**60 and self.try_extend(depth + 1) > depth:
            depth += 1
        return float(sp.Rational(self.p(depth), self.q(depth)))

    def __repr__(self):
        return f"RotationNumber({self.name}, depth={self.depth})"
