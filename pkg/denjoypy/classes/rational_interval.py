from dataclasses import dataclass
from typing import Union

import sympy as sp

RationalLike = Union[int, sp.Rational]


@dataclass(frozen=True)
class RationalInterval:
    """
    Closed interval with exact rational endpoints.

    Used for the rotation number itself and for the norms ||q_n alpha||, where every operation is
    an integer affine map and no rounding is needed.
    """

    lo: sp.Rational
    hi: sp.Rational

    def __post_init__(self):
        lo, hi = sp.Rational(self.lo), sp.Rational(self.hi)
        if lo > hi:
            raise ValueError(f"Interval endpoints out of order: [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def hull(cls, a: RationalLike, b: RationalLike) -> "RationalInterval":
        a, b = sp.Rational(a), sp.Rational(b)
        return cls(min(a, b), max(a, b))

    @property
    def width(self) -> sp.Rational:
        return self.hi - self.lo

    @property
    def midpoint(self) -> sp.Rational:
        return (self.lo + self.hi) / 2

    def affine(self, scale: int, shift: RationalLike) -> "RationalInterval":
        """The image ``scale * x - shift`` of the interval."""
        return RationalInterval.hull(scale * self.lo - shift, scale * self.hi - shift)

    def __abs__(self) -> "RationalInterval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return RationalInterval(-self.hi, -self.lo)
        return RationalInterval(0, max(-self.lo, self.hi))

    def excludes_zero(self) -> bool:
        return self.lo > 0 or self.hi < 0

    def sign(self) -> int:
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return 0

    def contains(self, x: RationalLike) -> bool:
        return self.lo <= x <= self.hi

    def is_subset_of(self, other: "RationalInterval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def strictly_inside(self, lo: RationalLike, hi: RationalLike) -> bool:
        """Whether the whole interval lies in the open interval (lo, hi)."""
        return lo < self.lo and self.hi < hi

    def relative_width(self) -> sp.Expr:
        """Width over the smallest absolute value, infinite when the interval touches 0."""
        if not self.excludes_zero():
            return sp.oo
        return self.width / abs(self).lo

    def __float__(self) -> float:
        return float(self.midpoint)

    def __str__(self) -> str:
        return f"[{float(self.lo):.12g}, {float(self.hi):.12g}]"
