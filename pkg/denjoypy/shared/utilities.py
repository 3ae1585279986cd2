from dataclasses import dataclass
from enum import EnumMeta
from typing import Iterator, Sequence, Tuple, Union

import numpy as np
import sympy as sp
from scipy import stats

from denjoypy.exceptions.exceptions import EmptyWindowError


class IterEnum(EnumMeta):
    """
    Enum metaclass that supports membership tests against member values, ``"a" in METHODS``.
    """

    def __contains__(self, item):
        return item in {v.value for v in self.__members__.values()}

    def __len__(self):
        return len(self.__members__)

    def values(self):
        return [v.value for v in self.__members__.values()]


@dataclass(frozen=True)
class IndexWindow:
    """
    Inclusive range of convergent indices, written ``start..stop`` in reports and on the command
    line.
    """

    start: int
    stop: int

    def __post_init__(self):
        if self.stop < self.start:
            raise EmptyWindowError(f"{self.start}..{self.stop}")

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.start, self.stop + 1))

    def __len__(self) -> int:
        return self.stop - self.start + 1

    def __contains__(self, n: int) -> bool:
        return self.start <= n <= self.stop

    def __str__(self) -> str:
        return f"{self.start}..{self.stop}"

    def widened(self) -> "IndexWindow":
        """Window of twice the length, sharing the start."""
        return IndexWindow(self.start, self.stop + len(self))

    def tail(self, length: int) -> "IndexWindow":
        return IndexWindow(max(self.start, self.stop - length + 1), self.stop)

    @classmethod
    def from_value(cls, value: Union["IndexWindow", Tuple[int, int], range, int]) -> "IndexWindow":
        if isinstance(value, IndexWindow):
            return value
        if isinstance(value, range):
            return cls(value.start, value.stop - 1)
        if isinstance(value, (int, np.integer)):
            return cls(int(value), int(value))
        start, stop = value
        return cls(int(start), int(stop))


def as_rational(x: Union[int, float, str, sp.Rational]) -> sp.Rational:
    """
    Exact rational reading of a user parameter. Floats are read through their shortest decimal
    representation, so ``0.8`` becomes 4/5 rather than the nearest binary fraction.
    """
    if isinstance(x, sp.Rational):
        return x
    if isinstance(x, float):
        return sp.Rational(repr(x))
    return sp.Rational(x)


def trend_slope(x: Sequence[float], y: Sequence[float]) -> float:
    """
    Least-squares slope of y against x, zero when fewer than two distinct abscissae are given.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    mask = np.isfinite(y)
    x, y = x[mask], y[mask]

    if x.shape[0] < 2 or np.ptp(x) == 0:
        return 0.0

    return float(stats.linregress(x, y).slope)


def geometric_grid(start: int, stop: int, n_points: int) -> np.ndarray:
    """Distinct integers spread geometrically over [start, stop]."""
    grid = np.unique(np.geomspace(start, stop, n_points).round().astype(np.int64))
    return grid[(grid >= start) & (grid <= stop)]

