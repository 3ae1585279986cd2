from typing import Optional, Tuple


class InsufficientExpansionError(ValueError):
    def __init__(self, needed_depth: int, available: int, source: str = ""):
        self.needed_depth = needed_depth
        self.available = available
        self.source = source

        message = (
            f"Insufficient expansion: the computation needs partial quotients through depth {needed_depth}, "
            f"but the quotient stream {source} can only supply {available} terms. Extend the "
            f"partial-quotient list or give it an extension rule (cfonce:a1,...,ak;then:m)."
        )

        super().__init__(message)


class IrrationalityError(ValueError):
    def __init__(self, spec: str):
        self.spec = spec

        message = (
            f"The alpha specification {spec} describes a rational number (its continued fraction "
            f"terminates). Rotation numbers must be irrational."
        )

        super().__init__(message)


class DivergentZetaError(ValueError):
    def __init__(self, s):
        self.s = s

        message = (
            f"Divergent zeta: the series sum n^(-s) diverges for s = {s}. The exponent must satisfy "
            f"s > 1 + 1e-6."
        )

        super().__init__(message)


class InvalidDeltaError(ValueError):
    def __init__(self, delta):
        self.delta = delta

        message = f"The smoothness parameter delta must lie strictly between 0 and 1, found delta = {delta}."

        super().__init__(message)


class InvalidExceptionValueError(ValueError):
    def __init__(self, index: int, value):
        self.index = index
        self.value = value

        message = (
            f"Gap lengths must be strictly positive, but the exception rule assigns {value} to index "
            f"{index}."
        )

        super().__init__(message)


class EmptyRangeError(ValueError):
    def __init__(self, lo: int, hi: int):
        self.lo = lo
        self.hi = hi

        message = f"Empty index range [{lo}, {hi}]: the lower end must not exceed the upper end."

        super().__init__(message)


class InvalidOrderStatisticError(ValueError):
    def __init__(self, m: int, size: int):
        self.m = m
        self.size = size

        message = (
            f"Cannot take the {m} smallest gap lengths from a range holding only {size} indices; "
            f"m must satisfy 1 <= m <= {size}."
        )

        super().__init__(message)


class EnumerationBudgetError(ValueError):
    def __init__(self, n_points: int, budget: int):
        self.n_points = n_points
        self.budget = budget

        message = (
            f"The orbit has {n_points} points, which exceeds the enumeration budget of {budget}. "
            f"Use the analytic mode (analytic_gap_structure), which reports counts and lengths from "
            f"the norms ||q_n alpha|| without enumerating the orbit."
        )

        super().__init__(message)


class OrbitPointError(ValueError):
    def __init__(self, x0: float, index: int, distance: float):
        self.x0 = x0
        self.index = index
        self.distance = distance

        message = (
            f"The base point x0 = {x0} lies within {distance:.3e} of the orbit point {index}*alpha of 0. "
            f"Points on the orbit of 0 are excluded; perturb x0 slightly (for example x0 + 1e-6)."
        )

        super().__init__(message)


class EmptyWindowError(ValueError):
    def __init__(self, window, available: Optional[Tuple[int, int]] = None):
        self.window = window
        self.available = available

        message = f"The index window {window} selects no computed rows"
        if available is not None:
            message += f"; rows are available for n in [{available[0]}, {available[1]}]"
        message += "."

        super().__init__(message)


class SpecParsingError(ValueError):
    def __init__(self, kind: str, spec: str, grammar: str, best_guess: Optional[str] = None):
        self.kind = kind
        self.spec = spec
        self.grammar = grammar
        self.best_guess = best_guess

        message = f"Could not parse {kind} specification '{spec}'. Valid forms are: {grammar}"
        if best_guess is not None:
            message += f"\nDid you mean '{best_guess}'?"

        super().__init__(message)


class GapTableError(ValueError):
    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason

        message = (
            f"While loading gap table {path}: {reason}. A gap table starts with a header line "
            f"'tail=classical:DELTA' followed by a two-column CSV 'index,length'."
        )

        super().__init__(message)


class ConfigFileError(ValueError):
    def __init__(self, path: str, line_number: int, line: str):
        self.path = path
        self.line_number = line_number
        self.line = line

        message = (
            f"While parsing config file {path}, line {line_number} is not of the form key=value:\n"
            f"{line}"
        )

        super().__init__(message)


class SkippedIndexWarning(UserWarning):
    pass


class PartialTableWarning(UserWarning):
    pass


class ShallowRefinementWarning(UserWarning):
    pass


class IndeterminateDimensionWarning(UserWarning):
    pass
