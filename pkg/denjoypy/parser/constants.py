from enum import Enum

from denjoypy.shared.utilities import IterEnum

# Orbit enumeration and offset search
ENUMERATION_BUDGET = 10**6
OFFSET_ENUMERATION_CAP = 10**4
SAMPLED_OFFSETS = 64
CLOSEST_RETURN_LIMIT = 10**7
RECURRENCE_BUDGET = 10**5
TRUNCATION_BUDGET = 10**4

# Certified arithmetic
DEFAULT_PRECISION = 96
ZETA_TERMS = 10**4
TAIL_TERMS = 256
FLOAT_INDEX_LIMIT = 2**53
FLOAT_VALUE_FLOOR = 1e-300

# Empirical liminf and bisection
POSITIVITY_THRESHOLD = 1e-6
SLOPE_TOLERANCE = 1e-3
DEFAULT_BETA_BRACKET = (0.01, 1.0)
DEFAULT_TOLERANCE = 0.02
MIN_TOLERANCE = 1e-3
COROLLARY_SLOPE_TOLERANCE = 0.02
AUTO_WINDOW_LENGTH = 21
AUTO_WINDOW_STOP = 30
AUTO_WINDOW_MAX_DIGITS = 2000

# Oracles
ORACLE_TOLERANCE = 1e-9
ORBIT_RESOLUTION = 1e-12

ALPHA_GRAMMAR = (
    "golden | sqrt3m1 | quad:A,B,C,D  (the number (A+B*sqrt(D))/C) | cf:a1,a2,...  (periodic "
    "quotients) | cfonce:a1,...,ak;then:m  (finite prefix, then constant m) | squaregrowth:q1"
)
MODEL_GRAMMAR = (
    "classical:DELTA | perturbed:classical:DELTA;pow<B>to<R>  (l_{+-B^k} = R^(-k)) | logcubed | "
    "table:FILE  (CSV 'index,length' after a header line 'tail=classical:DELTA')"
)
WINDOW_GRAMMAR = "N | A..B"


class ALPHA_PRESETS(Enum, metaclass=IterEnum):
    GOLDEN = "golden"
    SQRT3M1 = "sqrt3m1"


class ALPHA_KINDS(Enum, metaclass=IterEnum):
    GOLDEN = "golden"
    SQRT3M1 = "sqrt3m1"
    QUAD = "quad"
    CF = "cf"
    CFONCE = "cfonce"
    SQUAREGROWTH = "squaregrowth"


class GAP_MODELS(Enum, metaclass=IterEnum):
    CLASSICAL = "classical"
    PERTURBED = "perturbed"
    LOGCUBED = "logcubed"
    TABLE = "table"


class BOUND_METHODS(Enum, metaclass=IterEnum):
    A = "a"
    B = "b"
    C = "c"
    ORDER_STAT = "order-stat"


class OFFSET_POLICIES(Enum, metaclass=IterEnum):
    AUTO = "auto"
    FULL = "full"
    SAMPLED = "sampled"
    SYMMETRIC = "symmetric"
    OUTER = "outer"


class ORDER_STATISTICS(Enum, metaclass=IterEnum):
    SUM = "sum"
    KTH = "kth"


class OUTPUT_FORMATS(Enum, metaclass=IterEnum):
    CSV = "csv"
    JSON = "json"


PRESET_QUOTIENTS = {
    ALPHA_PRESETS.GOLDEN.value: (1,),
    ALPHA_PRESETS.SQRT3M1.value: (1, 2),
}

SERIES_COLUMNS = [
    "n",
    "q_n",
    "N_n",
    "Q_n",
    "method",
    "beta",
    "value_lo",
    "value_hi",
    "truncation_L",
    "offset",
    "direction",
]
