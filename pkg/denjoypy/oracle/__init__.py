from denjoypy.oracle.brute_force import brute_closest_returns, sorted_gap_oracle
from denjoypy.oracle.truncated_circle import TruncatedCircle, denjoy_distance, recurrence_rate
from denjoypy.oracle.verify import run_verification

__all__ = [
    "brute_closest_returns",
    "sorted_gap_oracle",
    "TruncatedCircle",
    "denjoy_distance",
    "recurrence_rate",
    "run_verification",
]
