"""
Cross-checks between the certified modules and the float oracles.

``run_verification`` yields one dict per check; every dict carries ``check``, ``alpha`` and
``passed``. The ``verify`` command prints them as JSON lines and fails when any ``passed`` is false.
"""
from typing import Dict, Iterator, Sequence

import numpy as np

from denjoypy.classes.rotation import RotationNumber
from denjoypy.exceptions.exceptions import OrbitPointError
from denjoypy.oracle.brute_force import brute_closest_returns, sorted_gap_oracle
from denjoypy.oracle.truncated_circle import TruncatedCircle, denjoy_distance, recurrence_rate
from denjoypy.parser.constants import ORACLE_TOLERANCE, TRUNCATION_BUDGET
from denjoypy.shared.intervals import lower
from denjoypy.solvers.bounds import bound_a
from denjoypy.solvers.continued_fractions import three_gap_threshold
from denjoypy.solvers.gap_lengths import classical_sequence
from denjoypy.solvers.threegap import forward_gap_structure

VERIFY_DELTA = "1/2"
ORBIT_NUDGE = 1e-6


def verification_alphas() -> Dict[str, RotationNumber]:
    return {
        "golden": RotationNumber.golden(),
        "sqrt3m1": RotationNumber.sqrt3m1(),
        "cf:2": RotationNumber.periodic([2]),
    }


def _denominators_up_to(alpha: RotationNumber, q_max: int) -> list:
    out, n = [], 0
    while alpha.q(n) <= q_max:
        if not out or out[-1] != alpha.q(n):
            out.append(alpha.q(n))
        n += 1
    return out


def check_closest_returns(name: str, alpha: RotationNumber, q_max: int) -> dict:
    found = [k for k, _ in brute_closest_returns(alpha.to_float(), q_max)]
    expected = _denominators_up_to(alpha, q_max)
    return {
        "check": "closest_returns",
        "alpha": name,
        "q_max": q_max,
        "passed": found == expected,
        "found": found,
        "expected": expected,
    }


def _distance(circle: TruncatedCircle, x0: float, n_iter: int):
    try:
        return denjoy_distance(circle, x0, n_iter)
    except OrbitPointError:
        return denjoy_distance(circle, x0 + ORBIT_NUDGE, n_iter)


def check_largest_gap_index(
    name: str, alpha: RotationNumber, circle: TruncatedCircle, base_points: np.ndarray, n: int
) -> dict:
    """|k*| <= N_n for the distance after q_n steps, over all base points."""
    q, N = alpha.q(n), three_gap_threshold(alpha, n)
    worst = 0
    failures = 0
    for x0 in base_points:
        sample = _distance(circle, float(x0), q)
        k_star = abs(sample.k_star) if sample.k_star is not None else circle.M + 1
        worst = max(worst, k_star)
        failures += int(k_star > N)

    return {
        "check": "largest_gap_index",
        "alpha": name,
        "n": n,
        "q_n": q,
        "N_n": N,
        "max_abs_k_star": worst,
        "failures": failures,
        "passed": failures == 0,
    }


def check_sorted_gaps(name: str, alpha: RotationNumber, n: int) -> dict:
    K = alpha.q(n) + alpha.q(n + 1) - 1
    report = forward_gap_structure(alpha, K)
    oracle = sorted_gap_oracle(alpha.to_float(), K)

    exact_lengths = np.array([float(c.length) for c in report.classes])
    same_counts = oracle["multiplicity"].tolist() == report.multiplicities
    same_lengths = len(exact_lengths) == len(oracle) and bool(
        np.all(np.abs(oracle["length"].to_numpy() - exact_lengths) <= ORACLE_TOLERANCE)
    )

    return {
        "check": "sorted_gaps",
        "alpha": name,
        "n": n,
        "K": K,
        "multiplicities": report.multiplicities,
        "oracle_multiplicities": oracle["multiplicity"].tolist(),
        "passed": same_counts and same_lengths,
    }


def check_recurrence_against_bound_a(
    name: str,
    alpha: RotationNumber,
    circle: TruncatedCircle,
    seq,
    x0: float,
    n_values: Sequence[int],
) -> dict:
    """The closest-return values q_n d(f^{q_n} x0, x0)^beta dominate the bound_a rows."""
    beta = float(seq.delta)
    curves = recurrence_rate(circle, x0, beta, alpha.q(max(n_values)))
    by_time = curves.closest_returns.set_index("n")

    violations = []
    for n in n_values:
        measured = float(by_time.loc[alpha.q(n), "value_hi"])
        certified = lower(bound_a(alpha, seq, seq.delta, n))
        if measured < certified * (1 - ORACLE_TOLERANCE):
            violations.append(n)

    return {
        "check": "recurrence_vs_bound_a",
        "alpha": name,
        "x0": curves.x0,
        "n_values": list(n_values),
        "violations": violations,
        "reduction_agrees": curves.agrees(),
        "passed": not violations,
    }


def run_verification(
    seed: int = 0,
    q_max: int = 10**5,
    n_base_points: int = 100,
    max_n: int = 12,
    M: int = TRUNCATION_BUDGET,
) -> Iterator[dict]:
    """
    Run the oracle suite.

    Parameters
    ----------
    seed : int
        Seed of the generator drawing the base points x0.
    q_max : int
        Range of the closest-return search.
    n_base_points : int
        Number of base points for the largest-gap check.
    max_n : int
        Largest convergent index of the largest-gap check.
    M : int
        Truncation of the Denjoy circle.

    Yields
    ------
    dict
        One result per check.
    """
    rng = np.random.default_rng(seed)
    base_points = rng.uniform(0.0, 1.0, n_base_points)
    seq = classical_sequence(VERIFY_DELTA)

    for name, alpha in verification_alphas().items():
        yield check_closest_returns(name, alpha, q_max)

        circle = TruncatedCircle(seq, M, alpha.to_float())
        for n in range(1, max_n + 1):
            if three_gap_threshold(alpha, n) > M:
                break
            yield check_largest_gap_index(name, alpha, circle, base_points, n)

        for n in range(2, 9):
            yield check_sorted_gaps(name, alpha, n)

        n_values = [n for n in range(1, 11) if three_gap_threshold(alpha, n) <= M]
        yield check_recurrence_against_bound_a(
            name, alpha, circle, seq, float(base_points[0]), n_values
        )
