"""
Float kernels for the offset search of the partition estimates and the truncated circle.

The kernels evaluate a gap sequence in double precision from the arrays of ``KernelData``. They
only rank offsets or feed the float oracles; every value that ends up in a bound report is
recomputed with interval arithmetic.
"""
import numba as nb
import numpy as np

KIND_POWER = 0
KIND_LOGCUBED = 1


@nb.njit
def base_length(i, kind, params):
    k = abs(i)
    if kind == KIND_POWER:
        return params[0] * (k + 1.0) ** (-params[1])
    m = k + 2.0
    return params[0] * np.log(m) / m**3


@nb.njit
def _exception_position(i, exception_indices):
    n = exception_indices.shape[0]
    if n == 0:
        return -1
    pos = np.searchsorted(exception_indices, i)
    if pos < n and exception_indices[pos] == i:
        return pos
    return -1


@nb.njit
def gap_length(i, kind, params, table_radius, table, exception_indices, exception_values):
    if abs(i) <= table_radius:
        return table[i + table_radius]
    pos = _exception_position(i, exception_indices)
    if pos >= 0:
        return exception_values[pos]
    return base_length(i, kind, params)


@nb.njit
def block_smallest_sum(
    lo, hi, m, kind, params, table_radius, table, exception_indices, exception_values
):
    """
    Sum of the m smallest lengths on [lo, hi].

    Outside the table and the exception set the lengths decrease in |i|, so the smallest of them sit
    at the ends of the range; at most m are taken from there, every table entry and exception in
    range is added as a candidate, and the m smallest candidates are summed.
    """
    n_exceptions = exception_indices.shape[0]
    exc_lo = np.searchsorted(exception_indices, lo) if n_exceptions > 0 else 0
    exc_hi = np.searchsorted(exception_indices, hi, side="right") if n_exceptions > 0 else 0

    t_lo, t_hi = max(lo, -table_radius), min(hi, table_radius)
    n_table = max(0, t_hi - t_lo + 1)

    candidates = np.empty(m + n_table + (exc_hi - exc_lo))
    count = 0

    left, right = lo, hi
    while count < m and left <= right:
        if -table_radius <= left <= table_radius:
            left = table_radius + 1
        elif -table_radius <= right <= table_radius:
            right = -table_radius - 1
        elif _exception_position(left, exception_indices) >= 0:
            left += 1
        elif _exception_position(right, exception_indices) >= 0:
            right -= 1
        elif abs(right) >= abs(left):
            candidates[count] = base_length(right, kind, params)
            count += 1
            right -= 1
        else:
            candidates[count] = base_length(left, kind, params)
            count += 1
            left += 1

    for i in range(t_lo, t_hi + 1):
        candidates[count] = table[i + table_radius]
        count += 1

    for pos in range(exc_lo, exc_hi):
        if abs(exception_indices[pos]) > table_radius:
            candidates[count] = exception_values[pos]
            count += 1

    smallest = np.sort(candidates[:count])
    return smallest[: min(m, count)].sum()


@nb.njit
def partition_scores(
    offsets, block_len, L, m, kind, params, table_radius, table, exception_indices, exception_values
):
    """
    For every offset phi, the sum over |l| <= L of the m smallest lengths on the block
    [phi + l*block_len, phi + (l+1)*block_len - 1].
    """
    scores = np.empty(offsets.shape[0])
    for k in range(offsets.shape[0]):
        total = 0.0
        for block in range(-L, L + 1):
            lo = offsets[k] + block * block_len
            total += block_smallest_sum(
                lo,
                lo + block_len - 1,
                m,
                kind,
                params,
                table_radius,
                table,
                exception_indices,
                exception_values,
            )
        scores[k] = total
    return scores


@nb.njit
def gap_length_array(
    indices, kind, params, table_radius, table, exception_indices, exception_values
):
    out = np.empty(indices.shape[0])
    for k in range(indices.shape[0]):
        out[k] = gap_length(
            indices[k], kind, params, table_radius, table, exception_indices, exception_values
        )
    return out
