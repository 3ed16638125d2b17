"""Compiled event loop of the exact simulator.

The kernel advances integer counts with pre-drawn random numbers and
returns to Python whenever something needs the stopping-time tracker:
a watched threshold is crossed, a watched mutation occurs, the draws or
the output buffer run out, the time cap is reached or the population is
empty.
"""

import numpy as np
from numba import njit

# Return flags of run_events
NEED_DRAWS = 0
THRESHOLD = 1
MUTATION = 2
TIME_CAP = 3
EXTINCT = 4
BUFFER_FULL = 5

# Recording modes understood by run_events
RECORD_NONE = 0
RECORD_EVENTS = 1
RECORD_SAMPLES = 2

# Count change (aa, aA, AA) per event index, births first
JUMPS = np.array(
    [
        [1, 0, 0],
        [0, 1, 0],
        [0, 0, 1],
        [-1, 0, 0],
        [0, -1, 0],
        [0, 0, -1],
    ],
    dtype=np.int64,
)


@njit(cache=True)
def fill_propensities(rates, n_aa, n_aA, n_AA, f, D, delta, death_aA, c, K):
    """Write the six propensities into ``rates`` and return their sum."""
    total = n_aa + n_aA + n_AA
    if total == 0:
        for i in range(6):
            rates[i] = 0.0
        return 0.0
    half = n_aA / 2.0
    a_alleles = n_aa + half
    A_alleles = n_AA + half
    rates[0] = f * a_alleles * a_alleles / total
    rates[1] = 2.0 * f * a_alleles * A_alleles / total
    rates[2] = f * A_alleles * A_alleles / total
    crowding = c * total / K
    rates[3] = n_aa * (D + delta + crowding)
    rates[4] = n_aA * (death_aA + crowding)
    rates[5] = n_AA * (D + crowding)
    acc = 0.0
    for i in range(6):
        acc += rates[i]
    return acc


@njit(cache=True)
def select_event(rates, target):
    """Index of the event picked by ``target`` in [0, total)."""
    acc = 0.0
    index = -1
    for i in range(6):
        if rates[i] <= 0.0:
            continue
        acc += rates[i]
        index = i
        if target < acc:
            break
    return index


@njit(cache=True)
def run_events(
    counts,
    t,
    t_max,
    f,
    D,
    delta,
    death_aA,
    c,
    K,
    mu,
    exponentials,
    exp_pos,
    uniforms,
    unif_pos,
    fix_count,
    watch_loss,
    hit_count,
    watch_aa,
    watch_mutation,
    record,
    sample_index,
    dt,
    out_t,
    out_counts,
):
    """Advance ``counts`` in place until a flag is raised.

    Thresholds are integer counts; ``fix_count`` and ``hit_count`` are
    ignored when negative. Samples in RECORD_SAMPLES mode carry the state
    left by the previous event.

    Returns:
        (t, exp_pos, unif_pos, events, flag, rows written, sample_index)
    """
    rates = np.zeros(6)
    n_aa = counts[0]
    n_aA = counts[1]
    n_AA = counts[2]
    capacity = out_t.shape[0]
    events = 0
    rows = 0
    flag = NEED_DRAWS

    while True:
        if n_aa + n_aA + n_AA == 0:
            flag = EXTINCT
            break
        if exp_pos >= exponentials.shape[0] or unif_pos + 2 > uniforms.shape[0]:
            flag = NEED_DRAWS
            break

        total = fill_propensities(rates, n_aa, n_aA, n_AA, f, D, delta, death_aA, c, K)
        t_next = t + exponentials[exp_pos] / total
        if t_next > t_max:
            flag = TIME_CAP
            break

        if record == RECORD_SAMPLES:
            full = False
            while sample_index * dt < t_next:
                if rows == capacity:
                    full = True
                    break
                out_t[rows] = sample_index * dt
                out_counts[rows, 0] = n_aa
                out_counts[rows, 1] = n_aA
                out_counts[rows, 2] = n_AA
                rows += 1
                sample_index += 1
            if full:
                flag = BUFFER_FULL
                break
        elif record == RECORD_EVENTS and rows == capacity:
            flag = BUFFER_FULL
            break

        exp_pos += 1
        index = select_event(rates, uniforms[unif_pos] * total)
        unif_pos += 1
        t = t_next
        events += 1

        if index < 3 and mu > 0.0:
            mutated = uniforms[unif_pos] < mu
            unif_pos += 1
            if mutated:
                if watch_mutation:
                    flag = MUTATION
                    break
                continue

        n_aa += JUMPS[index, 0]
        n_aA += JUMPS[index, 1]
        n_AA += JUMPS[index, 2]
        if record == RECORD_EVENTS:
            out_t[rows] = t
            out_counts[rows, 0] = n_aa
            out_counts[rows, 1] = n_aA
            out_counts[rows, 2] = n_AA
            rows += 1

        mutant = 2 * n_AA + n_aA
        if (
            (fix_count >= 0 and mutant >= fix_count)
            or (watch_loss and mutant == 0)
            or (hit_count >= 0 and n_aA <= hit_count)
            or (watch_aa and n_aa == 0)
        ):
            flag = THRESHOLD
            break

    counts[0] = n_aa
    counts[1] = n_aA
    counts[2] = n_AA
    return t, exp_pos, unif_pos, events, flag, rows, sample_index
