# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot-loop kernels.

Must stay result-identical to `_kernels_py`: mean_pairwise_distance
accumulates over ordered pairs in row-major order with plain double
adds (the build disables FP contraction so the C arithmetic rounds
exactly like Python's), and simulate_counts returns integer tallies
only, so no float path can diverge between backends.
"""

from libc.math cimport sqrt

import numpy as np


def mean_pairwise_distance(double[:, ::1] pts):
    """Mean Euclidean distance over all ordered pairs of rows (n >= 2)."""
    cdef Py_ssize_t n = pts.shape[0]
    cdef Py_ssize_t i, j
    cdef double acc = 0.0
    cdef double dl, da, db
    for i in range(n):
        for j in range(n):
            if i != j:
                dl = pts[i, 0] - pts[j, 0]
                da = pts[i, 1] - pts[j, 1]
                db = pts[i, 2] - pts[j, 2]
                acc += sqrt(dl * dl + da * da + db * db)
    return acc / <double> (n * (n - 1))


def simulate_counts(long long[::1] offsets,
                    long long[::1] words,
                    unsigned char[:, ::1] applicable,
                    int mode):
    """Tally one speaker/listener interaction per ordered referent pair.

    offsets/words encode each referent's candidate name indices in
    ascending informativeness order (CSR layout). mode: 0 = adaptive
    speaker, 1 = always the first (general) name, 2 = always the last
    (specific) name. Returns (acc_twice, counts): twice the summed
    expected accuracy (chance = 1, success = 2) and the number of
    times each word index was uttered.
    """
    cdef Py_ssize_t n_entries = offsets.shape[0] - 1
    cdef Py_ssize_t n_words = applicable.shape[1]
    counts_arr = np.zeros(n_words, dtype=np.int64)
    cdef long long[::1] counts = counts_arr
    cdef long long acc_twice = 0
    cdef Py_ssize_t t, d, k, k0, k1
    cdef long long chosen
    for t in range(n_entries):
        k0 = offsets[t]
        k1 = offsets[t + 1]
        for d in range(n_entries):
            if d == t:
                continue
            if mode == 1:
                chosen = words[k0]
            elif mode == 2:
                chosen = words[k1 - 1]
            else:
                chosen = words[k1 - 1]
                for k in range(k0, k1):
                    if applicable[d, words[k]] == 0:
                        chosen = words[k]
                        break
            if applicable[d, chosen]:
                acc_twice += 1
            else:
                acc_twice += 2
            counts[chosen] += 1
    return acc_twice, counts_arr
