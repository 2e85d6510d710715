"""Python fallback for the compiled kernels.

Kept result-identical to `_kernels`: distances are vectorized per row
but accumulated one scalar add at a time in the same row-major order
as the C loop (the zero diagonal entry is a no-op add), and the
simulation kernel produces integer tallies only.
"""

import numpy as np


def mean_pairwise_distance(pts):
    """Mean Euclidean distance over all ordered pairs of rows (n >= 2)."""
    n = pts.shape[0]
    xs, ys, zs = pts[:, 0], pts[:, 1], pts[:, 2]
    acc = 0.0
    for i in range(n):
        dl = xs[i] - xs
        da = ys[i] - ys
        db = zs[i] - zs
        row = np.sqrt(dl * dl + da * da + db * db)
        for v in row.tolist():
            acc += v
    return acc / (n * (n - 1))


def simulate_counts(offsets, words, applicable, mode):
    """Tally one speaker/listener interaction per ordered referent pair.

    Same contract as the compiled version: returns (acc_twice, counts)
    with chance interactions counting 1 and successes 2.
    """
    n_entries = len(offsets) - 1
    counts = np.zeros(applicable.shape[1], dtype=np.int64)
    name_lists = [
        words[offsets[t]:offsets[t + 1]].tolist() for t in range(n_entries)
    ]
    app_rows = [row.tolist() for row in applicable]
    acc_twice = 0
    for t in range(n_entries):
        names = name_lists[t]
        for d in range(n_entries):
            if d == t:
                continue
            row = app_rows[d]
            if mode == 1:
                chosen = names[0]
            elif mode == 2:
                chosen = names[-1]
            else:
                chosen = names[-1]
                for w in names:
                    if not row[w]:
                        chosen = w
                        break
            acc_twice += 1 if row[chosen] else 2
            counts[chosen] += 1
    return acc_twice, counts
