"""Compare the compiled kernels against the pure-Python fallback.

Runs both implementations on identical inputs, checks they agree
exactly, and reports wall-clock timings. Usage:

    python3 benchmarks/bench_kernels.py
"""

import timeit

import numpy as np

from colorlex import _kernels_py

try:
    from colorlex import _kernels
except ImportError:
    _kernels = None


def _spread_case(n: int, seed: int):
    rng = np.random.default_rng(seed)
    pts = np.ascontiguousarray(rng.uniform(0.0, 100.0, size=(n, 3)))
    return (pts,)


def _simulate_case(n_referents: int, vocab: int, seed: int):
    rng = np.random.default_rng(seed)
    offsets = [0]
    flat = []
    for _ in range(n_referents):
        k = int(rng.integers(2, 5))
        flat.extend(sorted(rng.choice(vocab, size=k, replace=False).tolist()))
        offsets.append(len(flat))
    offsets = np.array(offsets, dtype=np.int64)
    words = np.array(flat, dtype=np.int64)
    app = np.zeros((n_referents, vocab), dtype=np.uint8)
    for t in range(n_referents):
        app[t, words[offsets[t]:offsets[t + 1]]] = 1
        extra = rng.choice(vocab, size=2, replace=False)
        app[t, extra] = 1
    return offsets, words, app, 0


def _time(fn, args, repeat: int, number: int) -> float:
    return min(timeit.repeat(lambda: fn(*args), repeat=repeat, number=number))


def _report(name: str, args, repeat: int, number: int) -> None:
    fn_py = getattr(_kernels_py, name)
    t_py = _time(fn_py, args, repeat, number)
    line = f"{name:<24} python {t_py * 1e3 / number:9.3f} ms"
    if _kernels is not None:
        fn_c = getattr(_kernels, name)
        result_c = fn_c(*args)
        result_py = fn_py(*args)
        if name == "mean_pairwise_distance":
            assert result_c == result_py, "backends disagree"
        else:
            assert result_c[0] == result_py[0], "backends disagree"
            assert (result_c[1] == result_py[1]).all(), "backends disagree"
        t_c = _time(fn_c, args, repeat, number)
        line += (f"   compiled {t_c * 1e3 / number:9.3f} ms"
                 f"   speedup {t_py / t_c:6.1f}x")
    else:
        line += "   (compiled kernels not built)"
    print(line)


def main() -> None:
    _report("mean_pairwise_distance", _spread_case(100, 1), repeat=3,
            number=20)
    _report("mean_pairwise_distance", _spread_case(1000, 2), repeat=3,
            number=2)
    _report("simulate_counts", _simulate_case(500, 40, 3), repeat=3,
            number=2)
    _report("simulate_counts", _simulate_case(1500, 60, 4), repeat=3,
            number=1)


if __name__ == "__main__":
    main()
