"""Word spread and informativeness measures.

A word's spread is the mean pairwise CIELAB distance between the chips
in its denotation; informativeness is the reciprocal, scaled by 100 for
readability (most raw values sit around 1e-2). Large denotations are
estimated by repeatedly subsampling a fixed number of chips and
averaging the per-sample informativeness, which removes denotation-size
effects; the subsample RNG is seeded per word, so results do not depend
on the order in which words are processed.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from math import fsum
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence, TextIO

import numpy as np

from . import kernels
from .colorspace import LabColor
from .errors import ColorlexError

if TYPE_CHECKING:
    from .corpus import Denotation

__all__ = [
    "SCALE",
    "WordInfo",
    "SamplingConfig",
    "InsufficientDenotationError",
    "DegenerateDenotationError",
    "derive_seed",
    "spread",
    "informativeness",
    "system_informativeness",
    "compute_word_infos",
    "write_word_infos",
    "read_word_infos",
]

# Reciprocal-spread scores are multiplied by 10^2 for readability.
# Applied in informativeness() only, never in spread().
SCALE = 100.0


class InsufficientDenotationError(ColorlexError):
    """Fewer than two chips: spread is undefined."""


class DegenerateDenotationError(ColorlexError):
    """All chips identical: spread is zero and informativeness diverges."""


@dataclass(frozen=True)
class WordInfo:
    """Spread and informativeness of one word.

    For exact computations (sampled=False) i_w == SCALE / spread. For
    subsampled estimates both fields are means over the samples, so the
    identity holds only approximately.
    """

    word: str
    spread: float
    i_w: float
    n_chips: int
    sampled: bool


@dataclass(frozen=True)
class SamplingConfig:
    """Subsampling scheme for large denotations.

    Denotations with more than max_exact chips are estimated from
    `iterations` random subsamples of `sample_size` chips each (drawn
    without replacement within a sample).
    """

    max_exact: int = 100
    sample_size: int = 100
    iterations: int = 30
    seed: int = 0

    def __post_init__(self):
        if self.max_exact < 2:
            raise ValueError("max_exact must be at least 2")
        if not (2 <= self.sample_size <= self.max_exact):
            raise ValueError("sample_size must be in [2, max_exact]")
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")


def _as_points(chips) -> np.ndarray:
    if isinstance(chips, np.ndarray):
        return np.ascontiguousarray(chips, dtype=np.float64)
    return np.array(
        [(c.l_star, c.a_star, c.b_star) for c in chips], dtype=np.float64
    ).reshape(-1, 3)


def spread(chips: Sequence[LabColor] | np.ndarray) -> float:
    """Mean pairwise CIELAB distance over a denotation (unscaled)."""
    pts = _as_points(chips)
    if pts.shape[0] < 2:
        raise InsufficientDenotationError(
            f"need at least 2 chips, got {pts.shape[0]}"
        )
    value = kernels.mean_pairwise_distance(pts)
    if value == 0.0:
        raise DegenerateDenotationError("all chips identical; spread is zero")
    return value


def derive_seed(seed: int, label: str) -> int:
    """Stable sub-seed for one labeled consumer of the run seed.

    Hashing the label in keeps independently seeded stages (per-word
    subsampling, stimulus selection) decorrelated and insensitive to
    the order in which they run.
    """
    digest = hashlib.sha256(f"{seed}:{label}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def informativeness(
    chips: Sequence[LabColor] | np.ndarray,
    cfg: SamplingConfig,
    word: str = "",
) -> WordInfo:
    """Informativeness of a denotation: SCALE / spread.

    Exact when the denotation has at most cfg.max_exact chips;
    otherwise the mean over cfg.iterations subsample estimates.
    Deterministic given (cfg.seed, word).
    """
    pts = _as_points(chips)
    n = pts.shape[0]
    if n <= cfg.max_exact:
        s = spread(pts)
        return WordInfo(word, s, SCALE / s, n, sampled=False)
    rng = np.random.default_rng(derive_seed(cfg.seed, word))
    spreads = []
    scores = []
    for _ in range(cfg.iterations):
        idx = rng.choice(n, size=cfg.sample_size, replace=False)
        s = spread(pts[idx])
        spreads.append(s)
        scores.append(SCALE / s)
    return WordInfo(
        word,
        fsum(spreads) / cfg.iterations,
        fsum(scores) / cfg.iterations,
        n,
        sampled=True,
    )


def system_informativeness(uttered: Sequence[float]) -> float:
    """Mean informativeness of the words uttered across interactions."""
    if len(uttered) == 0:
        raise ValueError("empty utterance log")
    return fsum(uttered) / len(uttered)


def compute_word_infos(
    denotations: Mapping[str, "Denotation"], cfg: SamplingConfig
) -> dict[str, WordInfo]:
    """Informativeness for every denotation, keyed by word."""
    return {
        word: informativeness(den.chips, cfg, word=word)
        for word, den in denotations.items()
    }


def write_word_infos(
    handle: TextIO, infos: Iterable[WordInfo], header_comment: str
) -> None:
    """Write the word-info table (tab-separated, repr-precision floats)."""
    handle.write(header_comment + "\n")
    handle.write("word\tn_chips\tspread\ti_w\tsampled\n")
    for info in infos:
        handle.write(
            f"{info.word}\t{info.n_chips}\t{info.spread!r}\t{info.i_w!r}"
            f"\t{int(info.sampled)}\n"
        )


def read_word_infos(handle: TextIO) -> list[WordInfo]:
    """Read a table written by write_word_infos."""
    infos = []
    for line in handle:
        line = line.rstrip("\n")
        if not line or line.startswith("#") or line.startswith("word\t"):
            continue
        word, n_chips, s, i_w, sampled = line.split("\t")
        infos.append(
            WordInfo(word, float(s), float(i_w), int(n_chips), bool(int(sampled)))
        )
    return infos
