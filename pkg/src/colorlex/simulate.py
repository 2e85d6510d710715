"""Lexical-system simulation over the chips a corpus actually named.

Every target chip that received at least two distinct names (words
surviving the frequency threshold) becomes a referent. A simulated
reference game enumerates all ordered (target, distractor) referent
pairs; the speaker utters one of the target's names and the listener
picks the target unless the uttered word also applies to the
distractor, in which case it guesses (half credit, as an expected
value rather than a coin flip). Three speaker strategies are compared:

  actual         prefer the least informative name that does not apply
                 to the distractor; if every name applies, fall back to
                 the most informative one
  general_only   always the least informative name
  specific_only  always the most informative name

Accuracy is tallied in integers (chance = 1, success = 2, out of two
per interaction) and the mean informativeness of uttered words is a
compensated sum over per-word tallies, so results are exact and
independent of referent or word enumeration order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from math import fsum
from typing import Iterable, Mapping, Sequence, TextIO

import numpy as np

from . import kernels
from .colorspace import LabColor
from .corpus import ChipKey, CleanRound, Denotation
from .errors import ColorlexError
from .informativeness import WordInfo

__all__ = [
    "SystemVariant",
    "ReferentEntry",
    "SimResult",
    "Stimulus",
    "SimulationError",
    "UnknownWordError",
    "build_entries",
    "applicable",
    "speak",
    "listen_accuracy",
    "run_simulation",
    "run_all_variants",
    "generate_stimuli",
    "write_simulation",
    "write_stimuli",
]


class SimulationError(ColorlexError):
    pass


class UnknownWordError(ColorlexError):
    """Applicability asked about a word with no denotation."""


class SystemVariant(Enum):
    ACTUAL = "actual"
    GENERAL_ONLY = "general_only"
    SPECIFIC_ONLY = "specific_only"


_KERNEL_MODE = {
    SystemVariant.ACTUAL: 0,
    SystemVariant.GENERAL_ONLY: 1,
    SystemVariant.SPECIFIC_ONLY: 2,
}


@dataclass(frozen=True)
class ReferentEntry:
    """A referent chip and its (word, i_w) names, least informative first.

    Names are sorted ascending by (i_w, word) and contain at least two
    distinct words, so the general name (names[0]) and the specific
    name (names[-1]) always differ as words; equal scores fall back to
    lexicographic order.
    """

    key: ChipKey
    names: tuple[tuple[str, float], ...]
    name_set: frozenset[str]

    @property
    def general(self) -> str:
        return self.names[0][0]

    @property
    def specific(self) -> str:
        return self.names[-1][0]


@dataclass(frozen=True)
class SimResult:
    variant: SystemVariant
    accuracy: float
    i_l: float
    n_interactions: int
    vocab_size: int
    counts: Mapping[str, int]


@dataclass(frozen=True)
class Stimulus:
    """One corpus round selected for elicitation, with simulated names.

    simulated_general is the least informative name the target chip
    received across contexts, present only when strictly less
    informative than the name actually uttered; simulated_specific is
    the most informative one, present only when strictly more
    informative. A chip with no alternative names gets neither.
    """

    target: LabColor
    distractor1: LabColor
    distractor2: LabColor
    target_key: ChipKey
    actual_name: str
    simulated_general: str | None
    simulated_specific: str | None
    ease: float
    bin_index: int


def build_entries(
    rounds: Sequence[CleanRound], infos: Mapping[str, WordInfo]
) -> tuple[list[ReferentEntry], dict]:
    """Collect referents that received at least two distinct names.

    Words without an informativeness entry (below the frequency
    threshold) are dropped first; chips left with fewer than two
    distinct names are skipped. The report counts skipped chips,
    dropped names, and entries whose name order needed a lexicographic
    tie-break.
    """
    words_by_key: dict[ChipKey, set[str]] = {}
    dropped: set[tuple[ChipKey, str]] = set()
    for r in rounds:
        words_by_key.setdefault(r.target_key, set())
        if r.word in infos:
            words_by_key[r.target_key].add(r.word)
        else:
            dropped.add((r.target_key, r.word))
    entries: list[ReferentEntry] = []
    skipped = 0
    ties = 0
    for key in sorted(words_by_key):
        words = words_by_key[key]
        if len(words) < 2:
            skipped += 1
            continue
        ordered = tuple(
            (w, infos[w].i_w)
            for w in sorted(words, key=lambda w: (infos[w].i_w, w))
        )
        scores = [i for _, i in ordered]
        if len(set(scores)) != len(scores):
            ties += 1
        entries.append(ReferentEntry(key, ordered, frozenset(words)))
    report = {
        "n_referents": len(entries),
        "skipped_few_names": skipped,
        "dropped_names": len(dropped),
        "tie_entries": ties,
    }
    return entries, report


def applicable(
    word: str,
    referent: ReferentEntry,
    denotations: Mapping[str, Denotation] | None = None,
) -> bool:
    """Whether a word names the referent (the corpus used it for it).

    With denotations the check consults the word's full denotation and
    an unknown word is an error; without them it falls back to the
    referent's own name inventory, which agrees for every word that
    can actually be uttered in a simulation.
    """
    if denotations is None:
        return word in referent.name_set
    den = denotations.get(word)
    if den is None:
        raise UnknownWordError(f"no denotation for {word!r}")
    return referent.key in den.keys


def speak(
    target: ReferentEntry,
    distractor: ReferentEntry,
    variant: SystemVariant,
    denotations: Mapping[str, Denotation] | None = None,
) -> str:
    """The word the simulated speaker utters for target in this context."""
    if variant is SystemVariant.GENERAL_ONLY:
        return target.general
    if variant is SystemVariant.SPECIFIC_ONLY:
        return target.specific
    for word, _ in target.names:
        if not applicable(word, distractor, denotations):
            return word
    return target.specific


def listen_accuracy(
    word: str,
    target: ReferentEntry,
    distractor: ReferentEntry,
    denotations: Mapping[str, Denotation] | None = None,
) -> float:
    """Chance of the listener picking the target given the uttered word."""
    if not applicable(word, target, denotations):
        raise SimulationError(
            f"{word!r} does not apply to the target it describes"
        )
    return 0.5 if applicable(word, distractor, denotations) else 1.0


def _vocab_arrays(entries: Sequence[ReferentEntry]):
    vocab = sorted({w for e in entries for w, _ in e.names})
    index = {w: i for i, w in enumerate(vocab)}
    offsets = np.zeros(len(entries) + 1, dtype=np.int64)
    flat: list[int] = []
    for i, e in enumerate(entries):
        flat.extend(index[w] for w, _ in e.names)
        offsets[i + 1] = len(flat)
    words = np.array(flat, dtype=np.int64)
    app = np.zeros((len(entries), len(vocab)), dtype=np.uint8)
    for i, e in enumerate(entries):
        for w in e.name_set:
            app[i, index[w]] = 1
    return vocab, offsets, words, app


def run_simulation(
    entries: Sequence[ReferentEntry], variant: SystemVariant
) -> SimResult:
    """Play every ordered referent pair once under one speaker strategy."""
    if len(entries) < 2:
        raise SimulationError(f"need at least 2 referents, got {len(entries)}")
    i_w_of: dict[str, float] = {}
    for e in entries:
        for w, i_w in e.names:
            i_w_of[w] = i_w
    vocab, offsets, words, app = _vocab_arrays(entries)
    acc_twice, counts = kernels.simulate_counts(
        offsets, words, app, _KERNEL_MODE[variant]
    )
    n_inter = len(entries) * (len(entries) - 1)
    accuracy = acc_twice / (2 * n_inter)
    i_l = fsum(
        int(counts[i]) * i_w_of[w] for i, w in enumerate(vocab)
    ) / n_inter
    if variant is SystemVariant.GENERAL_ONLY:
        vocab_size = len({e.general for e in entries})
    elif variant is SystemVariant.SPECIFIC_ONLY:
        vocab_size = len({e.specific for e in entries})
    else:
        vocab_size = len(vocab)
    tallies = {
        w: int(counts[i]) for i, w in enumerate(vocab) if counts[i] > 0
    }
    return SimResult(variant, accuracy, i_l, n_inter, vocab_size, tallies)


def run_all_variants(
    entries: Sequence[ReferentEntry],
) -> dict[SystemVariant, SimResult]:
    return {v: run_simulation(entries, v) for v in SystemVariant}


def _assign_bins(values: Sequence[float], bins: int) -> list[int]:
    lo = min(values)
    hi = max(values)
    if hi == lo:
        return [0] * len(values)
    width = (hi - lo) / bins
    return [min(int((v - lo) / width), bins - 1) for v in values]


def generate_stimuli(
    rounds: Sequence[CleanRound],
    entries: Sequence[ReferentEntry],
    infos: Mapping[str, WordInfo],
    n: int = 100,
    bins: int = 10,
    seed: int = 0,
) -> tuple[list[Stimulus], dict]:
    """Sample corpus rounds evenly across the context-ease range.

    Rounds whose word has an informativeness entry are eligible. Ease
    values are split into equal-width bins and n // bins rounds are
    drawn from each; when a bin holds too few rounds the shortfall
    moves to the nearest bins that still have spares, recorded in the
    report. Each stimulus carries the alternative names of its target
    chip per the Stimulus rules.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if bins < 1 or n % bins != 0:
        raise ValueError(f"bins must divide n evenly, got n={n} bins={bins}")
    by_key = {e.key: e for e in entries}
    eligible = [r for r in rounds if r.word in infos]
    if len(eligible) < n:
        raise SimulationError(f"only {len(eligible)} eligible rounds, need {n}")
    bin_of = _assign_bins([r.context_ease for r in eligible], bins)
    pools: list[list[CleanRound]] = [[] for _ in range(bins)]
    for r, b in zip(eligible, bin_of):
        pools[b].append(r)
    quota = n // bins
    take = [min(quota, len(p)) for p in pools]
    short = [b for b in range(bins) if take[b] < quota]
    moved: dict[int, int] = {}
    for b in short:
        deficit = quota - take[b]
        while deficit > 0:
            # nearest bin with spare rounds; prefer the lower index
            best = None
            for other in sorted(range(bins), key=lambda o: (abs(o - b), o)):
                if other != b and len(pools[other]) > take[other]:
                    best = other
                    break
            if best is None:
                raise SimulationError(
                    "cannot rebalance bins; not enough eligible rounds"
                )
            take[best] += 1
            moved[best] = moved.get(best, 0) + 1
            deficit -= 1
    rng = random.Random(seed)
    stimuli: list[Stimulus] = []
    for b in range(bins):
        for r in sorted(
            rng.sample(pools[b], take[b]),
            key=lambda r: (r.context_ease, r.game_id, r.round_index),
        ):
            entry = by_key.get(r.target_key)
            actual_i_w = infos[r.word].i_w
            general = specific = None
            if entry is not None:
                if entry.names[0][1] < actual_i_w:
                    general = entry.general
                if entry.names[-1][1] > actual_i_w:
                    specific = entry.specific
            stimuli.append(
                Stimulus(
                    target=r.target,
                    distractor1=r.distractors[0],
                    distractor2=r.distractors[1],
                    target_key=r.target_key,
                    actual_name=r.word,
                    simulated_general=general,
                    simulated_specific=specific,
                    ease=r.context_ease,
                    bin_index=b,
                )
            )
    report = {
        "n_eligible": len(eligible),
        "bin_counts": take,
        "underpopulated_bins": short,
        "rebalanced": moved,
    }
    return stimuli, report


def write_simulation(
    handle: TextIO, results: Iterable[SimResult], header_comment: str
) -> None:
    handle.write(header_comment + "\n")
    handle.write("variant\taccuracy\ti_l\tn_interactions\tvocab_size\n")
    for r in results:
        handle.write(
            f"{r.variant.value}\t{r.accuracy!r}\t{r.i_l!r}"
            f"\t{r.n_interactions}\t{r.vocab_size}\n"
        )


def write_stimuli(
    handle: TextIO, stimuli: Iterable[Stimulus], header_comment: str
) -> None:
    handle.write(header_comment + "\n")
    handle.write(
        "bin\tease\ttarget_key\tactual\tsimulated_general\t"
        "simulated_specific\t"
        "target_l\ttarget_a\ttarget_b\td1_l\td1_a\td1_b\td2_l\td2_a\td2_b\n"
    )
    for s in stimuli:
        key = f"{s.target_key[0]}:{s.target_key[1]}:{s.target_key[2]}"
        fields = [
            str(s.bin_index),
            repr(s.ease),
            key,
            s.actual_name,
            s.simulated_general or "",
            s.simulated_specific or "",
            repr(s.target.l_star), repr(s.target.a_star), repr(s.target.b_star),
            repr(s.distractor1.l_star), repr(s.distractor1.a_star),
            repr(s.distractor1.b_star),
            repr(s.distractor2.l_star), repr(s.distractor2.a_star),
            repr(s.distractor2.b_star),
        ]
        handle.write("\t".join(fields) + "\n")
