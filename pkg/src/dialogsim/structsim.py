"""Structural dialog metrics: turns, words per turn and rephrasing cycles.

A cycle is a maximal run of two or more consecutive turns where every
adjacent pair is lexically similar (binary cosine over content words at or
above a threshold).  Speakers are ignored.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import astuple, dataclass, fields

import numpy as np

from .corpus import Corpus, Dialog, Turn, content_terms, word_count
from .fusion import DistanceMatrix

DEFAULT_TAU = 0.5


@dataclass(frozen=True)
class CycleSpan:
    start_turn: int
    end_turn: int  # inclusive

    def __post_init__(self):
        if self.end_turn <= self.start_turn:
            raise ValueError(f"cycle must span at least 2 turns: {self.start_turn}..{self.end_turn}")

    def __len__(self) -> int:
        return self.end_turn - self.start_turn + 1


@dataclass(frozen=True)
class StructuralFeatures:
    num_turns: int
    avg_words_per_turn: float
    num_cycles: int
    avg_turns_per_cycle: float

    def as_vector(self) -> np.ndarray:
        return np.array(astuple(self), dtype=np.float64)


FEATURE_NAMES = tuple(f.name for f in fields(StructuralFeatures))


def _check_tau(tau: float) -> None:
    if not 0 < tau <= 1:
        raise ValueError(f"cycle threshold must be in (0, 1], got {tau}")


def _binary_cosine(a: set[str], b: set[str]) -> float:
    if not a or not b:
        return 0.0
    return len(a & b) / math.sqrt(len(a) * len(b))


def turn_similarity(t1: Turn | str, t2: Turn | str, stoplist: frozenset[str] | None = None) -> float:
    a = set(content_terms(t1.text if isinstance(t1, Turn) else t1, stoplist))
    b = set(content_terms(t2.text if isinstance(t2, Turn) else t2, stoplist))
    return _binary_cosine(a, b)


def detect_cycles(
    dialog: Dialog, tau: float = DEFAULT_TAU, stoplist: frozenset[str] | None = None
) -> list[CycleSpan]:
    _check_tau(tau)
    term_sets = [set(content_terms(t.text, stoplist)) for t in dialog.turns]
    spans = []
    start = 0
    for i in range(1, len(term_sets) + 1):
        linked = i < len(term_sets) and _binary_cosine(term_sets[i - 1], term_sets[i]) >= tau
        if not linked:
            if i - 1 > start:
                spans.append(CycleSpan(start, i - 1))
            start = i
    return spans


def structural_features(
    dialog: Dialog, tau: float = DEFAULT_TAU, stoplist: frozenset[str] | None = None
) -> StructuralFeatures:
    cycles = detect_cycles(dialog, tau, stoplist)
    n = len(dialog.turns)
    words = sum(word_count(t) for t in dialog.turns)
    avg_cycle = sum(len(c) for c in cycles) / len(cycles) if cycles else 0.0
    return StructuralFeatures(n, words / n, len(cycles), avg_cycle)


def corpus_features(
    corpus: Corpus,
    tau: float = DEFAULT_TAU,
    stoplist: frozenset[str] | None = None,
    threads: int | None = None,
) -> list[StructuralFeatures]:
    _check_tau(tau)
    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda d: structural_features(d, tau, stoplist), corpus))
    return [structural_features(d, tau, stoplist) for d in corpus]


def minmax_normalize(F: np.ndarray) -> np.ndarray:
    """Scale each column to [0, 1]; constant columns become 0."""
    F = np.asarray(F, dtype=np.float64)
    lo = F.min(axis=0)
    span = F.max(axis=0) - lo
    safe = np.where(span > 0, span, 1.0)
    return np.where(span > 0, (F - lo) / safe, 0.0)


def feature_distance_matrix(features: list[StructuralFeatures], labels) -> DistanceMatrix:
    F = minmax_normalize(np.vstack([f.as_vector() for f in features]))
    diff = F[:, None, :] - F[None, :, :]
    return DistanceMatrix(np.sqrt(np.einsum("ijk,ijk->ij", diff, diff)), labels)


def structure_distance_matrix(
    corpus: Corpus,
    tau: float = DEFAULT_TAU,
    stoplist: frozenset[str] | None = None,
    threads: int | None = None,
) -> DistanceMatrix:
    """Euclidean distances between min-max normalized feature vectors."""
    return feature_distance_matrix(corpus_features(corpus, tau, stoplist, threads), corpus.ids)


def features_to_csv(rows: list[tuple[str, StructuralFeatures]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", *FEATURE_NAMES])
    for dialog_id, f in rows:
        w.writerow([dialog_id, *astuple(f)])
    return buf.getvalue()
