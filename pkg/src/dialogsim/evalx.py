"""Evaluation helpers: ranking MSE, the random-swap perturbation baseline,
most-frequent-term overlaps and structural feature tables."""

from __future__ import annotations

from collections import Counter
from dataclasses import astuple, dataclass
from typing import Iterable, Sequence

import numpy as np

from .corpus import Corpus, Dialog, content_terms
from .fusion import RankingMatrix, ShapeMismatch
from .structsim import DEFAULT_TAU, FEATURE_NAMES, StructuralFeatures, structural_features

SWAP_COUNTS = tuple(50 * 2**i for i in range(1, 6))  # 100 .. 1600
DEFAULT_TOP_TERMS = 30
SWAP_SCOPES = ("matrix", "row")


def _ranks(R) -> np.ndarray:
    return R.ranks if isinstance(R, RankingMatrix) else np.asarray(R)


def ranking_mse(R_a: RankingMatrix, R_b: RankingMatrix) -> float:
    """Mean of the squared rank differences over all n*n cells, diagonal included."""
    a, b = _ranks(R_a), _ranks(R_b)
    if a.shape != b.shape:
        raise ShapeMismatch(f"cannot compare {a.shape} with {b.shape}")
    if isinstance(R_a, RankingMatrix) and isinstance(R_b, RankingMatrix) and R_a.labels != R_b.labels:
        raise ShapeMismatch("ranking matrices have different label order")
    diff = a.astype(np.float64) - b.astype(np.float64)
    return float(np.mean(diff * diff))


def _distinct_pairs(rng: np.random.Generator, high: int, size) -> tuple[np.ndarray, np.ndarray]:
    first = rng.integers(0, high, size=size)
    second = rng.integers(0, high - 1, size=size)
    second += second >= first
    return first, second


def perturb_ranking(R: RankingMatrix, swaps: int, seed: int, scope: str = "matrix") -> RankingMatrix:
    """Exchange the values of ``swaps`` randomly chosen pairs of cells.

    With ``scope="matrix"`` each swap picks two distinct cells anywhere in the
    matrix, so rows stop being permutations.  ``scope="row"`` performs
    ``swaps`` swaps inside every row instead, which keeps each row a
    permutation.
    """
    if swaps < 0:
        raise ValueError("swaps must be >= 0")
    if scope not in SWAP_SCOPES:
        raise ValueError(f"unknown swap scope {scope!r}")
    ranks = np.array(_ranks(R), dtype=np.int64)
    labels = R.labels if isinstance(R, RankingMatrix) else None
    n = ranks.shape[0]
    rng = np.random.default_rng(seed)
    if swaps == 0 or n * n < 2:
        return RankingMatrix(ranks, labels)

    if scope == "matrix":
        flat = ranks.reshape(-1)
        first, second = _distinct_pairs(rng, flat.size, swaps)
        for a, b in zip(first.tolist(), second.tolist()):
            flat[a], flat[b] = flat[b], flat[a]
    elif n > 1:
        rows = np.arange(n)
        for _ in range(swaps):
            a, b = _distinct_pairs(rng, n, n)
            ranks[rows, a], ranks[rows, b] = ranks[rows, b], ranks[rows, a]
    return RankingMatrix(ranks, labels)


@dataclass(frozen=True)
class PerturbationCurve:
    points: tuple[tuple[int, float], ...]
    seed: int

    def __post_init__(self):
        counts = [k for k, _ in self.points]
        if any(b <= a for a, b in zip(counts, counts[1:])):
            raise ValueError("swap counts must be strictly increasing")

    @property
    def swap_counts(self) -> list[int]:
        return [k for k, _ in self.points]

    @property
    def mses(self) -> list[float]:
        return [m for _, m in self.points]

    def is_increasing(self) -> bool:
        m = self.mses
        return all(b > a for a, b in zip(m, m[1:]))

    def to_csv(self) -> str:
        return "swaps,mse\n" + "".join(f"{k},{m:.6f}\n" for k, m in self.points)


def perturbation_curve(
    R: RankingMatrix,
    seed: int,
    swap_counts: Sequence[int] = SWAP_COUNTS,
    scope: str = "matrix",
) -> PerturbationCurve:
    """MSE between ``R`` and its perturbation at each swap count (seeded ``seed + k``)."""
    points = tuple(
        (int(k), ranking_mse(R, perturb_ranking(R, k, seed + k, scope))) for k in swap_counts
    )
    return PerturbationCurve(points, seed)


def random_ranking_matrix(n: int, seed: int) -> RankingMatrix:
    """Every row an independent uniform permutation of 1..n."""
    rng = np.random.default_rng(seed)
    return RankingMatrix(rng.permuted(np.tile(np.arange(1, n + 1), (n, 1)), axis=1))


def ordered_ranking_matrix(n: int) -> RankingMatrix:
    return RankingMatrix(np.tile(np.arange(1, n + 1), (n, 1)))


def baseline_ranking_matrix(n: int, seed: int, kind: str = "random") -> RankingMatrix:
    if kind == "random":
        return random_ranking_matrix(n, seed)
    if kind == "ordered":
        return ordered_ranking_matrix(n)
    raise ValueError(f"unknown baseline {kind!r}; expected 'random' or 'ordered'")


@dataclass(frozen=True)
class TermProfile:
    dialog_id: str
    top_terms: tuple[tuple[str, int], ...]

    def __post_init__(self):
        freqs = [f for _, f in self.top_terms]
        if any(b > a for a, b in zip(freqs, freqs[1:])):
            raise ValueError("term frequencies must be non-increasing")

    def terms(self, k: int | None = None) -> set[str]:
        top = self.top_terms if k is None else self.top_terms[:k]
        return {t for t, _ in top}


def term_profile(
    dialog: Dialog, k: int = DEFAULT_TOP_TERMS, stoplist: frozenset[str] | None = None
) -> TermProfile:
    """The ``k`` most frequent content terms of a dialog; ties broken alphabetically."""
    if k < 1:
        raise ValueError("k must be >= 1")
    counts = Counter(content_terms(dialog.text, stoplist))
    top = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:k]
    return TermProfile(dialog.id, tuple(top))


def term_intersection(profiles: Iterable[TermProfile], k: int | None = None) -> set[str]:
    profiles = list(profiles)
    if len(profiles) < 2:
        raise ValueError("term intersection needs at least two profiles")
    common = profiles[0].terms(k)
    for p in profiles[1:]:
        common &= p.terms(k)
    return common


def feature_report(
    corpus: Corpus,
    ids: Sequence[str],
    tau: float = DEFAULT_TAU,
    stoplist: frozenset[str] | None = None,
) -> list[tuple[str, StructuralFeatures]]:
    return [(i, structural_features(corpus.get(i), tau, stoplist)) for i in ids]


def format_feature_table(rows: list[tuple[str, StructuralFeatures]]) -> str:
    header = ("dialog", "# turns", "avg words per turn", "# cycles", "avg turns per cycle")
    body = [
        (i, str(f.num_turns), f"{f.avg_words_per_turn:.1f}", str(f.num_cycles), f"{f.avg_turns_per_cycle:.1f}")
        for i, f in rows
    ]
    widths = [max(len(r[c]) for r in [header, *body]) for c in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in [header, *body]]
    return "\n".join(lines) + "\n"


def feature_rows_as_dicts(rows: list[tuple[str, StructuralFeatures]]) -> list[dict]:
    return [{"id": i, **dict(zip(FEATURE_NAMES, astuple(f)))} for i, f in rows]
