"""Ranking matrices and Borda-count fusion of two rankings."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Sequence

import numpy as np


class ShapeMismatch(ValueError):
    pass


def _labels(labels, n: int) -> tuple[str, ...]:
    if labels is None:
        return tuple(str(i) for i in range(n))
    labels = tuple(str(x) for x in labels)
    if len(labels) != n:
        raise ShapeMismatch(f"{len(labels)} labels for a {n}x{n} matrix")
    return labels


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Square matrix of non-negative pairwise distances with one label per row.

    Textual and structural matrices are symmetric with a zero diagonal; the
    Borda sum of two rankings is neither, and is still a valid input to
    ranking_matrix.
    """

    values: np.ndarray
    labels: tuple[str, ...] = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise ShapeMismatch(f"distance matrix must be square, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("distance matrix contains non-finite values")
        if np.any(values < 0):
            raise ValueError("distance matrix contains negative values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", _labels(self.labels, values.shape[0]))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.values, self.values.T))

    def has_zero_diagonal(self) -> bool:
        return bool(np.all(np.diag(self.values) == 0))

    def to_csv(self) -> str:
        return _write_csv(self.labels, self.values, lambda x: f"{x:.6f}")

    @classmethod
    def from_csv(cls, text: str) -> DistanceMatrix:
        labels, rows = _read_csv(text)
        return cls(np.array([[float(x) for x in r] for r in rows]).reshape(len(labels), len(labels)), labels)


@dataclass(frozen=True, eq=False)
class RankingMatrix:
    """Per-row ranks; ``ranks[i, j]`` is the position of dialog j among the neighbours of i.

    Matrices produced by ranking_matrix have every row a permutation of 1..n
    with 1 on the diagonal.  Perturbed matrices need not.
    """

    ranks: np.ndarray
    labels: tuple[str, ...] = None

    def __post_init__(self):
        ranks = np.asarray(self.ranks)
        if ranks.ndim != 2 or ranks.shape[0] != ranks.shape[1]:
            raise ShapeMismatch(f"ranking matrix must be square, got shape {ranks.shape}")
        ranks = ranks.astype(np.int64, copy=True)
        ranks.setflags(write=False)
        object.__setattr__(self, "ranks", ranks)
        object.__setattr__(self, "labels", _labels(self.labels, ranks.shape[0]))

    @property
    def n(self) -> int:
        return self.ranks.shape[0]

    def __eq__(self, other):
        if not isinstance(other, RankingMatrix):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.ranks, other.ranks)

    def rows_are_permutations(self) -> bool:
        expected = np.arange(1, self.n + 1)
        return bool(np.all(np.sort(self.ranks, axis=1) == expected))

    def to_csv(self) -> str:
        return _write_csv(self.labels, self.ranks, str)

    @classmethod
    def from_csv(cls, text: str) -> RankingMatrix:
        labels, rows = _read_csv(text)
        return cls(np.array([[int(x) for x in r] for r in rows], dtype=np.int64).reshape(len(labels), len(labels)), labels)


def _write_csv(labels, values, fmt) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["", *labels])
    for label, row in zip(labels, values):
        w.writerow([label, *(fmt(x) for x in row)])
    return buf.getvalue()


def _read_csv(text: str) -> tuple[list[str], list[list[str]]]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ValueError("empty matrix file")
    labels = rows[0][1:]
    body = rows[1:]
    if len(body) != len(labels) or any(len(r) != len(labels) + 1 for r in body):
        raise ShapeMismatch("matrix CSV is not square")
    for label, r in zip(labels, body):
        if r[0] != label:
            raise ValueError(f"row label {r[0]!r} does not match column label {label!r}")
    return labels, [r[1:] for r in body]


def ranking_matrix(D: DistanceMatrix) -> RankingMatrix:
    """Rank each row of ``D`` ascending.

    The self entry always gets rank 1; the rest follow by distance, ties going
    to the lower column index.
    """
    n = D.n
    keys = np.array(D.values, dtype=np.float64)
    np.fill_diagonal(keys, -np.inf)
    order = np.argsort(keys, axis=1, kind="stable")
    ranks = np.empty((n, n), dtype=np.int64)
    np.put_along_axis(ranks, order, np.broadcast_to(np.arange(1, n + 1), (n, n)), axis=1)
    return RankingMatrix(ranks, D.labels)


def _check_compatible(a: RankingMatrix, b: RankingMatrix) -> None:
    if a.n != b.n:
        raise ShapeMismatch(f"ranking matrices differ in size: {a.n} vs {b.n}")
    if a.labels != b.labels:
        raise ShapeMismatch("ranking matrices have different label order")


def borda_sum(R_T: RankingMatrix, R_S: RankingMatrix) -> DistanceMatrix:
    _check_compatible(R_T, R_S)
    return DistanceMatrix(R_T.ranks + R_S.ranks, R_T.labels)


def combined_ranking(R_T: RankingMatrix, R_S: RankingMatrix) -> RankingMatrix:
    """Borda fusion: re-rank the entrywise sum of two ranking matrices."""
    return ranking_matrix(borda_sum(R_T, R_S))


def top_k_similar(R: RankingMatrix, dialog_id: str, k: int) -> list[tuple[str, int]]:
    try:
        i = R.labels.index(dialog_id)
    except ValueError:
        raise KeyError(f"unknown dialog id {dialog_id!r}") from None
    if not 1 <= k < R.n:
        raise ValueError(f"k must be in [1, {R.n - 1}], got {k}")
    row = R.ranks[i]
    others = [j for j in np.argsort(row, kind="stable") if j != i]
    return [(R.labels[j], int(row[j])) for j in others[:k]]


def rank_rows(values: Sequence[Sequence[float]]) -> RankingMatrix:
    """Convenience: ranking matrix of a plain nested list of distances."""
    return ranking_matrix(DistanceMatrix(np.asarray(values, dtype=np.float64)))
