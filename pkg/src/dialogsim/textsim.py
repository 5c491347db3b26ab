"""TF-IDF dialog vectors, cosine similarity and the textual distance matrix.

Term weights follow ``w(j) = tf(j) * log2(N / df(j))`` with ``tf`` the raw
count of the term inside the dialog and ``df`` the number of dialogs that
contain it.  Each dialog is one document: all of its turns, tokenized and
stopword filtered.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
import scipy.sparse as sp

from .corpus import Corpus, Dialog, content_terms
from .fusion import DistanceMatrix

# Similarities this close to 1 are rounding noise from duplicate documents.
_SNAP_EPS = 1e-12


@dataclass(frozen=True)
class Vocabulary:
    df: Mapping[str, int]
    n_docs: int
    index: Mapping[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n_docs < 1:
            raise ValueError("vocabulary needs at least one document")
        for term, count in self.df.items():
            if not 1 <= count <= self.n_docs:
                raise ValueError(f"df({term!r})={count} outside [1, {self.n_docs}]")
        object.__setattr__(self, "index", {t: i for i, t in enumerate(sorted(self.df))})

    def __len__(self) -> int:
        return len(self.df)

    def __contains__(self, term: str) -> bool:
        return term in self.df

    def idf(self, term: str) -> float:
        return math.log2(self.n_docs / self.df[term])


@dataclass(frozen=True)
class TfIdfVector:
    weights: Mapping[str, float]
    norm: float

    @classmethod
    def from_weights(cls, weights: Mapping[str, float]) -> TfIdfVector:
        return cls(dict(weights), math.sqrt(sum(w * w for w in weights.values())))

    def __len__(self) -> int:
        return len(self.weights)


def dialog_terms(dialog: Dialog, stoplist: frozenset[str] | None = None) -> list[str]:
    return content_terms(dialog.text, stoplist)


def build_vocabulary(corpus: Corpus, stoplist: frozenset[str] | None = None) -> Vocabulary:
    if len(corpus) == 0:
        raise ValueError("empty corpus")
    df: Counter[str] = Counter()
    for dialog in corpus:
        df.update(set(dialog_terms(dialog, stoplist)))
    return Vocabulary(dict(df), len(corpus))


def _weights(terms: list[str], vocab: Vocabulary) -> dict[str, float]:
    weights = {}
    for term, tf in Counter(terms).items():
        if term not in vocab.df:
            continue  # closed vocabulary
        w = tf * vocab.idf(term)
        if w > 0:
            weights[term] = w
    return weights


def tfidf_vector(
    dialog: Dialog, vocab: Vocabulary, stoplist: frozenset[str] | None = None
) -> TfIdfVector:
    """Sparse TF-IDF vector of one dialog.  Terms present in every document are dropped."""
    return TfIdfVector.from_weights(_weights(dialog_terms(dialog, stoplist), vocab))


def cosine_similarity(v1: TfIdfVector, v2: TfIdfVector) -> float:
    if v1.norm == 0 or v2.norm == 0:
        return 0.0
    small, large = (v1, v2) if len(v1) <= len(v2) else (v2, v1)
    dot = sum(w * large.weights.get(t, 0.0) for t, w in small.weights.items())
    return min(1.0, max(0.0, dot / (v1.norm * v2.norm)))


def tfidf_matrix(
    corpus: Corpus, vocab: Vocabulary | None = None, stoplist: frozenset[str] | None = None
) -> tuple[sp.csr_matrix, Vocabulary]:
    """Document-term matrix of TF-IDF weights, rows in corpus order, columns in sorted term order."""
    if vocab is None:
        vocab = build_vocabulary(corpus, stoplist)
    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    for dialog in corpus:
        row = sorted((vocab.index[t], w) for t, w in _weights(dialog_terms(dialog, stoplist), vocab).items())
        indices.extend(i for i, _ in row)
        data.extend(w for _, w in row)
        indptr.append(len(indices))
    X = sp.csr_matrix(
        (np.asarray(data, dtype=np.float64), np.asarray(indices, dtype=np.int64), np.asarray(indptr)),
        shape=(len(corpus), len(vocab)),
    )
    return X, vocab


def _row_normalize(X: sp.csr_matrix) -> sp.csr_matrix:
    norms = np.sqrt(np.asarray(X.multiply(X).sum(axis=1)).ravel())
    scale = np.divide(1.0, norms, out=np.zeros_like(norms), where=norms > 0)
    return sp.diags(scale) @ X


def text_distance_matrix(
    corpus: Corpus,
    vocab: Vocabulary | None = None,
    stoplist: frozenset[str] | None = None,
    threads: int | None = None,
    block_size: int = 256,
) -> DistanceMatrix:
    """Pairwise ``1 - cosine`` distances between the TF-IDF vectors of all dialogs.

    Row blocks may be computed on a thread pool; each output row depends only on
    its own document, so the result does not depend on ``threads``.
    """
    X, vocab = tfidf_matrix(corpus, vocab, stoplist)
    Xn = _row_normalize(X).tocsr()
    XT = Xn.T.tocsr()
    n = Xn.shape[0]

    def block(start: int) -> np.ndarray:
        return (Xn[start:start + block_size] @ XT).toarray()

    starts = range(0, n, block_size)
    if threads is not None and threads > 1 and n > block_size:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            blocks = list(pool.map(block, starts))
    else:
        blocks = [block(s) for s in starts]
    sim = np.vstack(blocks) if blocks else np.zeros((0, 0))

    sim[sim > 1.0 - _SNAP_EPS] = 1.0
    dist = 1.0 - np.clip(sim, 0.0, 1.0)
    # Mirror the upper triangle so the matrix is exactly symmetric.
    upper = np.triu(dist, 1)
    dist = upper + upper.T
    return DistanceMatrix(dist, corpus.ids)
