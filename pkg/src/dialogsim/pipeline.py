"""End-to-end computation shared by the CLI and the benchmarks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .corpus import Corpus
from .evalx import (
    DEFAULT_TOP_TERMS,
    SWAP_COUNTS,
    baseline_ranking_matrix,
    perturbation_curve,
    ranking_mse,
    term_intersection,
    term_profile,
)
from .fusion import DistanceMatrix, RankingMatrix, borda_sum, ranking_matrix, top_k_similar
from .structsim import DEFAULT_TAU, structure_distance_matrix
from .textsim import text_distance_matrix

MODES = ("text", "structure", "combined")


@dataclass(frozen=True)
class Similarity:
    D_T: DistanceMatrix
    R_T: RankingMatrix
    D_S: DistanceMatrix
    R_S: RankingMatrix
    D_B: DistanceMatrix
    R_B: RankingMatrix

    def ranking(self, mode: str) -> RankingMatrix:
        return {"text": self.R_T, "structure": self.R_S, "combined": self.R_B}[mode]


def compute_similarity(
    corpus: Corpus,
    tau: float = DEFAULT_TAU,
    stoplist: frozenset[str] | None = None,
    threads: int | None = None,
) -> Similarity:
    D_T = text_distance_matrix(corpus, stoplist=stoplist, threads=threads)
    D_S = structure_distance_matrix(corpus, tau, stoplist, threads=threads)
    R_T = ranking_matrix(D_T)
    R_S = ranking_matrix(D_S)
    D_B = borda_sum(R_T, R_S)
    return Similarity(D_T, R_T, D_S, R_S, D_B, ranking_matrix(D_B))


def pairwise_mse(sim: Similarity) -> dict[str, float]:
    return {
        "T-S": ranking_mse(sim.R_T, sim.R_S),
        "T-B": ranking_mse(sim.R_T, sim.R_B),
        "S-B": ranking_mse(sim.R_S, sim.R_B),
    }


def case_study(
    corpus: Corpus,
    sim: Similarity,
    dialog_id: str,
    top_terms: int = DEFAULT_TOP_TERMS,
    stoplist: frozenset[str] | None = None,
) -> dict:
    """Nearest dialog under each mode and the overlap of their most frequent terms."""
    nearest = {mode: top_k_similar(sim.ranking(mode), dialog_id, 1)[0][0] for mode in MODES}
    original = term_profile(corpus.get(dialog_id), top_terms, stoplist)
    profiles = {mode: term_profile(corpus.get(i), top_terms, stoplist) for mode, i in nearest.items()}
    intersections = {
        mode: sorted(term_intersection([original, p])) for mode, p in profiles.items()
    }
    intersections["all"] = sorted(term_intersection([original, *profiles.values()]))
    return {"dialog": dialog_id, "nearest": nearest, "intersections": intersections}


def evaluation_report(
    corpus: Corpus,
    sim: Similarity,
    seed: int = 42,
    swap_counts: Sequence[int] = SWAP_COUNTS,
    swap_scope: str = "matrix",
    baseline: str = "random",
    case_ids: Sequence[str] = (),
    top_terms: int = DEFAULT_TOP_TERMS,
    stoplist: frozenset[str] | None = None,
) -> dict:
    base = baseline_ranking_matrix(len(corpus), seed, baseline)
    curve = perturbation_curve(base, seed, swap_counts, swap_scope)
    return {
        "n_dialogs": len(corpus),
        "seed": seed,
        "pairwise_mse": pairwise_mse(sim),
        "curve": [[k, m] for k, m in curve.points],
        "curve_settings": {"baseline": baseline, "swap_scope": swap_scope},
        "intersections": {i: case_study(corpus, sim, i, top_terms, stoplist) for i in case_ids},
    }
