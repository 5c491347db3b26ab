"""Dialog similarity combining TF-IDF text similarity with structural metrics via Borda fusion."""

from .corpus import (
    Corpus,
    CorpusError,
    Dialog,
    ParseError,
    Turn,
    ValidationError,
    default_stopwords,
    load_corpus,
    load_stopwords,
    parse_corpus,
    remove_stopwords,
    serialize_corpus,
    tokenize,
    word_count,
)
from .fusion import (
    DistanceMatrix,
    RankingMatrix,
    borda_sum,
    combined_ranking,
    ranking_matrix,
    top_k_similar,
)
from .structsim import (
    CycleSpan,
    StructuralFeatures,
    detect_cycles,
    structural_features,
    structure_distance_matrix,
    turn_similarity,
)
from .textsim import (
    TfIdfVector,
    Vocabulary,
    build_vocabulary,
    cosine_similarity,
    text_distance_matrix,
    tfidf_vector,
)

__version__ = "0.1.0"
