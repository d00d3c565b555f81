"""Correction of character-level noise in class-text labels by
alternating between visual-sample assignment and per-word decoding."""

__version__ = "0.1.0"

from .core import (
    Assignment,
    DecodeConfig,
    DecodeResult,
    DecodeState,
    TemperatureSchedule,
    assignment_lower_bound,
    classify,
    classify_candidate_max,
    decode_word,
    inter_weight,
    intra_weight,
    run_denoiser,
)
from .corpus import (
    Corpus,
    CorpusIndex,
    ProposalSet,
    build_index,
    default_lexicon_path,
    load_corpus,
    load_default_corpus,
    propose,
)
from .embedding import (
    EmbeddingProvider,
    EmbeddingVec,
    LexiconEmbedder,
    StoreProvider,
    TrigramEmbedder,
    VisualSample,
    cosine_similarity,
    generate_world,
    load_embedding_store,
    write_embedding_store,
)
from .errors import (
    ConfigError,
    CorpusParseError,
    DenoiserError,
    EmptyCorpus,
    InvalidClassText,
    MissingEmbedding,
    ShapeError,
    StoreError,
)
from .evaluate import (
    Report,
    SweepGrid,
    build_report,
    frequency_baseline,
    label_accuracy,
    semantic_similarity,
    sweep,
    top1_accuracy,
)
from .noise import NoiseSpec, perturb, perturbation_rate
from .text import ClassText, WordCandidate, edit_distance, read_class_list, tokenize

__all__ = [
    "Assignment",
    "ClassText",
    "ConfigError",
    "Corpus",
    "CorpusIndex",
    "CorpusParseError",
    "DecodeConfig",
    "DecodeResult",
    "DecodeState",
    "DenoiserError",
    "EmbeddingProvider",
    "EmbeddingVec",
    "EmptyCorpus",
    "InvalidClassText",
    "LexiconEmbedder",
    "MissingEmbedding",
    "NoiseSpec",
    "ProposalSet",
    "Report",
    "ShapeError",
    "StoreError",
    "StoreProvider",
    "SweepGrid",
    "TemperatureSchedule",
    "TrigramEmbedder",
    "VisualSample",
    "WordCandidate",
    "assignment_lower_bound",
    "build_index",
    "build_report",
    "classify",
    "classify_candidate_max",
    "cosine_similarity",
    "decode_word",
    "default_lexicon_path",
    "edit_distance",
    "frequency_baseline",
    "generate_world",
    "inter_weight",
    "intra_weight",
    "label_accuracy",
    "load_corpus",
    "load_default_corpus",
    "load_embedding_store",
    "perturb",
    "perturbation_rate",
    "propose",
    "read_class_list",
    "run_denoiser",
    "semantic_similarity",
    "sweep",
    "tokenize",
    "top1_accuracy",
    "write_embedding_store",
]
