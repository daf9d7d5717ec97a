"""Similarity measures used by retrieval: cosine, Jaccard and soft cosine.

Soft cosine generalizes cosine with a feature-similarity matrix so that
distinct but related words still contribute; with the identity matrix it
reduces to plain cosine over the count vectors. All functions are pure
and safe to evaluate in parallel across cases.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import EmptySet, ZeroNorm, ZeroVector
from .pipeline import DocumentVector, EmbeddingTable, TokenizedText


class Metric(str, enum.Enum):
    JACCARD = "jaccard"
    COSINE = "cosine"
    SOFTCOSINE = "softcosine"

    @property
    def needs_embeddings(self) -> bool:
        return self is not Metric.JACCARD


@dataclass(frozen=True)
class SimilarityScore:
    value: float
    metric: Metric

    def __post_init__(self):
        if not np.isfinite(self.value):
            raise ValueError("similarity score must be finite")


@dataclass(frozen=True)
class FeatureSimilarityMatrix:
    """Symmetric matrix over the sorted token union of two documents.

    Diagonal is 1; off-diagonal entries are embedding cosines clamped at 0
    (0 when either token is out of vocabulary), keeping soft cosine in [0, 1].
    """

    features: tuple[str, ...]
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.features)


def _raw_cosine(a: np.ndarray, b: np.ndarray) -> float:
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise ZeroVector("cosine undefined for a zero vector")
    return float(np.dot(a, b) / (na * nb))


def cosine(a: DocumentVector, b: DocumentVector) -> SimilarityScore:
    """Normalized dot product of two document vectors."""
    if a.values.shape != b.values.shape:
        raise ValueError("document vectors have different dimensions")
    return SimilarityScore(value=_raw_cosine(a.values, b.values), metric=Metric.COSINE)


def jaccard(a: TokenizedText, b: TokenizedText) -> SimilarityScore:
    """Set overlap |A∩B| / |A∪B| over distinct tokens."""
    if not a.token_set or not b.token_set:
        raise EmptySet("jaccard undefined for an empty token set")
    inter = len(a.token_set & b.token_set)
    union = len(a.token_set | b.token_set)
    return SimilarityScore(value=inter / union, metric=Metric.JACCARD)


def build_feature_matrix(
    features_a: TokenizedText,
    features_b: TokenizedText,
    table: EmbeddingTable,
) -> FeatureSimilarityMatrix:
    """Pairwise token similarity over the union vocabulary of two documents."""
    features = tuple(sorted(features_a.token_set | features_b.token_set))
    n = len(features)
    s = np.eye(n)
    vectors = [table.get(t) for t in features]
    for i in range(n):
        if vectors[i] is None:
            continue
        for j in range(i + 1, n):
            if vectors[j] is None:
                continue
            try:
                sim = max(0.0, _raw_cosine(vectors[i], vectors[j]))
            except ZeroVector:
                sim = 0.0
            s[i, j] = s[j, i] = sim
    s.setflags(write=False)
    return FeatureSimilarityMatrix(features=features, matrix=s)


def soft_cosine(
    a_counts: np.ndarray,
    b_counts: np.ndarray,
    s: FeatureSimilarityMatrix,
) -> SimilarityScore:
    """Cosine generalized by the feature-similarity matrix.

    Numerator aᵀSb over denominators sqrt(aᵀSa)·sqrt(bᵀSb); counts are raw
    term frequencies indexed by the matrix's feature order.
    """
    a = np.asarray(a_counts, dtype=np.float64)
    b = np.asarray(b_counts, dtype=np.float64)
    if a.shape != (s.dim,) or b.shape != (s.dim,):
        raise ValueError("count vectors must match the matrix feature index")
    m = s.matrix
    denom_a = float(a @ m @ a)
    denom_b = float(b @ m @ b)
    if denom_a <= 0.0 or denom_b <= 0.0:
        raise ZeroNorm("soft cosine undefined: zero quadratic-form norm")
    value = float(a @ m @ b) / (denom_a**0.5 * denom_b**0.5)
    return SimilarityScore(value=value, metric=Metric.SOFTCOSINE)


def term_counts(text: TokenizedText, features: tuple[str, ...]) -> np.ndarray:
    """Raw term-frequency vector of `text` over a feature index."""
    index = {f: i for i, f in enumerate(features)}
    counts = np.zeros(len(features))
    for tok in text.tokens:
        i = index.get(tok)
        if i is not None:
            counts[i] += 1.0
    return counts


def soft_cosine_texts(
    a: TokenizedText, b: TokenizedText, table: EmbeddingTable
) -> SimilarityScore:
    """Soft cosine of two documents, building the feature matrix on the fly."""
    s = build_feature_matrix(a, b, table)
    return soft_cosine(term_counts(a, s.features), term_counts(b, s.features), s)
