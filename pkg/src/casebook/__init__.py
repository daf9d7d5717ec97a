"""Case-memory book recommender with an expert review loop."""

from .engine import Engine, EngineConfig, Recommendation, RecommendationKind
from .pipeline import PipelineConfig, RawText, load_embeddings
from .review import ReviewBoard
from .similarity import Metric
from .store import CaseStore

__all__ = [
    "Engine",
    "EngineConfig",
    "Recommendation",
    "RecommendationKind",
    "PipelineConfig",
    "RawText",
    "load_embeddings",
    "ReviewBoard",
    "Metric",
    "CaseStore",
]

__version__ = "0.1.0"
