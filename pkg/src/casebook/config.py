"""Engine-wide configuration loaded from a single YAML document.

Flags on the CLI override file values. The expert panel (ids and their
bearer tokens) is static configuration; there is no account management.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import yaml

from .errors import ConfigError
from .pipeline import PipelineConfig
from .similarity import Metric


@dataclass(frozen=True)
class ExpertCredential:
    expert_id: str
    token: str


@dataclass(frozen=True)
class AppConfig:
    store_dir: Path = Path("./store")
    embeddings_path: Optional[Path] = None
    seed_path: Optional[Path] = None
    metric: Metric = Metric.JACCARD
    threshold: float = 0.50
    top_k: int = 5
    fallback_count: int = 2
    remove_stopwords: bool = False
    stopwords_path: Optional[Path] = None
    experts: tuple[ExpertCredential, ...] = (
        ExpertCredential("expert-1", "token-1"),
        ExpertCredential("expert-2", "token-2"),
        ExpertCredential("expert-3", "token-3"),
    )
    listen_host: str = "127.0.0.1"
    listen_port: int = 8000

    def __post_init__(self):
        if len(self.experts) != 3:
            raise ConfigError("exactly 3 experts must be configured")
        if self.metric.needs_embeddings and self.embeddings_path is None:
            raise ConfigError(f"metric {self.metric.value!r} requires embeddings_path")

    def pipeline(self) -> PipelineConfig:
        if self.remove_stopwords:
            if self.stopwords_path is None:
                raise ConfigError("remove_stopwords set but no stopwords_path given")
            return PipelineConfig.with_stopword_file(self.stopwords_path)
        return PipelineConfig()


def load_config(path: str | Path, **overrides) -> AppConfig:
    """Read a flat YAML mapping; keyword overrides win over file values."""
    try:
        data = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"unreadable config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping")
    data.update({k: v for k, v in overrides.items() if v is not None})
    return from_mapping(data)


def from_mapping(data: dict) -> AppConfig:
    kwargs: dict = {}
    if "store_dir" in data:
        kwargs["store_dir"] = Path(data["store_dir"])
    for key in ("embeddings_path", "seed_path", "stopwords_path"):
        if data.get(key) is not None:
            kwargs[key] = Path(data[key])
    if "metric" in data:
        try:
            kwargs["metric"] = Metric(str(data["metric"]).lower())
        except ValueError:
            raise ConfigError(f"unknown metric {data['metric']!r}") from None
    for key in ("threshold",):
        if key in data:
            kwargs[key] = float(data[key])
    for key in ("top_k", "fallback_count"):
        if key in data:
            kwargs[key] = int(data[key])
    if "remove_stopwords" in data:
        kwargs["remove_stopwords"] = bool(data["remove_stopwords"])
    if "experts" in data:
        experts = []
        for entry in data["experts"]:
            if not isinstance(entry, dict) or "id" not in entry or "token" not in entry:
                raise ConfigError("each expert needs 'id' and 'token'")
            experts.append(ExpertCredential(str(entry["id"]), str(entry["token"])))
        kwargs["experts"] = tuple(experts)
    if "listen" in data:
        host, _, port = str(data["listen"]).rpartition(":")
        if not host or not port.isdigit():
            raise ConfigError(f"listen must be host:port, got {data['listen']!r}")
        kwargs["listen_host"] = host
        kwargs["listen_port"] = int(port)
    return AppConfig(**kwargs)
