import json
import random

import pytest

from casebook.config import AppConfig, ExpertCredential
from casebook.engine import Engine, EngineConfig
from casebook.pipeline import PipelineConfig, load_embeddings
from casebook.review import ReviewBoard
from casebook.similarity import Metric
from casebook.store import MBTI_CODES, CaseStore

# small synthetic vocabulary used to generate deterministic case bases
VOCAB = [
    "gato", "perro", "libro", "lectura", "historia", "viaje", "noche", "ciudad",
    "mar", "montaña", "amigo", "familia", "tiempo", "vida", "sol", "luna",
    "casa", "camino", "palabra", "silencio", "fuego", "agua", "cielo", "tierra",
    "corazon", "sueño", "musica", "arte", "juego", "fiesta", "trabajo", "escuela",
    "tren", "barco", "isla", "bosque", "rio", "puente", "plaza", "mercado",
]

EXPERTS = ["ana", "bruno", "carla"]
TOKENS = {"ana": "tok-ana", "bruno": "tok-bruno", "carla": "tok-carla"}


def make_seed_records(n, rng=None, words_per_text=8):
    rng = rng or random.Random(7)
    codes = sorted(MBTI_CODES)
    records = []
    for i in range(n):
        text = " ".join(rng.choice(VOCAB) for _ in range(words_per_text))
        records.append(
            {
                "text": text,
                "book_title": f"Libro {i:03d}",
                "personality": rng.choice(codes),
            }
        )
    return records


@pytest.fixture
def embedding_file(tmp_path):
    """Deterministic dense table covering the synthetic vocabulary, dim 5."""
    rng = random.Random(13)
    lines = []
    for word in VOCAB:
        vec = [round(rng.uniform(-1.0, 1.0), 6) for _ in range(5)]
        lines.append(word + " " + " ".join(str(v) for v in vec))
    path = tmp_path / "embeddings.txt"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def embedding_table(embedding_file):
    return load_embeddings(embedding_file)


@pytest.fixture
def tiny_table(tmp_path):
    path = tmp_path / "tiny.txt"
    path.write_text("gato 1.0 0.0\nperro 0.0 1.0\nfelino 0.8 0.6\n", encoding="utf-8")
    return load_embeddings(path)


@pytest.fixture
def seed_file(tmp_path):
    records = make_seed_records(150)
    path = tmp_path / "seed.json"
    path.write_text(json.dumps(records, ensure_ascii=False), encoding="utf-8")
    return path


@pytest.fixture
def store(embedding_table):
    return CaseStore(pipeline=PipelineConfig(), embeddings=embedding_table)


@pytest.fixture
def seeded_store(store, seed_file):
    store.import_seed(seed_file)
    return store


@pytest.fixture
def board(store):
    return ReviewBoard(experts=EXPERTS, on_accept=store.retain)


@pytest.fixture
def engine(seeded_store, board):
    return Engine(store=seeded_store, board=board, config=EngineConfig())


@pytest.fixture
def app_config(tmp_path, embedding_file):
    return AppConfig(
        store_dir=tmp_path / "store",
        embeddings_path=embedding_file,
        experts=tuple(ExpertCredential(e, TOKENS[e]) for e in EXPERTS),
        metric=Metric.JACCARD,
    )
