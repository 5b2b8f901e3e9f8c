import pytest

from pathcase.config import EngineConfig
from pathcase.ingest.corpus import CorpusStore
from pathcase.service.engine import Engine
from pathcase.synth import make_corpus


@pytest.fixture(scope="session")
def small_corpus():
    """20 deterministic synthetic reports with their generation ground truth."""
    raws, cases = make_corpus(20, seed=11)
    return raws, cases


@pytest.fixture(scope="session")
def small_store(small_corpus):
    raws, _ = small_corpus
    return CorpusStore.build(raws)


@pytest.fixture(scope="session")
def small_engine(small_store):
    return Engine.from_parts(EngineConfig(mock_dim=48, mock_seed=5), small_store)
