import numpy as np
import pytest

from mlzsl.core.wordspace import EmbeddingTable
from mlzsl.datasets import SynthConfig, generate


def pytest_addoption(parser):
    parser.addoption(
        '--runslow',
        action='store_true',
        default=False,
        help='run the directional benchmark tests')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def basis_table():
    return EmbeddingTable(2, dict(a=[1.0, 0.0], b=[0.0, 1.0]))


@pytest.fixture
def random_table():
    rng = np.random.default_rng(7)
    names = ['a', 'b', 'c']
    return EmbeddingTable(6, dict(zip(names, rng.standard_normal((3, 6)))))


@pytest.fixture
def exact_synth():
    """Noiseless data whose source labels span the whole word space."""
    cfg = SynthConfig(
        dim=4,
        m_S=6,
        m_T=3,
        n_S=120,
        n_T=60,
        feature_dim=4,
        multilabel_rate=0.3,
        noise_sigma=0.0,
        shift=0.0,
        g='identity',
        seed=0)
    return generate(cfg)


@pytest.fixture
def exact_files(exact_synth, tmp_path):
    return exact_synth.export(str(tmp_path / 'data'))
