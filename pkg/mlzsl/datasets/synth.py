import logging
import os.path as osp
from dataclasses import asdict, dataclass, field
from typing import Optional

import mmcv
import numpy as np
from mmcv.utils import print_log

from mlzsl.core.wordspace import EmbeddingTable, save_embeddings
from mlzsl.utils.config import config_hash
from mlzsl.utils.exceptions import ValidationError
from mlzsl.utils.seed import derive_seed
from .multilabel import MultiLabelDataset, save_dataset

HIDDEN_MAPS = ('identity', 'linear', 'relu')
# correlation 1 maps to this inverse temperature of the pair sampler
CORRELATION_SCALE = 4.0
MAX_REJECTIONS = 10000


@dataclass
class SynthConfig:
    """Generator settings for a synthetic zero-shot multi-label benchmark.

    Args:
        dim (int): Word-space dimensionality.
        rank (int, optional): Dimension of the subspace every label vector
            is drawn from. Defaults to ``min(dim, m_S)`` so the source
            labels span the subspace the target labels live in.
        m_S (int): Number of source labels.
        m_T (int): Number of target labels, disjoint from the source ones.
        n_S (int): Source instances.
        n_T (int): Target instances.
        feature_dim (int): Width of the instance features. Must equal
            ``dim`` when ``g='identity'``.
        multilabel_rate (float): Fraction of target instances (and source
            instances unless ``source_multilabel_rate`` is set) carrying
            more than one label.
        source_multilabel_rate (float, optional): Separate rate for the
            source split; 0 gives a single-label source domain.
        max_labels (int): Largest label set drawn for a multi-label
            instance.
        correlation (float): Strength in [0, 1] of the pairwise
            co-occurrence bias. Every label pair gets a hidden coupling of
            +1 (likes to co-occur) or -1.
        noise_sigma (float): Std of the Gaussian noise added to features.
        shift (float): Magnitude of the target-domain perturbation of the
            features.
        g (str): Hidden map from label-sum embeddings to features:
            'identity', 'linear' (random well-conditioned) or 'relu'
            (linear followed by a ReLU bend).
        relu_bend (float): Slope added on the positive side by 'relu'.
        seed (int): Master seed; every random stream is a sub-seed of it.
    """
    dim: int = 32
    rank: Optional[int] = None
    m_S: int = 12
    m_T: int = 5
    n_S: int = 500
    n_T: int = 500
    feature_dim: int = 64
    multilabel_rate: float = 0.3
    source_multilabel_rate: Optional[float] = None
    max_labels: int = 3
    correlation: float = 0.0
    noise_sigma: float = 0.1
    shift: float = 0.0
    g: str = 'linear'
    relu_bend: float = 0.5
    seed: int = 0
    coupling: Optional[list] = field(default=None, repr=False)

    def __post_init__(self):
        if self.coupling is not None:
            self.coupling = np.asarray(self.coupling, dtype=float).tolist()
        if self.m_S < 2 or self.m_T < 2:
            raise ValidationError(
                f'm_S and m_T must be at least 2, got {self.m_S}, {self.m_T}')
        for name in ('dim', 'n_S', 'n_T', 'feature_dim', 'max_labels'):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ValidationError(
                    f'{name} must be a positive integer, got {value}')
        for name in ('multilabel_rate', 'source_multilabel_rate',
                     'correlation'):
            value = getattr(self, name)
            if value is not None and not 0.0 <= value <= 1.0:
                raise ValidationError(f'{name} must be in [0, 1], got {value}')
        for name in ('noise_sigma', 'shift', 'relu_bend'):
            if not getattr(self, name) >= 0:
                raise ValidationError(f'{name} must be nonnegative')
        if self.rank is not None and (int(self.rank) != self.rank
                                      or not 1 <= self.rank <= self.dim):
            raise ValidationError(
                f'rank must be an integer in [1, dim={self.dim}], '
                f'got {self.rank}')
        if self.g not in HIDDEN_MAPS:
            raise ValidationError(
                f'g must be one of {HIDDEN_MAPS}, got {self.g!r}')
        if self.g == 'identity' and self.feature_dim != self.dim:
            raise ValidationError(
                'g="identity" needs feature_dim == dim, got '
                f'{self.feature_dim} and {self.dim}')
        rates = [self.multilabel_rate, self.source_rate]
        if any(r > 0 for r in rates) and self.max_labels < 2:
            raise ValidationError(
                'max_labels must be at least 2 for multi-label instances')

    @property
    def label_rank(self):
        if self.rank is None:
            return min(self.dim, self.m_S)
        return int(self.rank)

    @property
    def source_rate(self):
        if self.source_multilabel_rate is None:
            return self.multilabel_rate
        return self.source_multilabel_rate

    def to_dict(self):
        return asdict(self)


class SynthDataset(object):
    """Word space plus source and target splits drawn by :func:`generate`.

    Attributes:
        embeddings (:obj:`EmbeddingTable`): Vectors of every source and
            target label.
        source (:obj:`MultiLabelDataset`): Training domain.
        target (:obj:`MultiLabelDataset`): Test domain, unseen labels.
        config (:obj:`SynthConfig`): Provenance.
    """

    def __init__(self, embeddings, source, target, config):
        self.embeddings = embeddings
        self.source = source
        self.target = target
        self.config = config

    @property
    def config_hash(self):
        return config_hash(self.config.to_dict())

    def export(self, out_dir):
        """Write ``embeddings.txt``, ``source.csv`` and ``target.csv``.

        Returns:
            dict: The three file paths.
        """
        mmcv.mkdir_or_exist(out_dir)
        paths = dict(
            embeddings=osp.join(out_dir, 'embeddings.txt'),
            source=osp.join(out_dir, 'source.csv'),
            target=osp.join(out_dir, 'target.csv'))
        save_embeddings(self.embeddings, paths['embeddings'])
        meta = dict(config_hash=self.config_hash, seed=self.config.seed)
        save_dataset(self.source, paths['source'], **meta)
        save_dataset(self.target, paths['target'], **meta)
        return paths

    def __repr__(self):
        return (f'{self.__class__.__name__}(source={self.source}, '
                f'target={self.target})')


def random_coupling(m, rng):
    """Symmetric +-1 pair couplings with a zero diagonal."""
    upper = np.triu(rng.choice([-1.0, 1.0], size=(m, m)), 1)
    return upper + upper.T


def check_coupling(coupling, m):
    coupling = np.asarray(coupling, dtype=np.float64)
    if coupling.shape != (m, m):
        raise ValidationError(
            f'coupling must be {m} x {m}, got shape {coupling.shape}')
    if not np.all(np.isfinite(coupling)):
        raise ValidationError('coupling has non-finite entries')
    if not np.allclose(coupling, coupling.T):
        raise ValidationError('coupling must be symmetric')
    if np.any(np.diag(coupling) != 0):
        raise ValidationError('coupling must have a zero diagonal')
    if np.abs(coupling).max(initial=0.0) > 1:
        raise ValidationError('coupling entries must lie in [-1, 1]')
    return coupling


def sample_label_sets(n, m, multilabel_rate, max_labels, correlation,
                      coupling, rng):
    """Draw ``n`` label sets over ``m`` labels.

    Exactly ``round(multilabel_rate * n)`` instances get 2 to ``max_labels``
    labels, the rest a single one. Multi-label proposals are uniform subsets
    of a uniform size, accepted with probability
    ``exp(beta * (E(S) - |pairs(S)|))`` where ``E(S)`` sums the couplings of
    the pairs in ``S`` and ``beta = CORRELATION_SCALE * correlation``.

    Returns:
        ndarray: 0/1 matrix of shape (n, m).
    """
    labels = np.zeros((n, m), dtype=np.uint8)
    n_multi = int(round(multilabel_rate * n))
    is_multi = np.zeros(n, dtype=bool)
    is_multi[rng.permutation(n)[:n_multi]] = True
    beta = CORRELATION_SCALE * correlation
    largest = min(max_labels, m)

    for i in range(n):
        if not is_multi[i]:
            labels[i, rng.integers(m)] = 1
            continue
        for _ in range(MAX_REJECTIONS):
            size = int(rng.integers(2, largest + 1))
            members = rng.choice(m, size=size, replace=False)
            sub = coupling[np.ix_(members, members)]
            pairs = size * (size - 1) / 2
            energy = np.triu(sub, 1).sum()
            if rng.random() < np.exp(beta * (energy - pairs)):
                labels[i, members] = 1
                break
        else:
            raise ValidationError(
                f'label sampler rejected {MAX_REJECTIONS} proposals in a '
                'row; the coupling matrix and correlation are infeasible')
    return labels


def _hidden_map(cfg, rng):
    if cfg.g == 'identity':
        return lambda s: s.copy()
    # orthonormal frames with singular values in [0.5, 1.5]
    U, _ = np.linalg.qr(rng.standard_normal((cfg.dim, cfg.dim)))
    V, _ = np.linalg.qr(rng.standard_normal((cfg.feature_dim, cfg.dim)))
    singular = rng.uniform(0.5, 1.5, size=cfg.dim)
    A = (U * singular) @ V.T
    c = 0.1 * rng.standard_normal(cfg.feature_dim)
    if cfg.g == 'linear':
        return lambda s: s @ A + c
    return lambda s: s @ A + c + cfg.relu_bend * np.maximum(s @ A + c, 0)


def draw_label_vectors(m, dim, rank, rng):
    """``m`` Gaussian label vectors confined to a random ``rank``-dimensional
    subspace of R^dim, unit variance along each basis direction.

    With ``rank == dim`` this is a plain standard normal draw.
    """
    if rank >= dim:
        return rng.standard_normal((m, dim))
    coords = rng.standard_normal((m, rank))
    basis, _ = np.linalg.qr(rng.standard_normal((dim, rank)))
    return coords @ basis.T


def _label_names(prefix, m):
    width = len(str(m - 1))
    return [f'{prefix}{i:0{width}d}' for i in range(m)]


def generate(cfg, logger=None):
    """Draw a synthetic benchmark from ``cfg``.

    Label vectors are Gaussian in a shared random subspace of rank
    ``cfg.label_rank``. Instance features are
    ``g(L @ V) + noise``; target features are further perturbed by
    ``shift * (f @ R + delta)`` with a random matrix ``R`` and offset
    ``delta``. The output depends on ``cfg`` alone.

    Args:
        cfg (:obj:`SynthConfig` | dict): Generator settings.

    Returns:
        :obj:`SynthDataset`
    """
    if isinstance(cfg, dict):
        cfg = SynthConfig(**cfg)

    def stream(name):
        return np.random.default_rng(derive_seed(cfg.seed, name))

    source_vocab = _label_names('src', cfg.m_S)
    target_vocab = _label_names('tgt', cfg.m_T)
    rank = cfg.label_rank
    if rank > cfg.m_S:
        print_log(
            f'synth: {cfg.m_S} source labels cannot span the rank-{rank} '
            'label subspace; part of every target vector is unlearnable',
            logger=logger,
            level=logging.WARNING)
    vectors = draw_label_vectors(cfg.m_S + cfg.m_T, cfg.dim, rank,
                                 stream('embeddings'))
    table = EmbeddingTable(
        cfg.dim, dict(zip(source_vocab + target_vocab, vectors)))
    V_S, V_T = vectors[:cfg.m_S], vectors[cfg.m_S:]

    coupling_rng = stream('coupling')
    J_S = random_coupling(cfg.m_S, coupling_rng)
    J_T = random_coupling(cfg.m_T, coupling_rng)
    if cfg.coupling is not None:
        J_T = check_coupling(cfg.coupling, cfg.m_T)

    L_S = sample_label_sets(cfg.n_S, cfg.m_S, cfg.source_rate,
                            cfg.max_labels, cfg.correlation, J_S,
                            stream('labels.source'))
    L_T = sample_label_sets(cfg.n_T, cfg.m_T, cfg.multilabel_rate,
                            cfg.max_labels, cfg.correlation, J_T,
                            stream('labels.target'))

    g = _hidden_map(cfg, stream('map'))
    X_S = g(L_S @ V_S)
    X_T = g(L_T @ V_T)
    if cfg.noise_sigma > 0:
        X_S += cfg.noise_sigma * stream('noise.source').standard_normal(
            X_S.shape)
        X_T += cfg.noise_sigma * stream('noise.target').standard_normal(
            X_T.shape)
    if cfg.shift > 0:
        shift_rng = stream('shift')
        R = shift_rng.standard_normal(
            (cfg.feature_dim, cfg.feature_dim)) / np.sqrt(cfg.feature_dim)
        delta = shift_rng.standard_normal(cfg.feature_dim)
        X_T = X_T + cfg.shift * (X_T @ R + delta)

    source = MultiLabelDataset(
        X_S, L_S, source_vocab, split='source',
        ids=[f's{i}' for i in range(cfg.n_S)])
    target = MultiLabelDataset(
        X_T, L_T, target_vocab, split='target',
        ids=[f't{i}' for i in range(cfg.n_T)])
    print_log(
        f'synth: {cfg.n_S} source / {cfg.n_T} target instances, '
        f'multi-label rate {source.multilabel_rate():.3f} / '
        f'{target.multilabel_rate():.3f}',
        logger=logger)
    return SynthDataset(table, source, target, cfg)
