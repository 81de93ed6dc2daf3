import numpy as np
import pytest

from d2drent import channel, config
from d2drent.config import Mode


@pytest.fixture
def default_cfg():
    return config.default_config()


def make_small_instance(rng: np.random.Generator, max_cues: int = 3,
                        max_dues: int = 4):
    """Random tiny scenario for greedy-vs-oracle comparisons."""
    m = int(rng.integers(1, max_cues + 1))
    n = int(rng.integers(0, max_dues + 1))
    cfg = config.config_from_mapping({"num_cue_m": m})
    topo = channel.place_topology(cfg, rng)
    topo = channel.add_d2d_pairs(topo, n, cfg, rng)
    gains = channel.sample_gains(topo, cfg, rng)
    modes = tuple(Mode(int(v)) for v in rng.integers(0, 2, m))
    return modes, gains, topo, cfg
