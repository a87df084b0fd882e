"""Reproducible random streams keyed by (master seed, stream index)."""
import numpy as np


def stream_rng(master_seed, index, tag=0):
    """Independent generator for stream ``index`` of ``master_seed``.

    Streams are derived with :class:`numpy.random.SeedSequence` spawn keys, so
    the draws of one stream never depend on how many other streams exist or in
    which order they are consumed. ``tag`` separates unrelated consumers that
    share a master seed.
    """
    seq = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(tag), int(index)))
    return np.random.Generator(np.random.PCG64(seq))


def as_generator(rng):
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)
