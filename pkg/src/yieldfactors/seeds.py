"""Deterministic seed derivation for nested stochastic pipelines."""

import numpy as np


def derive_seed(base, *path):
    """Derive a child seed from a base seed and an integer index path.

    Distinct paths yield statistically independent random streams, and the
    mapping is stable across processes and platforms.  Used to give every
    NMF run, k-means run, alignment step and repetition its own stream
    while the whole pipeline stays reproducible from one base seed.
    """
    entries = [int(base)] + [int(p) for p in path]
    seq = np.random.SeedSequence(entries)
    return int(seq.generate_state(1, np.uint64)[0])
