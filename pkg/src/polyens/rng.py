"""Counter-based random streams.

All randomness in polyens flows through Philox (a counter-based generator),
keyed so that replica r of a run with seed s draws from an independent,
reproducible stream:

    stream(seed, r) == Generator(Philox(SeedSequence(entropy=seed, spawn_key=(r,))))

Splitting by spawn_key means results do not depend on how replicas are
batched across workers: replica 17 produces the same points whether it runs
first, last, or in a different process.
"""

import numpy as np

DEFAULT_SEED = 20230915


def stream(seed=DEFAULT_SEED, replica=0):
    """Independent Generator for the given (seed, replica) pair."""
    if seed is None:
        seed = DEFAULT_SEED
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(replica),))
    return np.random.Generator(np.random.Philox(ss))
