"""Named, deterministic random streams derived from a single 64-bit seed.

Every stochastic stage of the pipeline owns a stream id, so reordering or
parallelizing one stage can never perturb the randomness of another.
"""

import numpy as np

STREAM_SYNTH = 0
STREAM_SHUFFLE = 1
# Reserved for a randomized solver schedule. The SMO solver is fully
# deterministic (greedy working-pair selection) and currently draws nothing.
STREAM_SOLVER = 2


def stream(seed: int, stream_id: int, *subkeys: int) -> np.random.Generator:
    """Return an independent PCG64 generator for (seed, stream, subkeys...)."""
    key = (int(stream_id),) + tuple(int(k) for k in subkeys)
    return np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=key))
