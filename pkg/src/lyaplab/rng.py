"""Reproducible splittable random streams.

Every stochastic routine in the package derives its generator from a
(seed, subsystem, member) triple through a counter-based Philox stream,
so ensemble members can be evaluated in any order (or in parallel)
without perturbing results.
"""

import numpy as np

# Subsystem ids.  Never reuse or renumber: stream identity is part of the
# reproducibility contract.
POTENTIAL = 1
LYAPUNOV = 2
DOS = 3
GREEN = 4
MC_BOUNDS = 5


def rng_for(seed, subsystem, member=0):
    """Independent Generator for one (seed, subsystem, member) triple."""
    ss = np.random.SeedSequence(entropy=int(seed),
                                spawn_key=(int(subsystem), int(member)))
    return np.random.Generator(np.random.Philox(ss))


def derive_seed(seed, subsystem, member=0):
    """Stable 64-bit child seed, for APIs that take a plain integer seed."""
    ss = np.random.SeedSequence(entropy=int(seed),
                                spawn_key=(int(subsystem), int(member)))
    return int(ss.generate_state(1, dtype=np.uint64)[0])
