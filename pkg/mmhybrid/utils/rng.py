import numpy as np


def trial_seed_sequence(base_seed, sweep_index, trial_index):
    """Seed sequence of one (sweep point, trial) work item.

    The mixing is numpy's ``SeedSequence`` hash with the indices as spawn
    key, so the stream of a trial does not depend on which worker runs it.
    """
    return np.random.SeedSequence(
        entropy=int(base_seed), spawn_key=(int(sweep_index), int(trial_index))
    )


def trial_stream(base_seed, sweep_index, trial_index):
    return np.random.Generator(
        np.random.PCG64(trial_seed_sequence(base_seed, sweep_index, trial_index))
    )


def seeded_stream(seed):
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))
