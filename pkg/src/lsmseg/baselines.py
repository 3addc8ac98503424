"""Random segmentation baseline.

Random segmentations draw ``k`` distinct positions uniformly from
``2..n``.  With ``k`` matched to LSM's boundary count for the same text
the comparison isolates placement from the number of boundaries.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass

import numpy as np

from .lsm import Segmentation

RNG_ALGORITHM = "numpy.PCG64/SeedSequence"


@dataclass(frozen=True)
class RandomTrialConfig:
    trials: int = 1000
    seed: int = 0
    # "match-lsm" or a fixed boundary count
    boundary_count: str | int = "match-lsm"

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.boundary_count != "match-lsm" and int(self.boundary_count) < 0:
            raise ValueError("fixed boundary count must be >= 0")

    def k_for(self, lsm_segmentation):
        if self.boundary_count == "match-lsm":
            return len(lsm_segmentation.boundaries)
        return int(self.boundary_count)


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _check_k(n, k):
    if not 0 <= k <= n - 1:
        raise ValueError(f"cannot place {k} boundaries in a {n}-sentence text (max {n - 1})")


def random_boundaries(n, k, rng):
    _check_k(n, k)
    picks = rng.permutation(n - 1)[:k] + 2
    return tuple(sorted(picks.tolist()))


def random_segmentation(n, k, seed, doc_id="doc", link_level=None):
    """``k`` boundaries sampled without replacement from ``2..n``."""
    rng = _rng(seed)
    params = {"k": k, "rng": RNG_ALGORITHM}
    if not isinstance(seed, np.random.Generator):
        params["seed"] = seed
    return Segmentation(doc_id, n, random_boundaries(n, k, rng), "random", link_level, params)


def doc_seed(seed, doc_id, level=0):
    """Seed material for one (document, level) stream, independent of run order."""
    return [int(seed) & 0xFFFFFFFFFFFFFFFF, zlib.crc32(doc_id.encode("utf-8")), int(level or 0)]


def trial_rngs(seed, trials):
    """One independent generator per trial index, derived from ``seed``."""
    for child in np.random.SeedSequence(seed).spawn(trials):
        yield np.random.default_rng(child)


def random_trial_scores(doc, reference, k, config, window=0, level=None):
    """Recall/precision of ``config.trials`` random segmentations of ``doc``.

    Returns a list of ``(recall, precision)``; either entry is ``None``
    when not applicable (no reference boundaries, no inserted boundaries).
    """
    from .evaluation import score

    seed = doc_seed(config.seed, doc.id, level)
    out = []
    for rng in trial_rngs(seed, config.trials):
        seg = Segmentation(doc.id, doc.n, random_boundaries(doc.n, k, rng), "random", level)
        rep = score(seg, reference, window)
        out.append((rep.recall, rep.precision))
    return out

