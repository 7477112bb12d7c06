"""Beamsteering codebooks: array responses at 2^B uniformly quantized angles."""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from mmhybrid.channel import ArrayConfig, steering_from_sine
from mmhybrid.constants import DEFAULT_TOLERANCES
from mmhybrid.constants.defaults import TWO_PI
from mmhybrid.exceptions import BitsOutOfRange

logger = logging.getLogger(__name__)

MIN_BITS = 1
MAX_BITS = 16


def grid_sines(bits):
    """``sin(2 pi i / 2^bits)`` for ``i = 1..2^bits``.

    Every index is first folded into the first quadrant, so angles that
    alias under ``theta -> pi - theta`` get bit-identical sines.

    >>> grid_sines(1).tolist()
    [0.0, 0.0]
    >>> grid_sines(2).tolist()
    [1.0, 0.0, -1.0, 0.0]
    """
    size = 2 ** bits
    half = size // 2
    k = np.arange(1, size + 1) % size
    sign = np.where(k >= half, -1.0, 1.0)
    k = np.where(k >= half, k - half, k)
    k = np.where(4 * k > size, half - k, k)
    return sign * np.sin(TWO_PI * k / size) + 0.0


@dataclass(frozen=True)
class Codebook:
    bits: int
    array: ArrayConfig
    angles: np.ndarray
    # one codeword per column, N x len(angles)
    vectors: np.ndarray
    # position of each codeword on the full 2^bits grid
    grid_indices: np.ndarray

    def __len__(self):
        return self.vectors.shape[1]

    def __getitem__(self, index):
        return self.vectors[:, index]

    @property
    def n_elements(self):
        return self.array.n_elements

    @property
    def is_deduped(self):
        return len(self) != 2 ** self.bits

    @cached_property
    def beam_classes(self) -> np.ndarray:
        """Equivalence class id of every codeword (first occurrence wins)."""
        return _beam_classes(self.vectors, DEFAULT_TOLERANCES.duplicate_beam)

    def dedupe(self) -> "Codebook":
        classes = self.beam_classes
        keep = np.flatnonzero(classes == np.arange(len(classes)))
        return Codebook(
            bits=self.bits,
            array=self.array,
            angles=self.angles[keep],
            vectors=self.vectors[:, keep],
            grid_indices=self.grid_indices[keep],
        )


def _beam_classes(vectors, tol):
    """Class id of every steering codeword: the index of its first duplicate.

    A steering vector is fixed by its phase step between adjacent elements,
    so codewords are grouped by sorting that step on the unit circle.
    Steps closer than the vector tolerance allows fall in one class.
    """
    n_elements, n = vectors.shape
    if n_elements < 2 or n == 0:
        return np.zeros(n, dtype=np.int64)
    steps = np.mod(np.angle(vectors[1] * np.conj(vectors[0])) / TWO_PI, 1.0)
    # max_k |exp(2 pi i k a) - exp(2 pi i k b)| / sqrt(N) ~ 2 pi (N - 1) |a - b| / sqrt(N)
    step_tol = tol * np.sqrt(n_elements) / (TWO_PI * (n_elements - 1))
    order = np.argsort(steps, kind="stable")
    sorted_steps = steps[order]
    groups = np.concatenate(([0], np.cumsum(np.diff(sorted_steps) > step_tol)))
    n_groups = groups[-1] + 1
    if n_groups > 1 and 1.0 - sorted_steps[-1] + sorted_steps[0] <= step_tol:
        # steps just below one cycle wrap onto steps near zero
        groups[groups == groups[-1]] = 0
    first = np.full(n_groups, n, dtype=np.int64)
    np.minimum.at(first, groups, order)
    classes = np.empty(n, dtype=np.int64)
    classes[order] = first[groups]
    return classes


def build_beamsteering_codebook(bits, cfg: ArrayConfig, dedupe=False) -> Codebook:
    if not MIN_BITS <= bits <= MAX_BITS:
        raise BitsOutOfRange(
            "Codebook bits must lie in [%d, %d], got %r" % (MIN_BITS, MAX_BITS, bits)
        )
    size = 2 ** bits
    grid = np.arange(1, size + 1)
    codebook = Codebook(
        bits=bits,
        array=cfg,
        angles=TWO_PI * grid / size,
        vectors=steering_from_sine(cfg, grid_sines(bits)),
        grid_indices=grid - 1,
    )
    if dedupe:
        codebook = codebook.dedupe()
        logger.debug(
            "Deduped %d-bit codebook for %d elements to %d beams",
            bits, cfg.n_elements, len(codebook),
        )
    return codebook


def distinct_beam_count(cb: Codebook, tol: Optional[float] = None) -> int:
    tol = DEFAULT_TOLERANCES.duplicate_beam if tol is None else tol
    classes = _beam_classes(cb.vectors, tol)
    return int(np.count_nonzero(classes == np.arange(len(classes))))
