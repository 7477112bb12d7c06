"""Codebook-based hybrid precoder/combiner designs.

``joint_design`` picks the analog precoder/combiner pair of each stream
successively, deflating the channel by the directions already used, then
diagonalizes the effective baseband channel with an SVD. The other designs
are comparison points: greedy selection without deflation, the unconstrained
full-digital SVD and an exhaustive search over small codebooks.
"""
import logging
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Tuple

import numpy as np

from mmhybrid.codebook import Codebook
from mmhybrid.constants import DEFAULT_TOLERANCES
from mmhybrid.exceptions import (
    TRIAL_SKIP_ERRORS,
    DegenerateChannel,
    DimensionMismatch,
    InstanceTooLarge,
    RankDeficient,
    SpanCollapse,
)
from mmhybrid.linalg import as_complex_matrix, frobenius_norm, hermitian, svd
from mmhybrid.metrics import LinkBudget, per_stream_sinr, sum_rate

logger = logging.getLogger(__name__)

MAX_EXHAUSTIVE_CANDIDATES = 10 ** 6


@dataclass(frozen=True)
class HybridDesign:
    f_rf: np.ndarray
    f_bb: np.ndarray
    w_rf: np.ndarray
    w_bb: np.ndarray
    tx_indices: Tuple[int, ...]
    rx_indices: Tuple[int, ...]
    # orthonormal bases of the selected beams, one vector per column
    p_basis: np.ndarray
    q_basis: np.ndarray
    # singular values of W_RF^H H F_RF, descending
    effective_singular_values: np.ndarray

    @property
    def n_streams(self):
        return self.f_bb.shape[1]

    @property
    def precoder(self):
        return self.f_rf @ self.f_bb

    @property
    def combiner(self):
        return self.w_rf @ self.w_bb


@dataclass(frozen=True)
class FullDigitalDesign:
    f: np.ndarray
    w: np.ndarray

    @property
    def n_streams(self):
        return self.f.shape[1]

    @property
    def precoder(self):
        return self.f

    @property
    def combiner(self):
        return self.w


def _check_codebooks(h, f_cb: Codebook, w_cb: Codebook):
    if h.shape != (w_cb.n_elements, f_cb.n_elements):
        raise DimensionMismatch(
            "Channel %r does not match codebooks for %d tx / %d rx elements"
            % (h.shape, f_cb.n_elements, w_cb.n_elements)
        )


def _check_streams(h, n_streams):
    if not 1 <= n_streams <= min(h.shape):
        raise DimensionMismatch(
            "Stream count must lie in [1, %d], got %r" % (min(h.shape), n_streams)
        )


def _min_gain(h, tol):
    return tol.degenerate_gain * max(1.0, frobenius_norm(h))


def beam_gains(h, f_cb: Codebook, w_cb: Codebook) -> np.ndarray:
    """|w^H H f| for every (combiner, precoder) codeword pair, |W| x |F|."""
    return np.abs(hermitian(w_cb.vectors) @ h @ f_cb.vectors)


def _ranked_pairs(gains, min_gain):
    """Yield ``(w_idx, f_idx, gain)`` by decreasing gain down to ``min_gain``.

    Equal gains come out in row-major order, i.e. smallest (w_idx, f_idx)
    first. The full sort is only paid for when the caller asks past the
    maximum.
    """
    n_f = gains.shape[1]
    flat = gains.ravel()
    first = int(np.argmax(flat))
    if flat[first] < min_gain:
        return
    yield first // n_f, first % n_f, float(flat[first])
    for idx in np.argsort(-flat, kind="stable"):
        if flat[idx] < min_gain:
            return
        if idx != first:
            yield int(idx) // n_f, int(idx) % n_f, float(flat[idx])


def select_pair(h_tilde, f_cb: Codebook, w_cb: Codebook, min_gain=None):
    """Codeword pair maximizing |w^H H f|, as ``(f_idx, w_idx, gain)``."""
    h_tilde = as_complex_matrix(h_tilde)
    _check_codebooks(h_tilde, f_cb, w_cb)
    min_gain = DEFAULT_TOLERANCES.degenerate_gain if min_gain is None else min_gain
    for w_idx, f_idx, gain in _ranked_pairs(beam_gains(h_tilde, f_cb, w_cb), min_gain):
        return f_idx, w_idx, gain
    raise DegenerateChannel("No codeword pair reaches gain %g" % min_gain)


def _as_basis(basis, size):
    if isinstance(basis, np.ndarray) and basis.ndim == 2:
        return basis
    if len(basis) == 0:
        return np.zeros((size, 0), dtype=np.complex128)
    return np.column_stack(basis)


def orthonormal_residual(v, basis, tol=None) -> np.ndarray:
    """Unit-norm part of ``v`` orthogonal to an orthonormal ``basis`` (Gram-Schmidt)."""
    tol = DEFAULT_TOLERANCES.span_collapse if tol is None else tol
    v = np.asarray(v, dtype=np.complex128).ravel()
    basis = _as_basis(basis, v.size)
    residual = v - basis @ (hermitian(basis) @ v)
    norm = np.linalg.norm(residual)
    if norm < tol:
        raise SpanCollapse("Residual norm %g is below %g" % (norm, tol))
    residual = residual / norm
    if basis.shape[1]:
        # second pass restores orthogonality lost to cancellation
        residual = residual - basis @ (hermitian(basis) @ residual)
        residual = residual / np.linalg.norm(residual)
    return residual


def deflate(h_tilde, p, q) -> np.ndarray:
    """(I - q q^H) H (I - p p^H) as two rank-one updates."""
    h_tilde = as_complex_matrix(h_tilde)
    p = np.asarray(p, dtype=np.complex128).ravel()
    q = np.asarray(q, dtype=np.complex128).ravel()
    out = h_tilde - np.outer(q, np.conj(q) @ h_tilde)
    return out - np.outer(out @ p, np.conj(p))


def _baseband_stage(h, f_rf, w_rf, n_streams):
    h_eff = hermitian(w_rf) @ h @ f_rf
    u, s, v = svd(h_eff)
    f_bb = v[:, :n_streams]
    w_bb = u[:, :n_streams]
    norm = frobenius_norm(f_rf @ f_bb)
    if norm == 0:
        raise DegenerateChannel("Hybrid precoder vanishes")
    return math.sqrt(n_streams) * f_bb / norm, w_bb, s[:n_streams]


def _orthonormal_bases(vectors, tol):
    basis = []
    for v in vectors.T:
        basis.append(orthonormal_residual(v, basis, tol))
    return np.column_stack(basis)


def _assemble(h, f_cb, w_cb, tx, rx, p_basis, q_basis):
    f_rf = f_cb.vectors[:, list(tx)]
    w_rf = w_cb.vectors[:, list(rx)]
    f_bb, w_bb, singular_values = _baseband_stage(h, f_rf, w_rf, len(tx))
    return HybridDesign(
        f_rf=f_rf,
        f_bb=f_bb,
        w_rf=w_rf,
        w_bb=w_bb,
        tx_indices=tuple(int(i) for i in tx),
        rx_indices=tuple(int(i) for i in rx),
        p_basis=p_basis,
        q_basis=q_basis,
        effective_singular_values=singular_values,
    )


def joint_design(h, f_cb: Codebook, w_cb: Codebook, n_streams, tol=DEFAULT_TOLERANCES):
    h = as_complex_matrix(h)
    _check_codebooks(h, f_cb, w_cb)
    _check_streams(h, n_streams)
    min_gain = _min_gain(h, tol)

    h_tilde = h
    tx, rx, p_basis, q_basis = [], [], [], []
    for k in range(n_streams):
        collapsed = 0
        for w_idx, f_idx, gain in _ranked_pairs(beam_gains(h_tilde, f_cb, w_cb), min_gain):
            if k == 0:
                p, q = f_cb[f_idx].copy(), w_cb[w_idx].copy()
                break
            try:
                p = orthonormal_residual(f_cb[f_idx], p_basis, tol.span_collapse)
                q = orthonormal_residual(w_cb[w_idx], q_basis, tol.span_collapse)
            except SpanCollapse:
                collapsed += 1
                continue
            break
        else:
            if collapsed:
                raise SpanCollapse(
                    "Every remaining beam pair for stream %d lies in the span of the "
                    "previous ones" % (k + 1)
                )
            raise DegenerateChannel("No channel energy left for stream %d" % (k + 1))
        if collapsed:
            logger.debug(
                "Stream %d: skipped %d collapsing beam pairs before (%d, %d)",
                k + 1, collapsed, f_idx, w_idx,
            )
        tx.append(f_idx)
        rx.append(w_idx)
        p_basis.append(p)
        q_basis.append(q)
        h_tilde = deflate(h_tilde, p, q)

    return _assemble(h, f_cb, w_cb, tx, rx, np.column_stack(p_basis), np.column_stack(q_basis))


def greedy_no_deflation(h, f_cb: Codebook, w_cb: Codebook, n_streams, tol=DEFAULT_TOLERANCES):
    """The ``n_streams`` strongest codeword pairs of H using distinct beams.

    Beams are distinct by equivalence class, so aliased duplicates of a
    chosen codeword are not picked again.
    """
    h = as_complex_matrix(h)
    _check_codebooks(h, f_cb, w_cb)
    _check_streams(h, n_streams)
    f_classes, w_classes = f_cb.beam_classes, w_cb.beam_classes

    tx, rx = [], []
    used_f, used_w = set(), set()
    for w_idx, f_idx, gain in _ranked_pairs(beam_gains(h, f_cb, w_cb), _min_gain(h, tol)):
        if f_classes[f_idx] in used_f or w_classes[w_idx] in used_w:
            continue
        used_f.add(f_classes[f_idx])
        used_w.add(w_classes[w_idx])
        tx.append(f_idx)
        rx.append(w_idx)
        if len(tx) == n_streams:
            break
    else:
        raise DegenerateChannel(
            "Only %d distinct beam pairs carry energy, %d streams requested"
            % (len(tx), n_streams)
        )

    p_basis = _orthonormal_bases(f_cb.vectors[:, tx], tol.span_collapse)
    q_basis = _orthonormal_bases(w_cb.vectors[:, rx], tol.span_collapse)
    return _assemble(h, f_cb, w_cb, tx, rx, p_basis, q_basis)


def full_digital_svd(h, n_streams, tol=DEFAULT_TOLERANCES) -> FullDigitalDesign:
    """Unconstrained SVD transceiver with equal power per stream."""
    h = as_complex_matrix(h)
    _check_streams(h, n_streams)
    u, s, v = svd(h)
    if s[n_streams - 1] <= tol.degenerate_gain * max(1.0, s[0]):
        raise RankDeficient(
            "Channel has fewer than %d significant singular values" % n_streams
        )
    v_ns = v[:, :n_streams]
    f = math.sqrt(n_streams) * v_ns / frobenius_norm(v_ns)
    return FullDigitalDesign(f=f, w=u[:, :n_streams])


def exhaustive_candidate_count(n_f, n_w, n_streams):
    return math.comb(n_f, n_streams) * math.comb(n_w, n_streams) * math.factorial(n_streams)


def exhaustive_joint_search(
    h, f_cb: Codebook, w_cb: Codebook, n_streams, power, noise_var, tol=DEFAULT_TOLERANCES
):
    """Sum-rate maximizing analog selection by enumeration, for tiny codebooks.

    Unordered codeword subsets are enough: the SVD baseband stage makes the
    sum-rate independent of how transmit and receive beams are paired.
    Subsets containing linearly dependent beams are skipped.
    """
    h = as_complex_matrix(h)
    _check_codebooks(h, f_cb, w_cb)
    _check_streams(h, n_streams)
    count = exhaustive_candidate_count(len(f_cb), len(w_cb), n_streams)
    if count > MAX_EXHAUSTIVE_CANDIDATES:
        raise InstanceTooLarge(
            "%d candidates exceed the limit of %d" % (count, MAX_EXHAUSTIVE_CANDIDATES)
        )
    budget = LinkBudget(power=power, noise_var=noise_var, n_streams=n_streams)

    q_bases = {}
    for rx in combinations(range(len(w_cb)), n_streams):
        try:
            q_bases[rx] = _orthonormal_bases(w_cb.vectors[:, rx], tol.span_collapse)
        except SpanCollapse:
            continue

    best, best_rate = None, -math.inf
    for tx in combinations(range(len(f_cb)), n_streams):
        try:
            p_basis = _orthonormal_bases(f_cb.vectors[:, tx], tol.span_collapse)
        except SpanCollapse:
            continue
        for rx, q_basis in q_bases.items():
            try:
                design = _assemble(h, f_cb, w_cb, tx, rx, p_basis, q_basis)
                rate = sum_rate(per_stream_sinr(h, design.precoder, design.combiner, budget, tol))
            except TRIAL_SKIP_ERRORS:
                continue
            if rate > best_rate:
                best, best_rate = design, rate
    if best is None:
        raise DegenerateChannel("No admissible analog selection")
    logger.debug("Exhaustive search over %d candidates: best sum-rate %.6f", count, best_rate)
    return best, best_rate
