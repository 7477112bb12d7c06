"""Dense complex linear algebra shared by every other module.

A ``ComplexMatrix`` is a two-dimensional ``numpy.ndarray`` of dtype
``complex128``; vectors are one-dimensional arrays of the same dtype.
"""
import logging
from typing import Tuple

import numpy as np
import scipy.linalg

from mmhybrid.exceptions import DimensionMismatch, NonFiniteError

logger = logging.getLogger(__name__)

ComplexMatrix = np.ndarray


def as_complex_matrix(a) -> ComplexMatrix:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2:
        raise DimensionMismatch("Expected a matrix, got shape %r" % (a.shape,))
    return a


def hermitian(a) -> ComplexMatrix:
    return np.conj(as_complex_matrix(a)).T


def matmul(a, b) -> ComplexMatrix:
    a = as_complex_matrix(a)
    b = as_complex_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(
            "Cannot multiply %dx%d by %dx%d" % (a.shape + b.shape)
        )
    return a @ b


def svd(a) -> Tuple[ComplexMatrix, np.ndarray, ComplexMatrix]:
    """Economy-size SVD with ``a = U @ diag(S) @ V^H``.

    Returns ``V`` (not ``V^H``); singular values are sorted descending. The
    per-column phase of the singular vectors is whatever LAPACK returns.
    """
    a = as_complex_matrix(a)
    if not np.all(np.isfinite(a)):
        raise NonFiniteError("SVD input contains NaN or Inf")
    try:
        u, s, vh = scipy.linalg.svd(a, full_matrices=False, check_finite=False)
    except np.linalg.LinAlgError:
        # gesdd occasionally fails to converge on nearly rank-deficient input
        logger.warning("gesdd did not converge on a %dx%d matrix, retrying with gesvd", *a.shape)
        u, s, vh = scipy.linalg.svd(
            a, full_matrices=False, check_finite=False, lapack_driver="gesvd"
        )
    return u, s, np.conj(vh).T


def frobenius_norm(a) -> float:
    return float(np.linalg.norm(as_complex_matrix(a), "fro"))


def is_orthonormal(columns, tol=1e-10) -> bool:
    columns = as_complex_matrix(columns)
    gram = hermitian(columns) @ columns
    return bool(np.max(np.abs(gram - np.eye(gram.shape[0])), initial=0.0) <= tol)
