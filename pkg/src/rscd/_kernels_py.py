"""Pure-numpy implementations of the hot kernels (fallback for the Cython build)."""

import numpy as np


def coeff_products(X, masks, alpha, g):
    """Sine-ratio products ``prod_{j in J, k not in J} sin(a/2 (x_j-x_k+g)) / sin(a/2 (x_j-x_k))``.

    Parameters
    ----------
    X : (N, n) float array of points.
    masks : (K, n) int8 array, ``masks[k, j] = 1`` iff ``j`` belongs to index set ``J_k``.
    alpha, g : float

    Returns
    -------
    values : (N, K) float array
    min_den : (N, K) float array, smallest ``|sin|`` among the denominator factors
        (``inf`` when J is empty or full).
    """
    X = np.ascontiguousarray(X, dtype=float)
    masks = np.asarray(masks, dtype=bool)
    half = 0.5 * alpha
    diff = X[:, :, None] - X[:, None, :]
    num = np.sin(half * (diff + g))
    den = np.sin(half * diff)
    N, K = X.shape[0], masks.shape[0]
    values = np.empty((N, K))
    min_den = np.empty((N, K))
    for k in range(K):
        inside = masks[k]
        outside = ~inside
        if not inside.any() or not outside.any():
            values[:, k] = 1.0
            min_den[:, k] = np.inf
            continue
        sel = np.ix_(np.arange(N), inside.nonzero()[0], outside.nonzero()[0])
        d = den[sel].reshape(N, -1)
        values[:, k] = np.prod(num[sel].reshape(N, -1), axis=1) / np.prod(d, axis=1)
        min_den[:, k] = np.min(np.abs(d), axis=1)
    return values, min_den


def grouped_exp_sums(X, W, offsets, alpha):
    """``out[s, g] = sum_{l in group g} exp(i alpha <W_l, X_s>)``.

    Group ``g`` is the row range ``offsets[g]:offsets[g+1]`` of ``W``.
    """
    X = np.asarray(X, dtype=float)
    W = np.asarray(W, dtype=float)
    offsets = np.asarray(offsets, dtype=np.intp)
    phases = np.exp(1j * alpha * (X @ W.T))
    csum = np.concatenate([np.zeros((X.shape[0], 1), complex), np.cumsum(phases, axis=1)], axis=1)
    return csum[:, offsets[1:]] - csum[:, offsets[:-1]]
