"""Pure-numpy fallback for the hot solver kernels.

Mirrors the compiled extension's arithmetic term-for-term: sums over angles
accumulate sequentially by index, and cost terms accumulate order-by-order in
the given order, so both backends agree to within the rounding of the cosine
implementations.
"""

from __future__ import annotations

import numpy as np


def harmonic_sums(
    thetas: np.ndarray, signs: np.ndarray, orders: np.ndarray
) -> np.ndarray:
    """sum_i signs[i]*cos(orders[q]*thetas[p, i]) for every row p and order q.

    thetas: (P, K) angle matrix (any order, no sorting applied here).
    Returns a (P, len(orders)) array.
    """
    thetas = np.atleast_2d(np.asarray(thetas, dtype=np.float64))
    signs = np.asarray(signs, dtype=np.float64)
    orders = np.asarray(orders, dtype=np.int64)
    p, k = thetas.shape
    out = np.zeros((p, orders.size))
    for q, n in enumerate(orders):
        acc = out[:, q]
        for i in range(k):
            acc += signs[i] * np.cos(n * thetas[:, i])
    return out


def she_cost_batch(
    thetas: np.ndarray,
    signs: np.ndarray,
    orders: np.ndarray,
    target_m: float,
    weight_fund: float,
    weight_harm: float,
    cells: int,
) -> np.ndarray:
    """Elimination cost for a batch of raw angle vectors.

    Each row is sort-repaired (ascending) before evaluation. All harmonic
    terms are computed per-unit of the DC base s*V_dc, so the cost does not
    depend on the absolute DC voltage:

        cost = weight_fund * |target_m - |V1_pu||
             + sum_n weight_harm/n * |Vn_pu|      over the elimination orders

    with Vn_pu = 4/(n*pi*cells) * sum_i signs[i]*cos(n*theta_i).
    """
    thetas = np.atleast_2d(np.asarray(thetas, dtype=np.float64))
    signs = np.asarray(signs, dtype=np.float64)
    orders = np.asarray(orders, dtype=np.int64)
    srt = np.sort(thetas, axis=1)
    p, k = srt.shape
    scale = 4.0 / (np.pi * cells)

    acc = np.zeros(p)
    for i in range(k):
        acc += signs[i] * np.cos(srt[:, i])
    cost = weight_fund * np.abs(target_m - np.abs(scale * acc))
    for n in orders:
        acc = np.zeros(p)
        for i in range(k):
            acc += signs[i] * np.cos(n * srt[:, i])
        cost += (weight_harm / n) * np.abs(scale / n * acc)
    return cost
