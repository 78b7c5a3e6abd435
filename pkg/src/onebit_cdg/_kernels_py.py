"""Pure numpy implementations of the solver kernels.

Same contracts as the compiled ``_kernels`` module; used when the extension
is not built or when ``ONEBIT_CDG_BACKEND=python``.
"""
import numpy as np


def hard_threshold(v, k):
    # stable sort on -|v| keeps the lower index among equal magnitudes
    keep = np.argsort(-np.abs(v), kind="stable")[:k]
    out = np.zeros_like(v)
    out[keep] = v[keep]
    return out


def hamming(a, s, b):
    return int(np.count_nonzero(np.where(a @ s >= 0, 1, -1) != b))


def biht_loop(a, b, k, max_iters, tau):
    """Run BIHT iterations from the zero vector.

    Returns ``(best, best_hamming, iterations)`` where ``best`` is the
    unnormalized iterate with the fewest sign disagreements; later iterates
    win ties.  The zero start carries no sign information, so the first
    update uses the raw measurements ``b`` as its residual.
    """
    m, n = a.shape
    bf = b.astype(float)
    s = np.zeros(n)
    best = s.copy()
    best_h = int(np.count_nonzero(b < 0))
    step = 0.5 * tau * (a.T @ bf)
    iterations = 0
    for _ in range(max_iters):
        s_new = hard_threshold(s + step, k)
        iterations += 1
        supp = np.flatnonzero(s_new)
        y = a[:, supp] @ s_new[supp]
        viol = np.flatnonzero(np.where(y >= 0, 1, -1) != b)
        h = viol.size
        if h <= best_h:
            best, best_h = s_new, h
        if h == 0 or np.array_equal(s_new, s):
            break
        s = s_new
        # (tau/2) * A^T (b - sign(As)) only has terms on violated rows, each 2*b_i
        step = tau * (bf[viol] @ a[viol])
    return best, best_h, iterations
