"""Pure numpy implementations of the hot kernels (fallback backend)."""
import numpy as np

FAMILY_CODES = {"pareto": 0, "pareto_second_order": 1, "log_perturbed": 2}


def hermite_table(x, M):
    x = np.asarray(x, dtype=float)
    out = np.empty((x.shape[0], M + 1))
    out[:, 0] = 1.0
    if M >= 1:
        out[:, 1] = x
    for j in range(1, M):
        out[:, j + 1] = x * out[:, j] - j * out[:, j - 1]
    return out


def count_exceedances(y, thresholds):
    """``#{j: y_j > t_i}`` for ascending thresholds ``t``; ``y`` unsorted."""
    y = np.asarray(y, dtype=float)
    t = np.asarray(thresholds, dtype=float)
    # number of thresholds strictly below each y_j
    below = np.searchsorted(t, y, side="left")
    hist = np.bincount(below, minlength=len(t) + 1)
    return np.cumsum(hist[::-1])[::-1][1:].astype(np.int64)


def hill_curve(y_desc, kmax):
    """Hill estimates for k = 1..kmax from values sorted in decreasing order."""
    y_desc = np.asarray(y_desc, dtype=float)
    logs = np.log(y_desc[: kmax + 1])
    k = np.arange(1, kmax + 1)
    return np.cumsum(logs[:kmax]) / k - logs[1: kmax + 1]


def conditional_exceedance_sums(x, tau, levels, alpha, c, beta, family, z0):
    """``sum_j P(Z > level_i exp(-tau x_j))`` for each level."""
    x = np.asarray(x, dtype=float)
    levels = np.asarray(levels, dtype=float)
    z = levels[:, None] * np.exp(-tau * x)[None, :]
    zc = np.maximum(z, z0)
    if family == 0:
        raw = c * zc ** (-alpha)
    elif family == 1:
        raw = c * zc ** (-alpha) * (1.0 + zc ** (-alpha * beta)) * 0.5
    else:
        raw = c * zc ** (-alpha) * np.log(zc)
    p = np.where(z <= z0, 1.0, np.minimum(raw, 1.0))
    return p.sum(axis=1)
