"""Brute-force references shared by the frontier tests and the acceptance suite."""

import itertools

import numpy as np


def kl_rows(d, p):
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(d > 0, d * np.log(d / p), 0.0).sum(axis=-1)


def constrained_grid(C, shifts, n_side):
    """Points of ``{d in simplex : d . shifts = C}`` from a dense 2-parameter grid.

    For every pair of coordinates the other two are gridded on ``[0, 1]^2`` and
    the pair is solved from normalisation and the work constraint, so every
    returned point satisfies both constraints exactly (up to round-off).  Six
    pairs times ``n_side**2`` points: ``n_side = 409`` gives about 10^6.
    """
    n = len(shifts)
    u = np.linspace(0.0, 1.0, n_side)
    A, B = np.meshgrid(u, u, indexing="ij")
    A, B = A.ravel(), B.ravel()
    out = []
    for i, j in itertools.combinations(range(n), 2):
        if shifts[i] == shifts[j]:
            continue
        k, l = [m for m in range(n) if m not in (i, j)]
        rest = 1.0 - A - B
        target = C - shifts[k] * A - shifts[l] * B
        # d_i + d_j = rest, shifts_i d_i + shifts_j d_j = target
        di = (target - shifts[j] * rest) / (shifts[i] - shifts[j])
        dj = rest - di
        d = np.zeros((len(A), n))
        d[:, i], d[:, j], d[:, k], d[:, l] = di, dj, A, B
        out.append(d[np.all(d >= -1e-12, axis=1)])
    return np.clip(np.concatenate(out), 0.0, None)


def grid_extremes(C, shifts, p, n_side=409, zoom=True):
    """Grid-search (min KL, max KL, min linear, max linear) at work ``C``."""
    d = constrained_grid(C, shifts, n_side)
    kl = kl_rows(d, p)
    lin = -(d @ np.log(p))
    best = [kl.min(), kl.max(), lin.min(), lin.max()]
    if zoom:
        # refine the KL minimum on a local random cloud inside the feasible set
        rng = np.random.default_rng(0)
        centre = d[np.argmin(kl)]
        for scale in (1e-2, 1e-3, 1e-4):
            steps = rng.normal(size=(20000, len(p))) * scale
            # project each step onto {sum = 0, . shifts = 0}
            basis = np.linalg.svd(np.vstack([np.ones(len(p)), shifts]))[2][2:]
            cand = centre + (steps @ basis.T) @ basis
            cand = cand[np.all(cand >= 0, axis=1)]
            if len(cand):
                vals = kl_rows(cand, p)
                if vals.min() < best[0]:
                    best[0] = vals.min()
                    centre = cand[np.argmin(vals)]
    return best
