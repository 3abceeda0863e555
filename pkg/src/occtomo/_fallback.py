"""Pure numpy versions of the kernels in ``_core.pyx``."""
import numpy as np

# cap on the number of kernel entries materialised at once
_BLOCK = 1 << 21


def gauss_sum(points, centers, weights, mu):
    """out[p, c] = sum_q weights[q, c] * exp(-mu * |points[p] - centers[q]|^2)."""
    points = np.ascontiguousarray(points, dtype=float)
    centers = np.ascontiguousarray(centers, dtype=float)
    weights = np.ascontiguousarray(weights, dtype=float)
    if weights.shape[0] != centers.shape[0]:
        raise ValueError("weights must have one row per center")
    out = np.zeros((points.shape[0], weights.shape[1]))
    step = max(1, _BLOCK // max(1, centers.shape[0]))
    for lo in range(0, points.shape[0], step):
        diff = points[lo:lo + step, None, :] - centers[None, :, :]
        sq = diff[..., 0] ** 2 + diff[..., 1] ** 2
        out[lo:lo + step] = np.exp(-mu * sq) @ weights
    return out


def _pair(a_pts, a_wts, b, wb, mu):
    # a_pts: (S, 2) nodes of one trajectory; b: (Mb, T, 2) -> (Mb,)
    # Each entry is summed on its own so its value does not depend on the
    # other trajectories in the batch.
    nt = b.shape[1]
    step = max(1, _BLOCK // max(1, nt))
    total = np.zeros(b.shape[0])
    for j in range(b.shape[0]):
        for lo in range(0, a_pts.shape[0], step):
            diff = a_pts[lo:lo + step, None, :] - b[j][None, :, :]
            sq = diff[..., 0] ** 2 + diff[..., 1] ** 2
            total[j] += a_wts[lo:lo + step] @ (np.exp(-mu * sq) @ wb[j])
    return total


def occupation_gram(a, wa, b, wb, mu, symmetric=False):
    """out[i, j] = sum_s sum_t wa[i, s] wb[j, t] exp(-mu |a[i, s] - b[j, t]|^2)."""
    a = np.ascontiguousarray(a, dtype=float)
    b = np.ascontiguousarray(b, dtype=float)
    wa = np.ascontiguousarray(wa, dtype=float)
    wb = np.ascontiguousarray(wb, dtype=float)
    out = np.empty((a.shape[0], b.shape[0]))
    for i in range(a.shape[0]):
        if symmetric:
            out[i, i:] = _pair(a[i], wa[i], b[i:], wb[i:], mu)
            out[i:, i] = out[i, i:]
        else:
            out[i, :] = _pair(a[i], wa[i], b, wb, mu)
    return out
