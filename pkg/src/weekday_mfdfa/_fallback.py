"""Pure numpy/Python versions of the compiled kernels."""

import numpy as np


def segment_variances(profile, n, basis, dual_pass):
    size = profile.shape[0]
    n_seg = size // n
    segs = profile[: n_seg * n].reshape(n_seg, n)
    if dual_pass:
        tail = profile[size - n_seg * n:].reshape(n_seg, n)[::-1]
        segs = np.concatenate([segs, tail])
    segs = segs - segs.mean(axis=1, keepdims=True)
    coef = segs @ basis
    resid = segs - coef @ basis.T
    return np.einsum("ij,ij->i", resid, resid) / n


def apply_transpositions(values, first, second):
    # Sequential by construction: later swaps see earlier ones.
    buf = values.tolist()
    for i, j in zip(first.tolist(), second.tolist()):
        buf[i], buf[j] = buf[j], buf[i]
    values[:] = buf
