"""Pure-numpy gate kernels, API-compatible with the compiled core."""

import numpy as np


def apply_single(amps, q, gate):
    """Multiply the amplitude pairs split by bit q with a 2x2 gate."""
    stride = 1 << q
    v = amps.reshape(-1, 2, stride)
    lo = v[:, 0, :].copy()
    hi = v[:, 1, :]
    v[:, 0, :] = gate[0, 0] * lo + gate[0, 1] * hi
    v[:, 1, :] = gate[1, 0] * lo + gate[1, 1] * hi


def apply_pair(amps, q, gate4):
    """Multiply amplitude quads split by bits (q+1, q) with a 4x4 gate."""
    stride = 1 << q
    v = amps.reshape(-1, 4, stride)
    v[...] = np.einsum("ij,ajs->ais", gate4, v)
