"""Hot kernels with a numba path and a pure-numpy fallback.

Set ``SLICEFT_DISABLE_JIT=1`` before import to force the numpy path.  The two
paths agree to rounding; each is deterministic for a fixed input.
"""
import os

import numpy as np

_DISABLED = os.environ.get("SLICEFT_DISABLE_JIT", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError
    import numba
    from numba import njit, prange

    # the bundled TBB is too old; avoid the warning and use the portable layer
    numba.config.THREADING_LAYER = "workqueue"
    HAVE_NUMBA = True
except ImportError:
    numba = None
    HAVE_NUMBA = False


def backend():
    return "numba" if HAVE_NUMBA else "numpy"


def set_threads(n):
    """Set the kernel parallelism degree (no-op on the numpy path)."""
    if HAVE_NUMBA and n:
        numba.set_num_threads(max(1, min(int(n), numba.config.NUMBA_NUM_THREADS)))


# ---------------------------------------------------------------------------
# batched geometric product: C[k] = A[k] * B[k] for k over rows
# ---------------------------------------------------------------------------

def _gp_rows_numpy(A, B, idx, sign):
    M, nb = A.shape
    C = np.zeros((M, nb), dtype=np.complex128)
    for i in range(nb):
        # j -> i ^ j is a permutation of blades, so a fancy-index add is safe
        C[:, idx[i]] += (sign[i] * A[:, i:i + 1]) * B
    return C


if HAVE_NUMBA:

    @njit(parallel=True, cache=True)
    def _gp_rows_jit(A, B, idx, sign):
        M, nb = A.shape
        C = np.zeros((M, nb), dtype=np.complex128)
        for k in prange(M):
            for i in range(nb):
                a = A[k, i]
                if a == 0:
                    continue
                for j in range(nb):
                    C[k, idx[i, j]] += sign[i, j] * a * B[k, j]
        return C

    @njit(parallel=True, cache=True)
    def _translate_conv_jit(F1, F2, SF1, SF2, G1, G2, w0, wr, h0, hr, idx, sign):
        """Quadrature of T_y(f)(x) g(y) over the y-grid, analytic in eta.

        F1/SF1 are even extensions (f1, S f1), F2/SF2 odd extensions (f2, S f2),
        laid out over r-index q + Nr for q in [-Nr, Nr).  For every output node
        and every y node the shifted values are read directly.
        """
        N0 = G1.shape[0]
        Nr = G1.shape[1]
        nb = G1.shape[2]
        half = N0 // 2
        out1 = np.zeros((N0, Nr, nb), dtype=np.complex128)
        out2 = np.zeros((N0, Nr, nb), dtype=np.complex128)
        for n in prange(N0):
            a1 = np.empty(nb, dtype=np.complex128)
            b1 = np.empty(nb, dtype=np.complex128)
            a2 = np.empty(nb, dtype=np.complex128)
            b2 = np.empty(nb, dtype=np.complex128)
            for q in range(Nr):
                acc1 = np.zeros(nb, dtype=np.complex128)
                acc2 = np.zeros(nb, dtype=np.complex128)
                for p in range(N0):
                    nz = n - p + half
                    if nz < 0 or nz >= N0:
                        continue
                    for s in range(Nr):
                        w = w0 * wr[s]
                        qm = q - s + Nr
                        qp = q + s + Nr
                        inp = qp < 2 * Nr
                        for b in range(nb):
                            # r - g and r + g arguments; r - g >= -R always holds
                            e1m = F1[nz, qm, b]
                            o2m = F2[nz, qm, b]
                            s2m = SF2[nz, qm, b]
                            s1m = SF1[nz, qm, b]
                            if inp:
                                e1p = F1[nz, qp, b]
                                o2p = F2[nz, qp, b]
                                s2p = SF2[nz, qp, b]
                                s1p = SF1[nz, qp, b]
                            else:
                                e1p = 0j
                                o2p = 0j
                                s2p = 0j
                                s1p = 0j
                            a1[b] = e1m + e1p
                            b1[b] = s2p - s2m
                            a2[b] = o2m + o2p
                            b2[b] = s1m - s1p
                        for i in range(nb):
                            for j in range(nb):
                                sg = sign[i, j] * w
                                t = idx[i, j]
                                acc1[t] += sg * (a1[i] * G1[p, s, j] - b1[i] * G2[p, s, j])
                                acc2[t] += sg * (a2[i] * G1[p, s, j] - b2[i] * G2[p, s, j])
                for b in range(nb):
                    out1[n, q, b] = acc1[b] * h0 * hr
                    out2[n, q, b] = acc2[b] * h0 * hr
        return out1, out2

    gp_rows = _gp_rows_jit
else:
    gp_rows = _gp_rows_numpy
    _translate_conv_jit = None


def translate_conv(F1, F2, SF1, SF2, G1, G2, w0, wr, h0, hr, idx, sign):
    if HAVE_NUMBA:
        return _translate_conv_jit(F1, F2, SF1, SF2, G1, G2, w0, wr, h0, hr, idx, sign)
    return _translate_conv_numpy(F1, F2, SF1, SF2, G1, G2, w0, wr, h0, hr, idx, sign)


def _translate_conv_numpy(F1, F2, SF1, SF2, G1, G2, w0, wr, h0, hr, idx, sign):
    # vectorised over output nodes; loops over the y-grid in the same order
    N0, Nr, nb = G1.shape
    half = N0 // 2
    out1 = np.zeros((N0, Nr, nb), dtype=np.complex128)
    out2 = np.zeros((N0, Nr, nb), dtype=np.complex128)
    zpad = np.zeros((N0, Nr, nb), dtype=np.complex128)
    ext = [np.concatenate([A, zpad], axis=1) for A in (F1, F2, SF1, SF2)]
    q = np.arange(Nr)
    for p in range(N0):
        # x0 - y0 index; rows that fall off the grid contribute zero
        nz = np.arange(N0) - p + half
        valid = (nz >= 0) & (nz < N0)
        nzc = np.clip(nz, 0, N0 - 1)
        for s in range(Nr):
            w = w0 * wr[s]
            qm = q - s + Nr
            qp = q + s + Nr
            e1m, o2m, s1m, s2m = (A[nzc][:, qm] for A in (ext[0], ext[1], ext[2], ext[3]))
            e1p, o2p, s1p, s2p = (A[nzc][:, qp] for A in (ext[0], ext[1], ext[2], ext[3]))
            a1 = e1m + e1p
            b1 = s2p - s2m
            a2 = o2m + o2p
            b2 = s1m - s1p
            g1 = G1[p, s]
            g2 = G2[p, s]
            t1 = np.zeros((N0, Nr, nb), dtype=np.complex128)
            t2 = np.zeros((N0, Nr, nb), dtype=np.complex128)
            for i in range(nb):
                t1[..., idx[i]] += sign[i] * (a1[..., i:i + 1] * g1 - b1[..., i:i + 1] * g2)
                t2[..., idx[i]] += sign[i] * (a2[..., i:i + 1] * g1 - b2[..., i:i + 1] * g2)
            t1[~valid] = 0
            t2[~valid] = 0
            out1 += w * t1
            out2 += w * t2
    return out1 * h0 * hr, out2 * h0 * hr
