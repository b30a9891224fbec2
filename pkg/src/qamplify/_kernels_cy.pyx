# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled strided gate kernels. In-place, single complex128 buffer.

Real-entry gates (Hadamard, biased transform) take a fast path that views
the buffer as flat doubles: re/im transform identically, so the inner loops
are contiguous streams the compiler can vectorize. All updates touch
disjoint amplitudes, so the parallel loops are bit-deterministic regardless
of thread count.
"""

from cython.parallel import prange

import numpy as np

ctypedef double complex cplx

# chunk shift: contiguous runs are cut into 2^12-double chunks so long runs
# still spread across threads
DEF LCH = 12
# below this many buffer doubles the OpenMP fork costs more than it saves
DEF PAR_MIN = 16384


cdef inline void _single_r_chunk(double* d, Py_ssize_t base, Py_ssize_t span,
                                 Py_ssize_t csh, double g00, double g01,
                                 double g10, double g11) noexcept nogil:
    cdef Py_ssize_t j
    cdef double x, y
    for j in range(base, base + (<Py_ssize_t>1 << csh)):
        x = d[j]
        y = d[j + span]
        d[j] = g00 * x + g01 * y
        d[j + span] = g10 * x + g11 * y


cdef void _single_r(double* d, Py_ssize_t ndoubles, Py_ssize_t q,
                    double g00, double g01, double g10, double g11) noexcept nogil:
    # span = doubles per half-block; each task is one chunk of a low run
    # plus its partner in the high run
    cdef Py_ssize_t span = (<Py_ssize_t>1) << (q + 1)
    cdef Py_ssize_t csh = q + 1 if q + 1 < LCH else LCH
    cdef Py_ssize_t tshift = q + 1 - csh
    cdef Py_ssize_t tmask = ((<Py_ssize_t>1) << tshift) - 1
    cdef Py_ssize_t ntasks = ndoubles >> (csh + 1)
    cdef Py_ssize_t t, base
    if ndoubles >= PAR_MIN:
        for t in prange(ntasks, schedule="static"):
            base = ((t >> tshift) << (q + 2)) | ((t & tmask) << csh)
            _single_r_chunk(d, base, span, csh, g00, g01, g10, g11)
    else:
        for t in range(ntasks):
            base = ((t >> tshift) << (q + 2)) | ((t & tmask) << csh)
            _single_r_chunk(d, base, span, csh, g00, g01, g10, g11)


cdef inline void _pair_r_chunk(double* d, Py_ssize_t base, Py_ssize_t span,
                               Py_ssize_t csh, double* m) noexcept nogil:
    cdef Py_ssize_t j
    cdef double x0, x1, x2, x3
    for j in range(base, base + (<Py_ssize_t>1 << csh)):
        x0 = d[j]
        x1 = d[j + span]
        x2 = d[j + 2 * span]
        x3 = d[j + 3 * span]
        d[j] = m[0] * x0 + m[1] * x1 + m[2] * x2 + m[3] * x3
        d[j + span] = m[4] * x0 + m[5] * x1 + m[6] * x2 + m[7] * x3
        d[j + 2 * span] = m[8] * x0 + m[9] * x1 + m[10] * x2 + m[11] * x3
        d[j + 3 * span] = m[12] * x0 + m[13] * x1 + m[14] * x2 + m[15] * x3


cdef void _pair_r(double* d, Py_ssize_t ndoubles, Py_ssize_t q,
                  double* m) noexcept nogil:
    cdef Py_ssize_t span = (<Py_ssize_t>1) << (q + 1)
    cdef Py_ssize_t csh = q + 1 if q + 1 < LCH else LCH
    cdef Py_ssize_t tshift = q + 1 - csh
    cdef Py_ssize_t tmask = ((<Py_ssize_t>1) << tshift) - 1
    cdef Py_ssize_t ntasks = ndoubles >> (csh + 2)
    cdef Py_ssize_t t, base
    if ndoubles >= PAR_MIN:
        for t in prange(ntasks, schedule="static"):
            base = ((t >> tshift) << (q + 3)) | ((t & tmask) << csh)
            _pair_r_chunk(d, base, span, csh, m)
    else:
        for t in range(ntasks):
            base = ((t >> tshift) << (q + 3)) | ((t & tmask) << csh)
            _pair_r_chunk(d, base, span, csh, m)


cdef void _single_c(cplx* a, Py_ssize_t npairs, Py_ssize_t q,
                    cplx g00, cplx g01, cplx g10, cplx g11) noexcept nogil:
    cdef Py_ssize_t stride = (<Py_ssize_t>1) << q
    cdef Py_ssize_t mask = stride - 1
    cdef Py_ssize_t p, i0, i1
    cdef cplx x, y
    if npairs >= (PAR_MIN >> 1):
        for p in prange(npairs, schedule="static"):
            i0 = ((p >> q) << (q + 1)) | (p & mask)
            i1 = i0 + stride
            x = a[i0]
            y = a[i1]
            a[i0] = g00 * x + g01 * y
            a[i1] = g10 * x + g11 * y
    else:
        for p in range(npairs):
            i0 = ((p >> q) << (q + 1)) | (p & mask)
            i1 = i0 + stride
            x = a[i0]
            y = a[i1]
            a[i0] = g00 * x + g01 * y
            a[i1] = g10 * x + g11 * y


cdef void _pair_c(cplx* a, Py_ssize_t nquads, Py_ssize_t q,
                  cplx* m) noexcept nogil:
    cdef Py_ssize_t stride = (<Py_ssize_t>1) << q
    cdef Py_ssize_t mask = stride - 1
    cdef Py_ssize_t p, i0, i1, i2, i3
    cdef cplx x0, x1, x2, x3
    if nquads >= (PAR_MIN >> 2):
        for p in prange(nquads, schedule="static"):
            i0 = ((p >> q) << (q + 2)) | (p & mask)
            i1 = i0 + stride
            i2 = i1 + stride
            i3 = i2 + stride
            x0 = a[i0]
            x1 = a[i1]
            x2 = a[i2]
            x3 = a[i3]
            a[i0] = m[0] * x0 + m[1] * x1 + m[2] * x2 + m[3] * x3
            a[i1] = m[4] * x0 + m[5] * x1 + m[6] * x2 + m[7] * x3
            a[i2] = m[8] * x0 + m[9] * x1 + m[10] * x2 + m[11] * x3
            a[i3] = m[12] * x0 + m[13] * x1 + m[14] * x2 + m[15] * x3
    else:
        for p in range(nquads):
            i0 = ((p >> q) << (q + 2)) | (p & mask)
            i1 = i0 + stride
            i2 = i1 + stride
            i3 = i2 + stride
            x0 = a[i0]
            x1 = a[i1]
            x2 = a[i2]
            x3 = a[i3]
            a[i0] = m[0] * x0 + m[1] * x1 + m[2] * x2 + m[3] * x3
            a[i1] = m[4] * x0 + m[5] * x1 + m[6] * x2 + m[7] * x3
            a[i2] = m[8] * x0 + m[9] * x1 + m[10] * x2 + m[11] * x3
            a[i3] = m[12] * x0 + m[13] * x1 + m[14] * x2 + m[15] * x3


def apply_single(amps, Py_ssize_t q, gate):
    """Multiply the amplitude pairs split by bit q with a 2x2 gate."""
    cdef cplx[::1] a = amps
    cdef Py_ssize_t npairs = a.shape[0] >> 1
    cdef cplx g00 = gate[0, 0], g01 = gate[0, 1]
    cdef cplx g10 = gate[1, 0], g11 = gate[1, 1]
    if g00.imag == 0 and g01.imag == 0 and g10.imag == 0 and g11.imag == 0:
        with nogil:
            _single_r(<double*>&a[0], npairs << 2, q,
                      g00.real, g01.real, g10.real, g11.real)
    else:
        with nogil:
            _single_c(&a[0], npairs, q, g00, g01, g10, g11)


def apply_pair(amps, Py_ssize_t q, gate4):
    """Multiply amplitude quads split by bits (q+1, q) with a 4x4 gate."""
    cdef cplx[::1] a = amps
    cdef Py_ssize_t nquads = a.shape[0] >> 2
    g = np.ascontiguousarray(gate4, dtype=np.complex128)
    cdef cplx[:, ::1] gc
    cdef double[:, ::1] gr
    if not np.any(g.imag):
        gr = np.ascontiguousarray(g.real)
        with nogil:
            _pair_r(<double*>&a[0], nquads << 3, q, &gr[0, 0])
    else:
        gc = g
        with nogil:
            _pair_c(&a[0], nquads, q, &gc[0, 0])
