# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled statevector kernels; semantics match _statevec_py exactly.

See _statevec_py for the layout and bit conventions.  The Kahan
accumulation here folds rows in the same ascending order, so results are
chunking-invariant within this backend as well.
"""


def apply_single(double complex[:, ::1] amps, Py_ssize_t pos,
                 double complex u00, double complex u01,
                 double complex u10, double complex u11):
    cdef Py_ssize_t batch = amps.shape[0], dim = amps.shape[1]
    cdef Py_ssize_t stride = 1 << pos, period = stride << 1
    cdef Py_ssize_t r, base, off, i, j
    cdef double complex lo, hi
    for r in range(batch):
        for base in range(0, dim, period):
            for off in range(stride):
                i = base + off
                j = i + stride
                lo = amps[r, i]
                hi = amps[r, j]
                amps[r, i] = u00 * lo + u01 * hi
                amps[r, j] = u10 * lo + u11 * hi


def apply_controlled_phase(double complex[:, ::1] amps, Py_ssize_t mask,
                           Py_ssize_t pattern, double complex phase):
    cdef Py_ssize_t batch = amps.shape[0], dim = amps.shape[1]
    cdef Py_ssize_t r, i
    for r in range(batch):
        for i in range(dim):
            if (i & mask) == pattern:
                amps[r, i] = amps[r, i] * phase


def apply_controlled_x(double complex[:, ::1] amps, Py_ssize_t mask,
                       Py_ssize_t pattern, Py_ssize_t tpos):
    cdef Py_ssize_t batch = amps.shape[0], dim = amps.shape[1]
    cdef Py_ssize_t tbit = 1 << tpos
    cdef Py_ssize_t full = mask | tbit
    cdef Py_ssize_t r, i, j
    cdef double complex tmp
    for r in range(batch):
        for i in range(dim):
            if (i & full) == pattern:
                j = i | tbit
                tmp = amps[r, i]
                amps[r, i] = amps[r, j]
                amps[r, j] = tmp


def apply_swap(double complex[:, ::1] amps, Py_ssize_t pos_a, Py_ssize_t pos_b):
    cdef Py_ssize_t batch = amps.shape[0], dim = amps.shape[1]
    cdef Py_ssize_t ba = 1 << pos_a, bb = 1 << pos_b
    cdef Py_ssize_t both = ba | bb
    cdef Py_ssize_t r, i, j
    cdef double complex tmp
    for r in range(batch):
        for i in range(dim):
            if (i & ba) != 0 and (i & bb) == 0:
                j = i ^ both
                tmp = amps[r, i]
                amps[r, i] = amps[r, j]
                amps[r, j] = tmp


def accumulate_block_probs(double complex[:, ::1] amps, Py_ssize_t nblocks,
                           double[::1] acc, double[::1] comp):
    cdef Py_ssize_t batch = amps.shape[0], dim = amps.shape[1]
    cdef Py_ssize_t block = dim // nblocks
    cdef Py_ssize_t r, b, k, base
    cdef double s, c, y, t, p
    cdef double complex a
    for r in range(batch):
        base = 0
        for b in range(nblocks):
            s = 0.0
            c = 0.0
            for k in range(block):
                a = amps[r, base + k]
                p = a.real * a.real + a.imag * a.imag
                y = p - c
                t = s + y
                c = (t - s) - y
                s = t
            base += block
            y = s - comp[b]
            t = acc[b] + y
            comp[b] = (t - acc[b]) - y
            acc[b] = t
