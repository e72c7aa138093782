"""Numpy statevector kernels; reference implementation and import-time fallback.

All kernels mutate a C-contiguous (batch, 2**wires) complex128 array in
place.  Basis-state index bit (wires-1-q) carries wire q, so wire 0 is the
most significant bit and a measured prefix of m wires occupies contiguous
index blocks of length 2**(wires-m).

Complex products are spelled out over real components rather than using
numpy's complex multiply: the latter may contract to FMA on some CPUs,
which breaks bit-identity with the compiled kernels (built with
contraction off) in cancellation cases.
"""

from __future__ import annotations

import numpy as np


def _mul_acc(out: np.ndarray, u, x: np.ndarray, acc: bool) -> None:
    # out (+)= u * x with one rounding per elementwise op, like plain C
    re = u.real * x.real - u.imag * x.imag
    im = u.real * x.imag + u.imag * x.real
    if acc:
        out.real += re
        out.imag += im
    else:
        out.real = re
        out.imag = im


def apply_single(amps: np.ndarray, pos: int, u00, u01, u10, u11) -> None:
    """Apply a 2x2 unitary to the qubit at bit position `pos`."""
    batch, dim = amps.shape
    view = amps.reshape(batch, dim >> (pos + 1), 2, 1 << pos)
    lo = view[:, :, 0, :].copy()
    hi = view[:, :, 1, :].copy()
    u00 = complex(u00)
    u01 = complex(u01)
    u10 = complex(u10)
    u11 = complex(u11)
    out = np.empty_like(lo)
    _mul_acc(out, u00, lo, acc=False)
    _mul_acc(out, u01, hi, acc=True)
    view[:, :, 0, :] = out
    _mul_acc(out, u10, lo, acc=False)
    _mul_acc(out, u11, hi, acc=True)
    view[:, :, 1, :] = out


def apply_controlled_phase(amps: np.ndarray, mask: int, pattern: int, phase) -> None:
    """Multiply amplitudes by `phase` where (index & mask) == pattern."""
    dim = amps.shape[1]
    idx = np.arange(dim)
    sel = (idx & mask) == pattern
    sub = amps[:, sel]
    out = np.empty_like(sub)
    _mul_acc(out, complex(phase), sub, acc=False)
    amps[:, sel] = out


def apply_controlled_x(amps: np.ndarray, mask: int, pattern: int, tpos: int) -> None:
    """Flip the target bit where (index & mask) == pattern.

    The mask never includes the target bit; X itself is mask == 0.
    """
    dim = amps.shape[1]
    tbit = 1 << tpos
    idx = np.arange(dim)
    src = idx[(idx & (mask | tbit)) == pattern]
    dst = src | tbit
    tmp = amps[:, src].copy()
    amps[:, src] = amps[:, dst]
    amps[:, dst] = tmp


def apply_swap(amps: np.ndarray, pos_a: int, pos_b: int) -> None:
    dim = amps.shape[1]
    ba, bb = 1 << pos_a, 1 << pos_b
    idx = np.arange(dim)
    src = idx[((idx & ba) != 0) & ((idx & bb) == 0)]
    dst = src ^ (ba | bb)
    tmp = amps[:, src].copy()
    amps[:, src] = amps[:, dst]
    amps[:, dst] = tmp


def accumulate_block_probs(amps: np.ndarray, nblocks: int,
                           acc: np.ndarray, comp: np.ndarray) -> None:
    """Kahan-accumulate per-block probability mass of each row into acc.

    Rows are folded in ascending order with the compensation carried in
    `comp`, so accumulating chunk by chunk gives bit-identical results to
    one big call.
    """
    batch, dim = amps.shape
    block = dim // nblocks
    rows = (amps.real ** 2 + amps.imag ** 2).reshape(batch, nblocks, block).sum(axis=2)
    for r in range(batch):
        y = rows[r] - comp
        t = acc + y
        comp[:] = (t - acc) - y
        acc[:] = t
