"""Pure numpy implementations of the hot kernels.

These are the reference versions; ``_ckernels.pyx`` must agree with them
to rounding.
"""
import numpy as np


def theta_product(x, q, nterms):
    """Return ``(u^{1/2} - u^{-1/2}) * prod_{s=1..nterms} (1 - q^s u)(1 - q^s / u)``.

    ``u = exp(2 pi i x)`` with the branch ``u^{1/2} = exp(pi i x)``.
    Normalisation constants are applied by the caller.
    """
    x = np.asarray(x, dtype=np.complex128)
    half = np.exp(1j * np.pi * x)
    inv_half = 1.0 / half
    u = half * half
    inv_u = inv_half * inv_half
    acc = half - inv_half
    qs = 1.0 + 0j
    for _ in range(nterms):
        qs *= q
        acc = acc * (1.0 - qs * u) * (1.0 - qs * inv_u)
    return acc


def twisted_fma(out, a, ra, ca, b, rb, cb):
    """In place: ``out[x, y, :] += a[ra[x], ca[y], :] * b[rb[x], cb[y], :]``."""
    out += a[ra][:, ca] * b[rb][:, cb]
