"""Jacobi theta function on the additive variable.

``theta(x)`` is the odd theta function with a simple zero at every lattice
point of ``Z + Z tau``, computed from the truncated product formula. A
second route through the Jacobi triple product series is kept as an
independent oracle.
"""
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import InvalidArgumentError, InvalidParamsError

TWO_PI_I = 2j * np.pi
DEFAULT_TAU = 0.8j
DEFAULT_HBAR = 0.21 + 0.13j
TRUNCATION_TARGET = 1e-20


def truncation_for(tau, cap=200):
    """Smallest S with ``|q|^S < 1e-20``, capped at ``cap``."""
    if not np.imag(tau) > 0:
        raise InvalidParamsError(f"tau must lie in the upper half-plane, got {tau!r}")
    absq = abs(np.exp(TWO_PI_I * tau))
    s = int(np.floor(np.log(TRUNCATION_TARGET) / np.log(absq))) + 1
    return max(1, min(s, int(cap)))


@dataclass(frozen=True)
class ModularParams:
    """Modulus, global parameter hbar and numeric settings.

    Use :meth:`build` to derive the truncation from ``tau``.
    """

    tau: complex = DEFAULT_TAU
    hbar: complex = DEFAULT_HBAR
    truncation: int = 10
    tol: float = 1e-8
    _norm: complex = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        tau = complex(self.tau)
        hbar = complex(self.hbar)
        if not (np.isfinite(tau) and np.isfinite(hbar)):
            raise InvalidParamsError("tau and hbar must be finite")
        if tau.imag <= 0:
            raise InvalidParamsError(f"tau must lie in the upper half-plane, got {tau!r}")
        if int(self.truncation) < 1:
            raise InvalidParamsError("truncation must be a positive integer")
        if not self.tol > 0:
            raise InvalidParamsError("tol must be positive")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "hbar", hbar)
        object.__setattr__(self, "truncation", int(self.truncation))
        q = self.q
        qs = q ** np.arange(1, self.truncation + 1)
        object.__setattr__(self, "_norm", complex(np.prod(1.0 - qs) ** -2))
        # theta(2 hbar) vanishes exactly at lattice points and half periods
        if abs(theta(hbar, self)) <= 1e-6 or abs(theta(2 * hbar, self)) <= 1e-6:
            raise InvalidParamsError(f"hbar={hbar!r} is too close to a lattice point or half period")

    @classmethod
    def build(cls, tau=DEFAULT_TAU, hbar=DEFAULT_HBAR, truncation_cap=200, tol=1e-8):
        return cls(tau=tau, hbar=hbar, truncation=truncation_for(tau, truncation_cap), tol=tol)

    @property
    def q(self):
        return complex(np.exp(TWO_PI_I * self.tau))

    @property
    def norm(self):
        return self._norm


def _check_finite(x):
    arr = np.asarray(x, dtype=np.complex128)
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError("theta argument must be finite")
    return arr


def theta(x, params):
    """Truncated product formula for theta; accepts scalars or arrays."""
    arr = _check_finite(x)
    val = kernels.theta_product(arr, params.q, params.truncation) * (params.norm / TWO_PI_I)
    return complex(val) if arr.ndim == 0 else val


def theta_series_oracle(x, params):
    """Theta through the triple product series.

    Sums ``(-1)^n q^{n(n+1)/2} u^{n+1/2}`` for ``-S-1 <= n <= S`` so that the
    pairing ``n <-> -n-1`` is complete, then divides by ``prod (1-q^s)^3``.
    """
    arr = _check_finite(x)
    q = params.q
    S = params.truncation
    n = np.arange(-S - 1, S + 1)
    signs = np.where(n % 2 == 0, 1.0, -1.0)
    qpow = q ** (n * (n + 1) // 2)
    terms = (signs * qpow)[(None,) * arr.ndim] * np.exp(
        1j * np.pi * arr[..., None] * (2 * n + 1)
    )
    euler = np.prod(1.0 - q ** np.arange(1, S + 1))
    val = terms.sum(axis=-1) / euler**3 / TWO_PI_I
    return complex(val) if arr.ndim == 0 else val
