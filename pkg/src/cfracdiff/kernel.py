"""Memory weights of the complex-order difference operator and their convolution.

The weight attached to a state n steps in the past is the generalized
binomial coefficient C(n + alpha - 1, n) = Gamma(n + alpha) / (Gamma(alpha)
Gamma(n + 1)).  Weights are generated by the exact ratio recurrence

    phi(0) = 1,    phi(n) = phi(n - 1) * (n - 1 + alpha) / n,

which avoids the overflow and cancellation a direct Gamma quotient would hit
for large n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ComplexOrder",
    "PhiKernel",
    "KernelCapacityError",
    "phi_coefficients",
    "convolve_at",
]


class KernelCapacityError(ValueError):
    """Raised when a convolution asks for more weights than were generated."""


@dataclass(frozen=True)
class ComplexOrder:
    """Order alpha = u + i*v of the fractional difference operator.

    u must lie in (0, 1]; u = 1 with v = 0 is the classical first-order case
    that every formula degenerates to, while the fractional theory proper
    lives on u in (0, 1).  v may be any finite real; v = 0 gives the
    real-order operator.
    """

    u: float
    v: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.u) and math.isfinite(self.v)):
            raise ValueError("order components must be finite")
        if not 0.0 < self.u <= 1.0:
            raise ValueError(f"Re(alpha) must lie in (0, 1], got {self.u}")

    @classmethod
    def from_complex(cls, alpha: complex) -> "ComplexOrder":
        a = complex(alpha)
        return cls(a.real, a.imag)

    @property
    def value(self) -> complex:
        return complex(self.u, self.v)

    def __complex__(self) -> complex:
        return complex(self.u, self.v)

    def __str__(self) -> str:
        sign = "+" if self.v >= 0 else "-"
        return f"{self.u:g}{sign}{abs(self.v):g}i"


@dataclass(frozen=True)
class PhiKernel:
    """Precomputed weight sequence phi(0..capacity) for one order.

    Immutable after construction; ``extended`` returns a new kernel whose
    common prefix is bit-identical.
    """

    order: ComplexOrder
    weights: np.ndarray

    @property
    def capacity(self) -> int:
        return len(self.weights) - 1

    def extended(self, n_max: int) -> "PhiKernel":
        """Kernel covering indices up to at least ``n_max`` (geometric growth)."""
        if n_max <= self.capacity:
            return self
        new_cap = max(n_max, 2 * self.capacity)
        alpha = self.order.value
        w = np.empty(new_cap + 1, dtype=complex)
        w[: self.capacity + 1] = self.weights
        n = np.arange(self.capacity + 1, new_cap + 1)
        w[self.capacity + 1 :] = self.weights[self.capacity] * np.cumprod(
            (n - 1 + alpha) / n
        )
        w.flags.writeable = False
        return PhiKernel(self.order, w)


def phi_coefficients(order: ComplexOrder, n_max: int) -> PhiKernel:
    """Weights phi(0..n_max) by the multiplicative recurrence.

    phi(n) equals Gamma(n + alpha) / (Gamma(alpha) Gamma(n + 1)); for
    alpha = 1 every weight is exactly 1.0 because each recurrence factor is
    n / n.
    """
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    alpha = order.value
    w = np.empty(n_max + 1, dtype=complex)
    w[0] = 1.0
    if n_max > 0:
        n = np.arange(1, n_max + 1)
        w[1:] = np.cumprod((n - 1 + alpha) / n)
    w.flags.writeable = False
    return PhiKernel(order, w)


def convolve_at(kernel: PhiKernel, series, n: int):
    """Memory convolution sum_{s=0}^{n} phi(n - s) * series[s].

    ``series`` may be a 1-D sequence of scalars or a 2-D array with one state
    vector per row; the result is a complex scalar or a vector accordingly.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if kernel.capacity < n:
        raise KernelCapacityError(
            f"kernel capacity {kernel.capacity} < requested index {n}"
        )
    s = np.asarray(series, dtype=complex)
    if s.shape[0] < n + 1:
        raise ValueError(f"series has {s.shape[0]} entries, need {n + 1}")
    return kernel.weights[n::-1] @ s[: n + 1]
