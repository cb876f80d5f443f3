"""Time stepping for linear and nonlinear complex-order difference systems.

Both solvers advance the summation form of the initial value problem: the
state at time t is the initial state plus the memory convolution of the
weight sequence with the full forcing history, so each step costs O(t) and a
whole trajectory costs O(T^2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .kernel import ComplexOrder, phi_coefficients

__all__ = [
    "DIVERGENCE_CUTOFF",
    "MapSpec",
    "Trajectory",
    "simulate_linear",
    "simulate_nonlinear",
    "numerical_jacobian",
]

DIVERGENCE_CUTOFF = 1e10


@dataclass(frozen=True)
class MapSpec:
    """A map f: C^n -> C^n with optional analytic Jacobian and known fixed points."""

    dimension: int
    f: Callable[[np.ndarray], np.ndarray]
    jacobian: Optional[Callable[[np.ndarray], np.ndarray]] = None
    equilibria: tuple = ()
    name: str = ""


@dataclass(frozen=True)
class Trajectory:
    """Simulated states x(0..T); truncated early when the norm blows up."""

    order: ComplexOrder
    states: np.ndarray
    diverged_at: Optional[int] = None

    def __len__(self) -> int:
        return len(self.states)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.states, axis=1)


def _as_state(x0, dimension: int) -> np.ndarray:
    x = np.atleast_1d(np.asarray(x0, dtype=complex))
    if x.ndim != 1 or len(x) != dimension:
        raise ValueError(f"initial state must have dimension {dimension}")
    return x


def simulate_linear(
    order: ComplexOrder,
    matrix,
    x0,
    steps: int,
    divergence_cutoff: float = DIVERGENCE_CUTOFF,
) -> Trajectory:
    """Advance x(t+1) = x0 + (A - I) (phi * x)(t) for t = 0..steps-1.

    A trajectory whose norm exceeds ``divergence_cutoff`` (or stops being
    finite) is truncated at the offending state and flagged, not treated as
    an error.
    """
    A = np.atleast_2d(np.asarray(matrix, dtype=complex))
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"matrix must be square, got shape {A.shape}")
    if steps < 0:
        raise ValueError("steps must be >= 0")
    x = _as_state(x0, A.shape[0])
    d = len(x)
    B = A - np.eye(d)
    w = phi_coefficients(order, max(steps - 1, 0)).weights

    states = np.empty((steps + 1, d), dtype=complex)
    states[0] = x
    diverged_at = None
    for t in range(steps):
        conv = w[t::-1] @ states[: t + 1]
        nxt = x + B @ conv
        states[t + 1] = nxt
        nrm = float(np.linalg.norm(nxt))
        if not np.isfinite(nrm) or nrm > divergence_cutoff:
            diverged_at = t + 1
            states = states[: t + 2].copy()
            break
    return Trajectory(order=order, states=states, diverged_at=diverged_at)


def simulate_nonlinear(
    order: ComplexOrder,
    map_spec: MapSpec,
    x0,
    steps: int,
    divergence_cutoff: float = DIVERGENCE_CUTOFF,
) -> Trajectory:
    """Advance x(t) = x0 + sum_{j<t} phi(t-1-j) (f(x(j)) - x(j)).

    The forcing g(j) = f(x(j)) - x(j) is cached so each step costs one map
    evaluation plus one O(t) dot product.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    d = map_spec.dimension
    x = _as_state(x0, d)
    w = phi_coefficients(order, max(steps - 1, 0)).weights

    states = np.empty((steps + 1, d), dtype=complex)
    states[0] = x
    forcing = np.empty((max(steps, 1), d), dtype=complex)
    diverged_at = None
    for t in range(1, steps + 1):
        xj = states[t - 1]
        fx = np.asarray(map_spec.f(xj), dtype=complex).reshape(d)
        forcing[t - 1] = fx - xj
        states[t] = x + w[t - 1 :: -1] @ forcing[:t]
        nrm = float(np.linalg.norm(states[t]))
        if not np.isfinite(nrm) or nrm > divergence_cutoff:
            diverged_at = t
            states = states[: t + 1].copy()
            break
    return Trajectory(order=order, states=states, diverged_at=diverged_at)


def numerical_jacobian(map_spec: MapSpec, point, step: Optional[float] = None) -> np.ndarray:
    """Finite-difference Jacobian estimate at ``point``.

    Central differences are taken in the real and imaginary coordinate
    directions separately and averaged; for a holomorphic map both estimates
    approximate the same complex derivative with O(step^2) error.  Used when
    a MapSpec does not carry an analytic Jacobian.
    """
    x = _as_state(point, map_spec.dimension)
    d = len(x)
    h = step if step is not None else 1e-6 * max(1.0, float(np.linalg.norm(x)))
    f = map_spec.f
    J = np.empty((d, d), dtype=complex)
    for j in range(d):
        e = np.zeros(d, dtype=complex)
        e[j] = 1.0
        dre = (np.asarray(f(x + h * e), dtype=complex) - np.asarray(f(x - h * e), dtype=complex)) / (2.0 * h)
        dim = (np.asarray(f(x + 1j * h * e), dtype=complex) - np.asarray(f(x - 1j * h * e), dtype=complex)) / (2j * h)
        J[:, j] = 0.5 * (dre.reshape(d) + dim.reshape(d))
    return J
