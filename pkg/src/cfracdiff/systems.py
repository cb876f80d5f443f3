"""Built-in example systems: scalar linear, logistic, and a 2-D coupled map."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernel import ComplexOrder
from .solver import MapSpec, numerical_jacobian
from .stability import StabilityVerdict, classify_matrix

__all__ = [
    "LogisticParams",
    "CoupledParams",
    "NotAnEquilibriumError",
    "linear_map",
    "logistic_map",
    "coupled_map",
    "equilibrium_verdict",
    "SYSTEM_BUILDERS",
    "build_system",
]

EQUILIBRIUM_TOL = 1e-8


class NotAnEquilibriumError(ValueError):
    """The supplied point does not satisfy f(x) = x within tolerance."""


@dataclass(frozen=True)
class LogisticParams:
    """Growth parameter of the quadratic map lam * x * (1 - x)."""

    lam: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.lam):
            raise ValueError("lam must be finite")


@dataclass(frozen=True)
class CoupledParams:
    """Parameters (lam, mu) of the two-dimensional coupled quadratic map."""

    lam: float
    mu: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lam) and math.isfinite(self.mu)):
            raise ValueError("lam and mu must be finite")


def linear_map(lam: complex) -> MapSpec:
    """One-dimensional linear map x -> lam * x."""
    lam = complex(lam)

    def f(x: np.ndarray) -> np.ndarray:
        return lam * x

    def jac(x: np.ndarray) -> np.ndarray:
        return np.array([[lam]])

    return MapSpec(
        dimension=1,
        f=f,
        jacobian=jac,
        equilibria=(np.zeros(1, dtype=complex),),
        name="linear",
    )


def logistic_map(params) -> MapSpec:
    """Quadratic map f(x) = lam * x * (1 - x) with its fixed points.

    Fixed points are 0 and (lam - 1) / lam, the latter omitted for lam = 0;
    the derivative there is 2 - lam.
    """
    if not isinstance(params, LogisticParams):
        params = LogisticParams(float(params))
    lam = params.lam

    def f(x: np.ndarray) -> np.ndarray:
        return lam * x * (1.0 - x)

    def jac(x: np.ndarray) -> np.ndarray:
        return np.array([[lam - 2.0 * lam * x[0]]])

    equilibria = [np.zeros(1, dtype=complex)]
    if lam != 0.0:
        equilibria.append(np.array([(lam - 1.0) / lam], dtype=complex))
    return MapSpec(
        dimension=1,
        f=f,
        jacobian=jac,
        equilibria=tuple(equilibria),
        name="logistic",
    )


def coupled_map(params) -> MapSpec:
    """Two-dimensional quadratic map with equilibrium at the origin.

    f1(x, y) = lam x (y + 1) + mu (x^2 + 1) y
    f2(x, y) = lam y (x + 1) - mu (y + 1)^2 x

    The Jacobian at the origin is [[lam, mu], [-mu, lam]], with eigenvalues
    lam +/- i mu.
    """
    if not isinstance(params, CoupledParams):
        params = CoupledParams(*params)
    lam, mu = params.lam, params.mu

    def f(xy: np.ndarray) -> np.ndarray:
        x, y = xy
        return np.array(
            [
                lam * x * (y + 1.0) + mu * (x * x + 1.0) * y,
                lam * y * (x + 1.0) - mu * (y + 1.0) ** 2 * x,
            ]
        )

    def jac(xy: np.ndarray) -> np.ndarray:
        x, y = xy
        return np.array(
            [
                [lam * (y + 1.0) + 2.0 * mu * x * y, lam * x + mu * (x * x + 1.0)],
                [lam * y - mu * (y + 1.0) ** 2, lam * (x + 1.0) - 2.0 * mu * (y + 1.0) * x],
            ]
        )

    return MapSpec(
        dimension=2,
        f=f,
        jacobian=jac,
        equilibria=(np.zeros(2, dtype=complex),),
        name="coupled2d",
    )


def equilibrium_verdict(
    order: ComplexOrder, map_spec: MapSpec, point, tol: float = EQUILIBRIUM_TOL
) -> StabilityVerdict:
    """Classify an equilibrium through its linearization.

    The point must satisfy f(x) = x within ``tol``; the verdict is that of
    the Jacobian there (analytic when the MapSpec carries one, finite
    differences otherwise).
    """
    p = np.atleast_1d(np.asarray(point, dtype=complex))
    if len(p) != map_spec.dimension:
        raise ValueError(f"point must have dimension {map_spec.dimension}")
    residual = np.asarray(map_spec.f(p), dtype=complex).reshape(len(p)) - p
    if float(np.linalg.norm(residual)) > tol:
        raise NotAnEquilibriumError(
            f"f(x) - x has norm {np.linalg.norm(residual):.3e} > {tol:.1e}"
        )
    if map_spec.jacobian is not None:
        J = np.atleast_2d(np.asarray(map_spec.jacobian(p), dtype=complex))
    else:
        J = numerical_jacobian(map_spec, p)
    return classify_matrix(order, J)


def _build_linear(params: dict) -> MapSpec:
    return linear_map(complex(params["lambda"]))


def _build_logistic(params: dict) -> MapSpec:
    lam = params["lambda"]
    if isinstance(lam, complex):
        if lam.imag != 0.0:
            raise ValueError("logistic lambda must be real")
        lam = lam.real
    return logistic_map(LogisticParams(float(lam)))


def _build_coupled(params: dict) -> MapSpec:
    vals = []
    for key in ("lambda", "mu"):
        val = params[key]
        if isinstance(val, complex):
            if val.imag != 0.0:
                raise ValueError(f"coupled2d {key} must be real")
            val = val.real
        vals.append(float(val))
    return coupled_map(CoupledParams(*vals))


SYSTEM_BUILDERS = {
    "linear": (_build_linear, ("lambda",)),
    "logistic": (_build_logistic, ("lambda",)),
    "coupled2d": (_build_coupled, ("lambda", "mu")),
}


def build_system(name: str, params: dict) -> MapSpec:
    """Instantiate a registered system ("linear", "logistic", "coupled2d")."""
    try:
        builder, required = SYSTEM_BUILDERS[name]
    except KeyError:
        known = ", ".join(sorted(SYSTEM_BUILDERS))
        raise ValueError(f"unknown system {name!r}; known systems: {known}") from None
    missing = [k for k in required if k not in params]
    if missing:
        raise ValueError(f"system {name!r} missing parameter(s): {', '.join(missing)}")
    extra = [k for k in params if k not in required]
    if extra:
        raise ValueError(f"system {name!r} got unknown parameter(s): {', '.join(extra)}")
    return builder(params)
