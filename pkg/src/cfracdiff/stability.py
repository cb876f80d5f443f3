"""Stability of complex-order difference systems.

The characteristic map sends the unit circle z = exp(i t) to the closed
boundary curve

    gamma(t) = 2**alpha (sin(t/2))**alpha exp(i [alpha pi/2 + t (1 - alpha/2)]) + 1,

traced for t in [0, 2*pi] with gamma(0) = gamma(2*pi) = 1.  For Im(alpha)
different from zero the curve spirals into the point 1 at both parameter
ends, so the sampling grid is refined geometrically there.  A coefficient
lambda is asymptotically stable exactly when every root of

    g(z) = z (1 - 1/z)**alpha - (lambda - 1)

lies in |z| < 1; membership in the curve's interior (a polyline winding
number) and direct root counting by the argument principle (contour winding
of g) are two independent routes to the same verdict.  Note Re(1 - 1/z) > 0
whenever |z| > 1, so g is analytic and single-valued outside the closed unit
disk and no branch cut is ever crossed.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .kernel import ComplexOrder
from .special_functions import cpow_principal

__all__ = [
    "DEFAULT_SAMPLES",
    "Stability",
    "StabilityVerdict",
    "BoundaryCurve",
    "WindingError",
    "curve_point",
    "boundary_curve",
    "is_simple_order",
    "detect_self_intersection",
    "classify_lambda",
    "count_roots_outside",
    "classify_matrix",
    "real_axis_intervals",
]

TWO_PI = 2.0 * math.pi
DEFAULT_SAMPLES = 4096

# Geometric refinement toward t = 0 and t = 2*pi: 40 halvings of the first
# bulk cell with 6 samples per halving, enough to resolve the end spirals
# down to radii ~1e-12 around lambda = 1.
_STACK_LEVELS = 40
_STACK_PER_LEVEL = 6


class Stability(enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    BOUNDARY = "boundary"


class WindingError(RuntimeError):
    """A winding estimate failed to settle on an integer."""


@dataclass(frozen=True)
class StabilityVerdict:
    """Outcome of a stability test together with the evidence that produced it."""

    status: Stability
    reason: str
    winding: Optional[int] = None
    outside_roots: Optional[int] = None
    tolerance_used: float = 0.0

    def as_dict(self) -> dict:
        evidence: dict = {"kind": self.reason}
        if self.winding is not None:
            evidence["winding"] = self.winding
        if self.outside_roots is not None:
            evidence["outside_roots"] = self.outside_roots
        return {
            "verdict": self.status.value,
            "evidence": evidence,
            "tolerance_used": self.tolerance_used,
        }


@dataclass(frozen=True)
class BoundaryCurve:
    """Sampled boundary curve gamma(t) on the refined parameter grid."""

    order: ComplexOrder
    t: np.ndarray
    points: np.ndarray
    is_simple: Optional[bool] = None

    @property
    def n_samples(self) -> int:
        return len(self.t)

    def samples(self):
        """Iterate over (t, point) pairs."""
        return zip(self.t.tolist(), self.points.tolist())


def curve_point(order: ComplexOrder, t: float) -> complex:
    """Single boundary-curve point gamma(t) via principal powers."""
    if t <= 0.0 or t >= TWO_PI:
        return complex(1.0)
    a = order.value
    radial = cpow_principal(2.0 * math.sin(0.5 * t), a)
    return 1.0 + radial * cmath.exp(1j * (0.5 * math.pi * a + t * (1.0 - 0.5 * a)))


def _parameter_grid(n_samples: int) -> np.ndarray:
    stack = _STACK_LEVELS * _STACK_PER_LEVEL
    n_bulk = max(n_samples - 2 * stack, 64)
    edge = TWO_PI / n_bulk
    bulk = np.linspace(edge, TWO_PI - edge, n_bulk)
    k = np.arange(1, stack + 1, dtype=float)
    offsets = edge * 0.5 ** (k / _STACK_PER_LEVEL)
    return np.concatenate(
        ([0.0], offsets[::-1], bulk, TWO_PI - offsets, [TWO_PI])
    )


def _curve_values(order: ComplexOrder, ts: np.ndarray) -> np.ndarray:
    alpha = order.value
    inner = ts[1:-1]
    s = np.sin(0.5 * inner)
    pts = np.empty(len(ts), dtype=complex)
    pts[0] = 1.0
    pts[-1] = 1.0
    pts[1:-1] = 1.0 + np.exp(
        alpha * (math.log(2.0) + np.log(s))
        + 1j * (0.5 * math.pi * alpha + inner * (1.0 - 0.5 * alpha))
    )
    return pts


@lru_cache(maxsize=64)
def _sampled(order: ComplexOrder, n_samples: int):
    ts = _parameter_grid(n_samples)
    pts = _curve_values(order, ts)
    ts.flags.writeable = False
    pts.flags.writeable = False
    return ts, pts


def boundary_curve(order: ComplexOrder, n_samples: int = DEFAULT_SAMPLES) -> BoundaryCurve:
    """Sample gamma(t) on the refined grid and record whether it is simple."""
    if n_samples < 64:
        raise ValueError("n_samples must be >= 64")
    ts, pts = _sampled(order, n_samples)
    return BoundaryCurve(order=order, t=ts, points=pts, is_simple=is_simple_order(order))


def is_simple_order(order: ComplexOrder) -> bool:
    """Whether the boundary curve is a simple closed curve.

    For v >= 0 this is the closed-form criterion v < sqrt(2u - u^2), i.e.
    alpha strictly inside the circle (u - 1)^2 + v^2 = 1, with v = 0 (the
    classical real order) always simple.  The closed form is only stated for
    non-negative v, so negative v falls back to the numerical
    self-intersection search.
    """
    if order.v >= 0.0:
        return order.v * order.v < order.u * (2.0 - order.u)
    ts, pts = _sampled(order, max(DEFAULT_SAMPLES // 2, 512))
    return _find_segment_crossing(pts) is None


def _seg_cross_scalar(p1: complex, p2: complex, q1: complex, q2: complex) -> bool:
    def cross(a: complex, b: complex) -> float:
        return a.real * b.imag - a.imag * b.real

    d1 = cross(p2 - p1, q1 - p1)
    d2 = cross(p2 - p1, q2 - p1)
    d3 = cross(q2 - q1, p1 - q1)
    d4 = cross(q2 - q1, p2 - q1)
    return (d1 * d2 < 0.0) and (d3 * d4 < 0.0)


def _find_segment_crossing(pts: np.ndarray, block: int = 512):
    """First properly crossing pair of non-adjacent polyline segments, or None."""
    x = pts.real
    y = pts.imag
    m = len(pts) - 1
    x1, y1 = x[:-1], y[:-1]
    x2, y2 = x[1:], y[1:]
    xlo, xhi = np.minimum(x1, x2), np.maximum(x1, x2)
    ylo, yhi = np.minimum(y1, y2), np.maximum(y1, y2)

    jj = np.arange(m)
    for i0 in range(0, m, block):
        i1 = min(i0 + block, m)
        ii = np.arange(i0, i1)
        sep = jj[None, :] - ii[:, None]
        mask = sep > 1
        # first and last segment share the closing vertex at 1
        mask &= ~((ii[:, None] == 0) & (jj[None, :] == m - 1))
        mask &= (xlo[None, :] <= xhi[ii][:, None]) & (xhi[None, :] >= xlo[ii][:, None])
        mask &= (ylo[None, :] <= yhi[ii][:, None]) & (yhi[None, :] >= ylo[ii][:, None])
        if not mask.any():
            continue
        ai, aj = np.nonzero(mask)
        ai = ai + i0
        p1 = pts[ai]
        p2 = pts[ai + 1]
        q1 = pts[aj]
        q2 = pts[aj + 1]
        r = p2 - p1
        s = q2 - q1
        d1 = r.real * (q1 - p1).imag - r.imag * (q1 - p1).real
        d2 = r.real * (q2 - p1).imag - r.imag * (q2 - p1).real
        d3 = s.real * (p1 - q1).imag - s.imag * (p1 - q1).real
        d4 = s.real * (p2 - q1).imag - s.imag * (p2 - q1).real
        hit = (d1 * d2 < 0.0) & (d3 * d4 < 0.0)
        if hit.any():
            k = np.nonzero(hit)[0]
            best = k[np.lexsort((aj[k], ai[k]))[0]]
            return int(ai[best]), int(aj[best])
    return None


def _refine_crossing(order: ComplexOrder, ta, tb):
    """Bisect two crossing parameter intervals down to 1e-10 on the true curve."""
    ta_lo, ta_hi = ta
    tb_lo, tb_hi = tb
    pa_lo, pa_hi = curve_point(order, ta_lo), curve_point(order, ta_hi)
    pb_lo, pb_hi = curve_point(order, tb_lo), curve_point(order, tb_hi)
    for _ in range(240):
        wa = ta_hi - ta_lo
        wb = tb_hi - tb_lo
        if wa < 1e-10 and wb < 1e-10:
            break
        if wa >= wb:
            tm = 0.5 * (ta_lo + ta_hi)
            pm = curve_point(order, tm)
            if _seg_cross_scalar(pa_lo, pm, pb_lo, pb_hi):
                ta_hi, pa_hi = tm, pm
            elif _seg_cross_scalar(pm, pa_hi, pb_lo, pb_hi):
                ta_lo, pa_lo = tm, pm
            else:
                break
        else:
            tm = 0.5 * (tb_lo + tb_hi)
            pm = curve_point(order, tm)
            if _seg_cross_scalar(pa_lo, pa_hi, pb_lo, pm):
                tb_hi, pb_hi = tm, pm
            elif _seg_cross_scalar(pa_lo, pa_hi, pm, pb_hi):
                tb_lo, pb_lo = tm, pm
            else:
                break
    return 0.5 * (ta_lo + ta_hi), 0.5 * (tb_lo + tb_hi)


def detect_self_intersection(curve: BoundaryCurve):
    """Parameter pair (t1, t2) where the curve crosses itself, or None.

    Runs a bounding-box segment sweep over the sampled polyline, then
    bisects the crossing pair on the true curve.
    """
    if curve.n_samples < 512:
        raise ValueError("detect_self_intersection needs n_samples >= 512")
    hit = _find_segment_crossing(curve.points)
    if hit is None:
        return None
    i, j = hit
    ts = curve.t
    t1, t2 = _refine_crossing(
        curve.order, (ts[i], ts[i + 1]), (ts[j], ts[j + 1])
    )
    return float(t1), float(t2)


def _polyline_winding(points: np.ndarray, z: complex):
    w = points - z
    inc = np.angle(w[1:] / w[:-1])
    total = float(np.sum(inc)) / TWO_PI
    k = round(total)
    return int(k), abs(total - k)


def _distance_to_polyline(points: np.ndarray, z: complex) -> float:
    a = points[:-1]
    b = points[1:]
    ab = b - a
    denom = ab.real * ab.real + ab.imag * ab.imag
    az = z - a
    tpar = (az.real * ab.real + az.imag * ab.imag) / np.where(denom > 0.0, denom, 1.0)
    tpar = np.clip(np.where(denom > 0.0, tpar, 0.0), 0.0, 1.0)
    proj = a + tpar * ab
    return float(np.min(np.abs(z - proj)))


def classify_lambda(
    order: ComplexOrder,
    lam: complex,
    n_samples: int = DEFAULT_SAMPLES,
    boundary_tol: Optional[float] = None,
) -> StabilityVerdict:
    """Stability verdict for a single coefficient / eigenvalue lambda.

    Non-simple orders are unstable for every lambda; otherwise membership in
    the curve interior is decided by the polyline winding number.  Verdicts
    within ``boundary_tol`` of the curve (default 1e-6 * (1 + |lambda|)) are
    reported as BOUNDARY, which doubles as the cannot-decide signal.
    lambda = 1 is always BOUNDARY: the curve passes through it.
    """
    lam = complex(lam)
    tol = boundary_tol if boundary_tol is not None else 1e-6 * (1.0 + abs(lam))
    if abs(lam - 1.0) <= tol:
        return StabilityVerdict(
            Stability.BOUNDARY, "curve-endpoint", tolerance_used=tol
        )
    if not is_simple_order(order):
        return StabilityVerdict(
            Stability.UNSTABLE, "non-simple-curve", tolerance_used=tol
        )
    n = n_samples
    for _ in range(3):
        ts, pts = _sampled(order, n)
        if _distance_to_polyline(pts, lam) <= tol:
            return StabilityVerdict(
                Stability.BOUNDARY, "on-curve", tolerance_used=tol
            )
        k, resid = _polyline_winding(pts, lam)
        if resid <= 0.25:
            status = Stability.STABLE if k != 0 else Stability.UNSTABLE
            return StabilityVerdict(
                status, "winding-number", winding=k, tolerance_used=tol
            )
        n *= 2
    return StabilityVerdict(
        Stability.BOUNDARY, "winding-did-not-stabilize", tolerance_used=tol
    )


def _g_on_circle(alpha: complex, target: complex, delta: float, n: int) -> np.ndarray:
    """Closed loop of g(z) on |z| = 1 + delta, z - 1 formed cancellation-free.

    The image of the contour near z = 1 unwinds the end spirals of the
    boundary curve, a phase swing of order |Im alpha| * log(1/delta) packed
    into |theta| < delta**0; a uniform grid aliases it, so the same
    geometrically refined grid as the curve sampling is used.
    """
    theta = _parameter_grid(n)
    sh = np.sin(0.5 * theta)
    ch = np.cos(0.5 * theta)
    e = np.cos(theta) + 1j * np.sin(theta)
    zm1 = delta * e + 2.0 * sh * (-sh + 1j * ch)
    z = 1.0 + zm1
    return z * np.exp(alpha * np.log(zm1 / z)) - target


def _g_on_big_circle(alpha: complex, target: complex, radius: float, n: int) -> np.ndarray:
    theta = np.linspace(0.0, TWO_PI, n, endpoint=True)
    z = radius * (np.cos(theta) + 1j * np.sin(theta))
    return z * np.exp(alpha * np.log(1.0 - 1.0 / z)) - target


def _contour_winding(values_fn, n_start: int = 4096) -> int:
    prev = None
    n = n_start
    while n <= (1 << 21):
        closed = values_fn(n)
        k, resid = _polyline_winding(closed, 0.0)
        if resid < 0.2:
            if prev == k:
                return k
            prev = k
        else:
            prev = None
        n *= 2
    raise WindingError("contour winding did not stabilize")


def count_roots_outside(
    order: ComplexOrder, lam: complex, radius: float = 1.0 + 1e-9
) -> int:
    """Number of characteristic roots with |z| > radius, by the argument principle.

    The count is the winding of g along a large outer circle (which is 1,
    since g ~ z at infinity) minus its winding along |z| = radius.  ``radius``
    must be 1 + delta with delta in (0, 0.1]; keep delta tiny when lambda may
    lie near the curve close to the point 1, where roots approach the unit
    circle.  lambda must not sit on (or numerically too close to) the curve,
    otherwise the inner winding cannot stabilize and WindingError is raised.
    """
    lam = complex(lam)
    delta = radius - 1.0
    if not 0.0 < delta <= 0.1:
        raise ValueError("radius must be 1 + delta with delta in (0, 0.1]")
    alpha = order.value
    target = lam - 1.0

    expo = 1.0 / (1.0 - order.u) if order.u < 1.0 else math.inf
    big = 10.0 * (1.0 + abs(target)) ** min(expo, 50.0)
    w_out = None
    for _ in range(8):
        w_out = _contour_winding(lambda n: _g_on_big_circle(alpha, target, big, n))
        if w_out == 1:
            break
        big *= 2.0
    if w_out != 1:
        raise WindingError("outer contour winding never reached 1")

    w_in = _contour_winding(lambda n: _g_on_circle(alpha, target, delta, n))
    n_out = w_out - w_in
    if n_out < 0:
        raise WindingError(f"negative root count {n_out}; refine delta or sampling")
    return n_out


def _eigenvalues(A: np.ndarray) -> np.ndarray:
    d = A.shape[0]
    if d == 1:
        return np.array([A[0, 0]])
    if d == 2:
        m = 0.5 * (A[0, 0] + A[1, 1])
        det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
        q = cmath.sqrt(m * m - det)
        return np.array([m + q, m - q])
    return np.linalg.eigvals(A)


def classify_matrix(
    order: ComplexOrder,
    matrix,
    n_samples: int = DEFAULT_SAMPLES,
    max_dimension: int = 16,
) -> StabilityVerdict:
    """Verdict for a linear system matrix: stable iff every eigenvalue is.

    Eigenvalues come from the closed form for 1x1 and 2x2 matrices and from
    a dense QR-type solver above that.  Any unstable eigenvalue makes the
    system unstable; otherwise any boundary eigenvalue leaves it boundary.
    """
    A = np.atleast_2d(np.asarray(matrix, dtype=complex))
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"matrix must be square, got shape {A.shape}")
    if A.shape[0] > max_dimension:
        raise ValueError(f"matrix dimension {A.shape[0]} exceeds limit {max_dimension}")
    eigs = _eigenvalues(A)
    verdicts = [classify_lambda(order, ev, n_samples=n_samples) for ev in eigs]
    statuses = [v.status for v in verdicts]
    tol = max(v.tolerance_used for v in verdicts)
    if Stability.UNSTABLE in statuses:
        status = Stability.UNSTABLE
    elif Stability.BOUNDARY in statuses:
        status = Stability.BOUNDARY
    else:
        status = Stability.STABLE
    summary = ",".join(s.value for s in statuses)
    return StabilityVerdict(
        status, f"eigenvalues:{summary}", tolerance_used=tol
    )


def _bisect_im_zero(order: ComplexOrder, t_lo: float, t_hi: float) -> float:
    f_lo = curve_point(order, t_lo).imag
    while t_hi - t_lo > 1e-10:
        tm = 0.5 * (t_lo + t_hi)
        fm = curve_point(order, tm).imag
        if fm == 0.0:
            return tm
        if (f_lo < 0.0) == (fm < 0.0):
            t_lo, f_lo = tm, fm
        else:
            t_hi = tm
    return 0.5 * (t_lo + t_hi)


def real_axis_intervals(
    order: ComplexOrder,
    n_samples: int = DEFAULT_SAMPLES,
    resolution: float = 1e-2,
) -> list:
    """Open intervals where the real axis meets the stable region.

    Real-axis crossings of the curve are located as sign changes of
    Im(gamma) on the refined grid and bisected to 1e-10 in the parameter;
    the limit point 1 is always a crossing.  Midpoints of consecutive
    crossing gaps are classified and adjacent stable gaps merged.  Only
    defined for simple-curve orders.

    When Im(alpha) != 0 the curve spirals into 1 infinitely often, so
    alternating stable/unstable slivers of geometrically shrinking width
    accumulate there.  Crossings within ``resolution`` of 1 are collapsed
    into the limit point, which reports the region at that finite
    resolution; pass resolution=0 to keep every crossing the sampling
    resolves.
    """
    if not is_simple_order(order):
        raise ValueError("stable region is empty: boundary curve is not simple")
    ts, pts = _sampled(order, n_samples)
    im = pts.imag

    crossings = [1.0]
    prod = im[:-1] * im[1:]
    for i in np.nonzero(prod < 0.0)[0]:
        t_star = _bisect_im_zero(order, float(ts[i]), float(ts[i + 1]))
        crossings.append(curve_point(order, t_star).real)
    interior = im[1:-1]
    for i in np.nonzero(interior == 0.0)[0]:
        crossings.append(float(pts[i + 1].real))

    if resolution > 0.0:
        crossings = [x for x in crossings if x == 1.0 or abs(x - 1.0) >= resolution]

    xs = np.sort(np.asarray(crossings, dtype=float))
    kept = []
    for lo, hi in zip(xs[:-1], xs[1:]):
        if hi - lo < 1e-12:
            continue
        mid = 0.5 * (lo + hi)
        verdict = classify_lambda(order, complex(mid), n_samples=n_samples)
        if verdict.status is Stability.STABLE:
            kept.append((float(lo), float(hi)))

    merged: list = []
    for lo, hi in kept:
        if merged and abs(lo - merged[-1][1]) < 1e-12:
            merged[-1] = (merged[-1][0], hi)
        else:
            merged.append((lo, hi))
    return merged
