"""Bessel generalized shift operator T^y and the B-convolution it induces.

T^y phi(x) is the weighted angular average of phi evaluated at the per-axis
law-of-cosines points

    (x_i, y_i)_alpha = sqrt(x_i^2 + y_i^2 - 2 x_i y_i cos(alpha_i)),

against the sin^{2 gamma_i - 1} weights, normalized so that T^y 1 = 1.  It is
the translation adapted to the Laplace-Bessel operator: T^0 is the identity,
it is symmetric in x and y, preserves the dmu_gamma integral, and acts on the
Fourier-Bessel kernel as multiplication by prod j_{gamma_i-1/2}(y_i t_i).

The B-convolution is (f * phi)(x) = int f(y) T^y phi(x) dmu_gamma(y).
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .grids import GammaIndex, GridFunction, GridInterpolator, as_gamma
from .special import gamma as _gamma

__all__ = [
    "ShiftOperatorPlan",
    "ShiftTruncationWarning",
    "build_shift_plan",
    "shift",
    "shift_grid",
    "b_convolve",
]

MAX_ANGLES = 384


class ShiftTruncationWarning(UserWarning):
    """More than 1% of shifted evaluation points fell beyond x_max."""


@functools.lru_cache(maxsize=256)
def _angle_rule(gamma_axis: float, points: int):
    """(cos(alpha) nodes, weights normalized to sum 1) for sin^{2g-1} d(alpha)."""
    from scipy.special import roots_jacobi

    t, w = roots_jacobi(points, gamma_axis - 1.0, gamma_axis - 1.0)
    return t, w / math.sqrt(math.pi) * _gamma(gamma_axis + 0.5) / _gamma(gamma_axis)


@dataclass(frozen=True)
class ShiftOperatorPlan:
    """Immutable per-gamma angular quadrature data for T^y.

    cos_nodes/weights hold the per-axis rules with the normalizing constant
    c_gamma = prod Gamma(g_i+1/2)/(Gamma(1/2) Gamma(g_i)) folded in, so the
    per-axis weights each sum to 1 (T^y 1 = 1 by construction).
    """

    gamma: GammaIndex
    angles: int
    cos_nodes: tuple
    weights: tuple

    def __post_init__(self):
        total = 1.0
        for w in self.weights:
            total *= float(np.sum(w))
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"angular weights normalize to {total!r}, expected 1")

    @property
    def c_gamma(self) -> float:
        """prod Gamma(g_i+1/2)/(Gamma(1/2) Gamma(g_i)); already folded into
        the stored weights."""
        out = 1.0
        for gi in self.gamma:
            out *= _gamma(gi + 0.5) / (math.sqrt(math.pi) * _gamma(gi))
        return out


def build_shift_plan(gamma, angles: int = 48) -> ShiftOperatorPlan:
    g = as_gamma(gamma)
    if angles < 4:
        raise ValueError("angles must be >= 4")
    rules = [_angle_rule(gi, angles) for gi in g]
    return ShiftOperatorPlan(
        g, angles, tuple(r[0] for r in rules), tuple(r[1] for r in rules)
    )


def _law_of_cosines(x, y, cos_a):
    sq = x * x + y * y - 2.0 * x * y * cos_a
    return np.sqrt(np.maximum(sq, 0.0))


def _tensor_shift_values(phi, axes_x, y, cos_nodes, weights):
    """T^y phi evaluated on a tensor of per-axis x values.

    axes_x: list of per-axis 1-D arrays; returns array of shape
    (len(axes_x[0]), ..., len(axes_x[n-1])).
    """
    n = len(axes_x)
    z_axes = [
        _law_of_cosines(axes_x[i][:, None], y[i], cos_nodes[i][None, :])
        for i in range(n)
    ]
    shape = tuple(len(a) for a in axes_x) + tuple(len(c) for c in cos_nodes)
    pts = np.empty(shape + (n,))
    for i, z in enumerate(z_axes):
        view = [1] * (2 * n)
        view[i] = z.shape[0]
        view[n + i] = z.shape[1]
        pts[..., i] = z.reshape(view)
    vals = np.asarray(phi(pts), dtype=float)
    for i in range(n - 1, -1, -1):
        vals = np.tensordot(vals, weights[i], axes=([vals.ndim - 1], [0]))
    return vals


def shift(plan: ShiftOperatorPlan, phi, x, y, *, adaptive: bool = True,
          tol: float = 1e-10) -> float:
    """T^y phi(x) for a callable phi on the positive orthant.

    phi receives points as an array of shape (..., n).  y = 0 short-circuits
    to phi(x) exactly (initial condition of the shift).  With adaptive=True
    the angular rule is doubled until successive values differ by < tol
    (capped at 384 points per axis).
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    n = plan.gamma.n
    if x.size != n or y.size != n:
        raise ValueError(f"points must have {n} components")
    if np.all(y == 0.0):
        return float(np.asarray(phi(x.reshape(1, n)), dtype=float).reshape(()))

    def value(m):
        if m == plan.angles:
            cn, wn = plan.cos_nodes, plan.weights
        else:
            rules = [_angle_rule(gi, m) for gi in plan.gamma]
            cn, wn = tuple(r[0] for r in rules), tuple(r[1] for r in rules)
        vals = _tensor_shift_values(phi, [x[i : i + 1] for i in range(n)], y, cn, wn)
        return float(np.asarray(vals).reshape(()))

    m = plan.angles
    val = value(m)
    if not adaptive:
        return val
    while 2 * m <= MAX_ANGLES:
        m *= 2
        new = value(m)
        if abs(new - val) < tol * max(1.0, abs(new)):
            return new
        val = new
    return val


def shift_grid(plan: ShiftOperatorPlan, f: GridFunction, y, *, stencil: int = 10) -> GridFunction:
    """T^y f sampled at every grid node.

    Off-node arguments are evaluated by tensor-product local Lagrange
    interpolation (stencil points per axis; 10 by default, which keeps the
    dmu_gamma-integral of the result within ~1e-9 of the original at default
    resolutions) with even reflection at 0 and clamping at x_max.  Because
    the shifted argument on axis i depends only on (x_i, y_i, alpha_i), the
    whole operation contracts separably, one interpolation matrix per axis.
    Emits ShiftTruncationWarning when > 1% of evaluation points are clamped.
    """
    grid = f.grid
    y = np.asarray(y, dtype=float).reshape(-1)
    if y.size != grid.n:
        raise ValueError(f"y must have {grid.n} components")
    if grid.gamma.values != plan.gamma.values:
        raise ValueError("plan and grid gamma indices differ")
    if np.all(y == 0.0):
        return GridFunction(grid, f.values.copy())
    interp = GridInterpolator(f, width=stencil)
    mats = []
    for i in range(grid.n):
        z = _law_of_cosines(
            grid.nodes[i][:, None], y[i], plan.cos_nodes[i][None, :]
        )
        b = interp.dense_axis_matrix(i, z.reshape(-1))
        b = b.reshape(len(grid.nodes[i]), -1, b.shape[1])
        mats.append(np.tensordot(plan.weights[i], b, axes=([0], [1])))
    acc = interp.ext_values
    for ax in range(grid.n):
        acc = np.moveaxis(np.tensordot(mats[ax], acc, axes=([1], [ax])), 0, ax)
    if interp.clip_fraction > 0.01:
        warnings.warn(
            f"{100 * interp.clip_fraction:.1f}% of shift evaluations beyond "
            f"x_max = {grid.x_max} were clamped (truncation bias)",
            ShiftTruncationWarning,
            stacklevel=2,
        )
    return GridFunction(grid, acc)


def b_convolve(plan: ShiftOperatorPlan, f: GridFunction, phi) -> GridFunction:
    """(f * phi)(x) = int f(y) T^y phi(x) dmu_gamma(y) at every grid node.

    The y-integral uses the grid quadrature; T^y phi is evaluated from the
    callable phi directly (no interpolation), so cost is
    O(N_grid^2 * angles^n).  Translations are processed in chunks sized to
    keep the evaluation tensor within a fixed memory budget.
    """
    grid = f.grid
    if grid.gamma.values != plan.gamma.values:
        raise ValueError("plan and grid gamma indices differ")
    n = grid.n
    mesh_y = grid.points().reshape(-1, n)
    w_y = np.ones(grid.shape)
    for ax, w in enumerate(grid.weights):
        w_y = w_y * w.reshape((1,) * ax + (-1,) + (1,) * (n - ax - 1))
    w_f = (w_y * f.values).reshape(-1)

    x_shape = grid.shape
    a_shape = tuple(len(c) for c in plan.cos_nodes)
    tensor_pts = int(np.prod(x_shape)) * int(np.prod(a_shape))
    chunk = max(1, int(4_000_000 // tensor_pts))
    out = np.zeros(int(np.prod(x_shape)))
    for lo in range(0, mesh_y.shape[0], chunk):
        sel = slice(lo, min(lo + chunk, mesh_y.shape[0]))
        yc = mesh_y[sel]
        wc = w_f[sel]
        m = yc.shape[0]
        pts = np.empty((m,) + x_shape + a_shape + (n,))
        for i in range(n):
            z = _law_of_cosines(
                yc[:, i, None, None],
                grid.nodes[i][None, :, None],
                plan.cos_nodes[i][None, None, :],
            )  # (m, X_i, A_i)
            view = [1] * (1 + 2 * n)
            view[0] = m
            view[1 + i] = z.shape[1]
            view[1 + n + i] = z.shape[2]
            pts[..., i] = z.reshape(view)
        vals = np.asarray(phi(pts), dtype=float)
        for i in range(n - 1, -1, -1):
            vals = np.tensordot(vals, plan.weights[i], axes=([vals.ndim - 1], [0]))
        out += np.tensordot(wc, vals.reshape(m, -1), axes=([0], [0]))
    return GridFunction(grid, out.reshape(x_shape))
