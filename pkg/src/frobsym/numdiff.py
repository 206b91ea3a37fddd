"""Central finite differences for scalar, vector and matrix valued fields.

Step sizes follow the usual truncation/roundoff balance for ~1e-6 residual
targets on double precision data:

* first derivatives   h1 = 1e-5  * max(1, |x_i|)
* second derivatives  h2 = 6e-4  * max(1, |x_i|)   (cube-root-of-eps scaling)

Mixed and higher partials are built by composing one-dimensional central
operators, so every routine here only ever needs the field itself. The
fourth-order stencil (f(x-2h) - 8f(x-h) + 8f(x+h) - f(x+2h)) / 12h is used
where third/fourth derivatives have to come out at ~1e-6 relative accuracy.
"""

from __future__ import annotations

from itertools import product
from typing import Callable

import numpy as np

FIRST_ORDER_STEP = 1e-5
SECOND_ORDER_STEP = 6e-4


def step_sizes(x: np.ndarray, scale: float) -> np.ndarray:
    """Per-coordinate steps scale * max(1, |x_i|)."""
    x = np.asarray(x, dtype=float)
    return scale * np.maximum(1.0, np.abs(x))


def gradient(f: Callable, x, h: float | None = None) -> np.ndarray:
    """Central first-difference gradient of a scalar field."""
    x = np.asarray(x, dtype=float)
    hs = step_sizes(x, FIRST_ORDER_STEP if h is None else h)
    g = np.empty(x.size)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = hs[i]
        g[i] = (f(x + e) - f(x - e)) / (2.0 * hs[i])
    return g


def hessian(f: Callable, x, h: float | None = None) -> np.ndarray:
    """Symmetric central-difference Hessian of a scalar field."""
    x = np.asarray(x, dtype=float)
    hs = step_sizes(x, SECOND_ORDER_STEP if h is None else h)
    n = x.size
    out = np.empty((n, n))
    f0 = f(x)
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = hs[i]
        out[i, i] = (f(x + ei) - 2.0 * f0 + f(x - ei)) / hs[i] ** 2
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = hs[j]
            mixed = (
                f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)
            ) / (4.0 * hs[i] * hs[j])
            out[i, j] = mixed
            out[j, i] = mixed
    return out


# Fourth-order central first-derivative stencil: offsets and weights (w / h).
_STENCIL4 = ((-2.0, 1.0 / 12.0), (-1.0, -8.0 / 12.0), (1.0, 8.0 / 12.0), (2.0, -1.0 / 12.0))


def central_partial(f: Callable, x, index: tuple[int, ...], h: float) -> float:
    """Mixed partial d^k f / dx_{i1}..dx_{ik} by composed 4th-order stencils.

    ``index`` lists one coordinate per differentiation (repeats allowed).
    Cost is 4^k evaluations; intended for k <= 4 at desk scale.
    """
    x = np.asarray(x, dtype=float)
    hs = step_sizes(x, h)
    total = 0.0
    for combo in product(_STENCIL4, repeat=len(index)):
        shift = np.zeros_like(x)
        weight = 1.0
        for coord, (offset, w) in zip(index, combo):
            shift[coord] += offset * hs[coord]
            weight *= w / hs[coord]
        total += weight * f(x + shift)
    return total


def derivative_tensor(f: Callable, x, order: int, h: float) -> np.ndarray:
    """Full symmetric tensor of order-``order`` partials via central stencils."""
    x = np.asarray(x, dtype=float)
    n = x.size
    out = np.zeros((n,) * order)
    for index in product(range(n), repeat=order):
        key = tuple(sorted(index))
        if index != key:
            out[index] = out[key]
        else:
            out[index] = central_partial(f, x, index, h)
    # distribute the computed canonical entries to all permutations
    for index in product(range(n), repeat=order):
        out[index] = out[tuple(sorted(index))]
    return out


def third_derivative_tensor(f: Callable, x, h: float = 5e-3) -> np.ndarray:
    """Third-partial tensor at 4th-order accuracy (fallback when no callback)."""
    return derivative_tensor(f, x, 3, h)


def jacobian(field: Callable, x, h: float | None = None) -> np.ndarray:
    """d(field)/dx for an array-valued field; leading axis indexes x-coords."""
    x = np.asarray(x, dtype=float)
    hs = step_sizes(x, FIRST_ORDER_STEP if h is None else h)
    rows = []
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = hs[i]
        rows.append((np.asarray(field(x + e)) - np.asarray(field(x - e))) / (2.0 * hs[i]))
    return np.stack(rows, axis=0)


def matrix_field_derivative(field: Callable, x, h: float | None = None) -> np.ndarray:
    """d[k, i, j] = d(field_ij)/dx_k for a matrix-valued field."""
    return jacobian(field, x, h=h)
