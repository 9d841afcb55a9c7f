"""Buchstab function omega(u) and its explicit lower/upper envelopes.

omega solves the delay differential equation (u*omega(u))' = omega(u-1) with
omega(u) = 1/u on [1,2].  Closed forms exist up to u = 4; beyond that the
table continues the solution by cumulative trapezoidal integration of the
integral form u*omega(u) = 3*omega(3) + int_3^u omega(t-1) dt.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "BuchstabTable",
    "default_table",
    "omega",
    "omega_lower",
    "omega_upper",
    "omega_many",
]

DEFAULT_GRID_STEP = 1e-4
DEFAULT_U_MAX = 64.0

# Envelope constants for the tail branches.
LOWER_34 = 0.5607
UPPER_34 = 0.5644
LOWER_4 = 0.5612
UPPER_4 = 0.5617


def _log_integral(u: float, tol: float = 1e-9) -> float:
    """int_2^{u-1} log(t-1)/t dt by adaptive Simpson, for u in [3, 4]."""
    a, b = 2.0, u - 1.0
    if b <= a:
        return 0.0

    def f(t: float) -> float:
        return math.log(t - 1.0) / t

    def simpson(x0: float, x2: float, f0: float, f1: float, f2: float) -> float:
        return (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2)

    def recurse(x0, x2, f0, f1, f2, whole, eps, depth):
        xm = 0.5 * (x0 + x2)
        xl, xr = 0.5 * (x0 + xm), 0.5 * (xm + x2)
        fl, fr = f(xl), f(xr)
        left = simpson(x0, xm, f0, fl, f1)
        right = simpson(xm, x2, f1, fr, f2)
        if depth <= 0 or abs(left + right - whole) <= 15.0 * eps:
            return left + right + (left + right - whole) / 15.0
        return recurse(x0, xm, f0, fl, f1, left, eps / 2.0, depth - 1) + recurse(
            xm, x2, f1, fr, f2, right, eps / 2.0, depth - 1
        )

    mid = 0.5 * (a + b)
    fa, fm, fb = f(a), f(mid), f(b)
    whole = simpson(a, b, fa, fm, fb)
    return recurse(a, b, fa, fm, fb, whole, tol, 40)


def _closed_form_23(u):
    """Exact omega on [2, 3]: (1 + log(u-1))/u.  Accepts scalars or arrays."""
    return (1.0 + np.log(np.asarray(u) - 1.0)) / np.asarray(u)


def _exact_34(u: float) -> float:
    """Exact omega on [3, 4]: second iterate of the delay equation."""
    return (1.0 + math.log(u - 1.0)) / u + _log_integral(u) / u


class BuchstabTable:
    """Sampled omega on a uniform grid over [1, u_max].

    The table is immutable after construction except for explicit lazy
    extension via :meth:`ensure`, which must happen before the table is
    shared between threads.
    """

    def __init__(self, grid_step: float = DEFAULT_GRID_STEP, u_max: float = DEFAULT_U_MAX):
        if grid_step <= 0:
            raise ValueError("grid_step must be positive")
        if u_max < 4:
            raise ValueError("u_max must be at least 4")
        self.grid_step = float(grid_step)
        self.per_unit = int(round(1.0 / grid_step))
        if abs(self.per_unit * grid_step - 1.0) > 1e-12:
            raise ValueError("grid_step must divide 1 exactly")
        self.u_max = float(int(math.ceil(u_max - 1e-12)))
        self.values = self._build(self.u_max)

    def _build(self, u_max: float) -> np.ndarray:
        h = self.grid_step
        m = self.per_unit
        n = int(round((u_max - 1.0) / h)) + 1
        u = 1.0 + h * np.arange(n)
        vals = np.empty(n)
        # [1, 2]: 1/u.
        vals[: m + 1] = 1.0 / u[: m + 1]
        # (2, 3]: closed form.
        vals[m + 1 : 2 * m + 1] = _closed_form_23(u[m + 1 : 2 * m + 1])
        # (3, u_max]: u*omega(u) = 3*omega(3) + int_3^u omega(t-1) dt,
        # accumulated trapezoidally one unit block at a time so that the
        # integrand omega(t-1) is always already tabulated.
        f = 3.0 * vals[2 * m]
        blocks = int(round(u_max)) - 3
        for b in range(blocks):
            lo = (1 + b) * m  # grid index of u-1 at the block start
            g = vals[lo : lo + m + 1]  # omega(t-1) across the block
            steps = 0.5 * h * (g[:-1] + g[1:])
            cum = f + np.cumsum(steps)
            idx0 = (2 + b) * m + 1
            vals[idx0 : idx0 + m] = cum / u[idx0 : idx0 + m]
            f = cum[-1]
        return vals

    def ensure(self, u: float) -> None:
        """Extend the table so that omega(u) is evaluable (not thread-safe)."""
        if u <= self.u_max:
            return
        new_max = float(int(math.ceil(u)))
        self.u_max = new_max
        self.values = self._build(new_max)

    def omega(self, u: float) -> float:
        """Evaluate omega(u); exact branches below 3, table interpolation above."""
        if u < 1.0:
            raise ValueError("omega is defined for u >= 1")
        if u <= 2.0:
            return 1.0 / u
        if u <= 3.0:
            return float(_closed_form_23(u))
        self.ensure(u)
        return float(self._interp(np.asarray([u]))[0])

    def omega_many(self, u: np.ndarray) -> np.ndarray:
        """Vectorised omega for u >= 1 (values below u_max only)."""
        u = np.asarray(u, dtype=float)
        if u.size and float(u.max()) > self.u_max:
            self.ensure(float(u.max()))
        return self._interp(u)

    def _interp(self, u: np.ndarray) -> np.ndarray:
        h = self.grid_step
        pos = (u - 1.0) / h
        idx = np.clip(pos.astype(np.int64), 0, len(self.values) - 2)
        frac = pos - idx
        return self.values[idx] * (1.0 - frac) + self.values[idx + 1] * frac


_DEFAULT: BuchstabTable | None = None


def default_table() -> BuchstabTable:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = BuchstabTable()
    return _DEFAULT


def omega(u: float) -> float:
    """Buchstab omega(u) via the shared default table."""
    return default_table().omega(u)


def omega_many(u: np.ndarray) -> np.ndarray:
    return default_table().omega_many(u)


def omega_lower(u: float) -> float:
    """Lower envelope: 1/u, (1+log(u-1))/u, exact-integral branch clamped
    from below at 0.5607 on [3,4), constant 0.5612 beyond."""
    if u < 1.0:
        raise ValueError("omega_lower is defined for u >= 1")
    if u < 2.0:
        return 1.0 / u
    if u < 3.0:
        return float(_closed_form_23(u))
    if u < 4.0:
        return max(_exact_34(u), LOWER_34)
    return LOWER_4


def omega_upper(u: float) -> float:
    """Upper envelope: same branches with the [3,4) value capped at 0.5644
    and constant 0.5617 beyond."""
    if u < 1.0:
        raise ValueError("omega_upper is defined for u >= 1")
    if u < 2.0:
        return 1.0 / u
    if u < 3.0:
        return float(_closed_form_23(u))
    if u < 4.0:
        return min(_exact_34(u), UPPER_34)
    return UPPER_4
