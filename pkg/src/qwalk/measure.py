"""Position distributions, rescaled CDFs, and distances between them.

All distributions are exact squared moduli of state amplitudes; nothing is
sampled.  Rescaled CDFs are right-continuous staircases of position/time and
are the objects compared against the long-time limit laws.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import HalfLineState, LineState, WalkState
from .errors import DegenerateTime

MASS_TOL = 1e-12
COMPONENTS = ("inner0", "inner1", "total")


def _locked_float(arr) -> np.ndarray:
    out = np.asarray(arr, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Distribution:
    """Finding probabilities on a contiguous block of sites.

    ``p0`` and ``p1`` hold the per-coin-state masses; they are ``None`` for
    distributions produced by total-only formulas.  ``p_total`` always sums
    to 1 within ``MASS_TOL``.
    """

    t: int
    xmin: int
    p_total: np.ndarray
    p0: np.ndarray | None = None
    p1: np.ndarray | None = None

    def __post_init__(self) -> None:
        p_total = _locked_float(self.p_total)
        object.__setattr__(self, "p_total", p_total)
        if (self.p0 is None) != (self.p1 is None):
            raise ValueError("p0 and p1 must be supplied together")
        if self.p0 is not None:
            p0 = _locked_float(self.p0)
            p1 = _locked_float(self.p1)
            if p0.shape != p_total.shape or p1.shape != p_total.shape:
                raise ValueError("component arrays must match p_total in shape")
            if float(np.max(np.abs(p0 + p1 - p_total))) > 1e-15:
                raise ValueError("p0 + p1 must equal p_total per position")
            object.__setattr__(self, "p0", p0)
            object.__setattr__(self, "p1", p1)
        if float(p_total.min(initial=0.0)) < -1e-12:
            raise ValueError("probabilities must be nonnegative")
        total = float(p_total.sum())
        if not abs(total - 1.0) <= MASS_TOL:
            raise ValueError(f"distribution mass is {total!r}, expected 1 within {MASS_TOL}")

    @property
    def xmax(self) -> int:
        return self.xmin + self.p_total.shape[0] - 1

    @property
    def positions(self) -> np.ndarray:
        return np.arange(self.xmin, self.xmax + 1)

    def component(self, which: str) -> np.ndarray:
        """Mass array for one of ``inner0``, ``inner1``, ``total``."""
        if which == "total":
            return self.p_total
        if which not in COMPONENTS:
            raise ValueError(f"unknown component {which!r}")
        if self.p0 is None:
            raise ValueError("distribution carries no per-coin-state split")
        return self.p0 if which == "inner0" else self.p1


def distribution(state: WalkState) -> Distribution:
    """Exact finding probabilities of a walk state, split by coin state."""
    amps = state.amps
    p0 = amps[:, 0].real ** 2 + amps[:, 0].imag ** 2
    p1 = amps[:, 1].real ** 2 + amps[:, 1].imag ** 2
    xmin = 0 if isinstance(state, HalfLineState) else state.xmin
    return Distribution(state.t, xmin, p0 + p1, p0, p1)


@dataclass(frozen=True, eq=False)
class RescaledCDF:
    """Right-continuous staircase CDF over the rescaled positions x / t.

    ``mass`` holds cumulative masses at the jump points ``y``; the final
    entry is the total mass of the chosen component (1 for ``total``,
    the sub-probability mass for a single coin state).
    """

    y: np.ndarray
    mass: np.ndarray

    def __post_init__(self) -> None:
        y = _locked_float(self.y)
        mass = _locked_float(self.mass)
        if y.ndim != 1 or y.shape != mass.shape or y.size == 0:
            raise ValueError("jump points and masses must be matching 1-d arrays")
        if np.any(np.diff(y) <= 0):
            raise ValueError("jump points must be strictly increasing")
        if np.any(np.diff(mass) < -1e-15):
            raise ValueError("cumulative masses must be nondecreasing")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "mass", mass)

    @property
    def total(self) -> float:
        return float(self.mass[-1])

    def __call__(self, q, side: str = "right"):
        """Staircase value at q; ``side='left'`` gives the left limit."""
        q_arr = np.asarray(q, dtype=float)
        idx = np.searchsorted(self.y, q_arr, side=side)
        vals = np.concatenate(([0.0], self.mass))[idx]
        return float(vals) if q_arr.ndim == 0 else vals

    def quantile(self, level: float) -> float:
        """Smallest jump point whose cumulative mass reaches ``level``."""
        idx = int(np.searchsorted(self.mass, level - 1e-12, side="left"))
        return float(self.y[min(idx, self.y.size - 1)])


def rescaled_cdf(dist: Distribution, component: str = "total", *, normalize: bool = False) -> RescaledCDF:
    """Staircase CDF of x / t under the chosen component mass.

    Component CDFs are kept as sub-probability CDFs so they can be checked
    literally against the limit laws; pass ``normalize=True`` only for
    diagnostics that want each component rescaled by its own mass.
    """
    if dist.t == 0:
        raise DegenerateTime("rescaling by time requires t >= 1")
    weights = dist.component(component)
    cum = np.cumsum(weights)
    if normalize:
        cum = cum / cum[-1]
    return RescaledCDF(dist.positions / dist.t, cum)


def _eval_cdf(f, grid: np.ndarray, side: str) -> np.ndarray:
    if isinstance(f, RescaledCDF):
        return f(grid, side=side)
    try:
        vals = np.asarray(f(grid), dtype=float)
        if vals.shape == grid.shape:
            return vals
    except (TypeError, ValueError):
        pass
    return np.array([float(f(g)) for g in grid])


def kolmogorov_distance(a: RescaledCDF, b, *, extra_points: int = 1000) -> float:
    """Sup distance between a staircase CDF and a CDF-like callable.

    The sup is taken over all jump points (evaluated from both sides, which
    is where a staircase attains its extremes) plus ``extra_points`` uniform
    guard points across the covered range.
    """
    jumps = a.y
    if isinstance(b, RescaledCDF):
        jumps = np.union1d(jumps, b.y)
    grid = np.union1d(jumps, np.linspace(jumps[0], jumps[-1], extra_points))
    d_right = np.abs(_eval_cdf(a, grid, "right") - _eval_cdf(b, grid, "right"))
    d_left = np.abs(_eval_cdf(a, grid, "left") - _eval_cdf(b, grid, "left"))
    return float(max(d_right.max(), d_left.max()))


def total_variation(a: Distribution, b: Distribution) -> float:
    """Total variation distance, treating positions missing from one side as 0."""
    lo = min(a.xmin, b.xmin)
    hi = max(a.xmax, b.xmax)
    pa = np.zeros(hi - lo + 1)
    pb = np.zeros(hi - lo + 1)
    pa[a.xmin - lo : a.xmax - lo + 1] = a.p_total
    pb[b.xmin - lo : b.xmax - lo + 1] = b.p_total
    return 0.5 * float(np.sum(np.abs(pa - pb)))
