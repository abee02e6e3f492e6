"""States and unitary evolution of 2-period coined walks on the half line and the line.

The walker carries a two-level coin.  One update applies a real symmetric
coin rotation at every site and then a conditional shift: coin state 0 moves
one site to the left, coin state 1 one site to the right.  On the half line
the left-moving component at site 0 cannot leave the lattice; it is reflected
into coin state 1 at site 0 instead.  The protocol alternates two coin
angles: a step taken from an even time uses the first coin, a step taken
from an odd time uses the second.

States are immutable values.  Step functions return fresh states and never
mutate or re-normalize their input; total mass is validated at construction
(tolerance 1e-12) so any drift would surface instead of being hidden.  The
amplitude arrays cover exactly the reachable support, which grows by one
site per step, so there is no truncation error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NormError

NORM_TOL = 1e-12
TWO_PI = 2.0 * math.pi


def _locked(amps: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(amps, dtype=np.complex128)
    out.setflags(write=False)
    return out


def _checked_mass(amps: np.ndarray, what: str) -> float:
    parts = amps.view(np.float64).reshape(-1)
    mass = float(parts @ parts)
    # NaN/Inf amplitudes fail this comparison as well.
    if not abs(mass - 1.0) <= NORM_TOL:
        raise NormError(f"{what} has total mass {mass!r}, expected 1 within {NORM_TOL}")
    return mass


@dataclass(frozen=True)
class CoinOperator:
    """Real symmetric coin [[c, s], [s, -c]] with c = cos(theta), s = sin(theta)."""

    c: float
    s: float

    def __post_init__(self) -> None:
        r = self.c * self.c + self.s * self.s
        if not abs(r - 1.0) <= 1e-14:
            raise ValueError(f"coin entries must satisfy c^2 + s^2 = 1, got {r!r}")
        m = np.array([[self.c, self.s], [self.s, -self.c]])
        m.setflags(write=False)
        object.__setattr__(self, "_matrix", m)

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix


def make_coin(theta: float) -> CoinOperator:
    """Coin operator for an angle in [0, 2*pi)."""
    if not 0.0 <= theta < TWO_PI:
        raise ValueError(f"theta must lie in [0, 2*pi), got {theta!r}")
    return CoinOperator(math.cos(theta), math.sin(theta))


@dataclass(frozen=True)
class Protocol:
    """Pair of coin angles; even-time steps use theta1, odd-time steps theta2."""

    theta1: float
    theta2: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "_coins", (make_coin(self.theta1), make_coin(self.theta2)))

    @property
    def coin1(self) -> CoinOperator:
        return self._coins[0]

    @property
    def coin2(self) -> CoinOperator:
        return self._coins[1]

    def coin_for(self, t: int) -> CoinOperator:
        """Coin applied in the step that takes time t to time t + 1."""
        return self._coins[t % 2]


@dataclass(frozen=True, eq=False)
class HalfLineState:
    """Walker state on {0, 1, 2, ...} at time t.

    ``amps[x, 0]`` and ``amps[x, 1]`` are the coin-0 and coin-1 amplitudes at
    position x.  The array covers exactly the reachable sites {0, ..., t};
    every site beyond is identically zero.
    """

    t: int
    amps: np.ndarray
    mass: float = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.t < 0:
            raise ValueError(f"time must be nonnegative, got {self.t}")
        amps = _locked(self.amps)
        if amps.shape != (self.t + 1, 2):
            raise ValueError(f"amplitude array must have shape ({self.t + 1}, 2), got {amps.shape}")
        object.__setattr__(self, "amps", amps)
        object.__setattr__(self, "mass", _checked_mass(amps, "half-line state"))

    @property
    def positions(self) -> np.ndarray:
        return np.arange(self.t + 1)


@dataclass(frozen=True, eq=False)
class LineState:
    """Walker state on the integers at time t.

    ``amps[i, 0]`` and ``amps[i, 1]`` are the coin-0 and coin-1 amplitudes at
    position ``xmin + i``.  The array covers the contiguous block of sites
    the walk can have reached.
    """

    t: int
    xmin: int
    amps: np.ndarray
    mass: float = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.t < 0:
            raise ValueError(f"time must be nonnegative, got {self.t}")
        amps = _locked(self.amps)
        if amps.ndim != 2 or amps.shape[0] < 1 or amps.shape[1] != 2:
            raise ValueError(f"amplitude array must have shape (n, 2), got {amps.shape}")
        object.__setattr__(self, "amps", amps)
        object.__setattr__(self, "mass", _checked_mass(amps, "line state"))

    @property
    def xmax(self) -> int:
        return self.xmin + self.amps.shape[0] - 1

    @property
    def positions(self) -> np.ndarray:
        return np.arange(self.xmin, self.xmax + 1)


def make_localized_initial(alpha: complex, beta: complex) -> HalfLineState:
    """Half-line state with all mass at site 0 in coin state (alpha, beta)."""
    a, b = complex(alpha), complex(beta)
    return HalfLineState(0, np.array([[a, b]]))


def make_line_initial(
    gamma_m1: complex, delta_m1: complex, gamma_0: complex, delta_0: complex
) -> LineState:
    """Line state supported on sites -1 and 0 with the given coin amplitudes."""
    amps = np.array([[gamma_m1, delta_m1], [gamma_0, delta_0]], dtype=np.complex128)
    return LineState(0, -1, amps)


def make_delocalized_initial(alpha: complex, beta: complex) -> LineState:
    """Two-site real line state associated with the localized coin state (alpha, beta).

    Site -1 receives (Im(beta), -Im(alpha)) and site 0 receives
    (Re(alpha), Re(beta)), so all four amplitudes are real and the real and
    imaginary parts of the original pair partition the mass.  A line walk
    started here reconstructs the half-line walk amplitude by amplitude (see
    :mod:`qwalk.correspond`).
    """
    a, b = complex(alpha), complex(beta)
    _checked_mass(np.array([[a, b]]), "initial coin state")
    return make_line_initial(b.imag, -a.imag, a.real, b.real)


def make_line_localized_initial(alpha: complex, beta: complex) -> LineState:
    """Line state with all mass at site 0 in coin state (alpha, beta)."""
    a, b = complex(alpha), complex(beta)
    return LineState(0, 0, np.array([[a, b]]))


def _coin_apply(amps: np.ndarray, coin: CoinOperator) -> tuple[np.ndarray, np.ndarray]:
    a = amps[:, 0]
    b = amps[:, 1]
    ca = a * coin.c
    ca += b * coin.s
    cb = a * coin.s
    cb -= b * coin.c
    return ca, cb


def halfline_step(state: HalfLineState, coin: CoinOperator) -> HalfLineState:
    """One coin-then-shift update; the edge reflects coin 0 into coin 1 at site 0."""
    ca, cb = _coin_apply(state.amps, coin)
    out = np.zeros((state.t + 2, 2), dtype=np.complex128)
    out[: state.t, 0] = ca[1:]  # coin 0 hops left for x >= 1
    out[1:, 1] = cb  # coin 1 hops right
    out[0, 1] = ca[0]  # reflected edge cell
    return HalfLineState(state.t + 1, out)


def line_step(state: LineState, coin: CoinOperator) -> LineState:
    """One coin-then-shift update on the line; the support widens by one per side."""
    ca, cb = _coin_apply(state.amps, coin)
    n = state.amps.shape[0]
    out = np.zeros((n + 2, 2), dtype=np.complex128)
    out[:n, 0] = ca  # coin 0 hops left
    out[2:, 1] = cb  # coin 1 hops right
    return LineState(state.t + 1, state.xmin - 1, out)


WalkState = HalfLineState | LineState


def _step(protocol: Protocol, state: WalkState) -> WalkState:
    coin = protocol.coin_for(state.t)
    if isinstance(state, HalfLineState):
        return halfline_step(state, coin)
    return line_step(state, coin)


def iterate_steps(protocol: Protocol, state: WalkState, steps: int):
    """Yield the state after each of ``steps`` successive updates."""
    if steps < 0:
        raise ValueError(f"steps must be nonnegative, got {steps}")
    for _ in range(steps):
        state = _step(protocol, state)
        yield state


def evolve(protocol: Protocol, state: WalkState, steps: int) -> WalkState:
    """State after ``steps`` updates of the alternating-coin evolution."""
    for state in iterate_steps(protocol, state, steps):
        pass
    return state
