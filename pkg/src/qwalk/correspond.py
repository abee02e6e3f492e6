"""Amplitude-level and distribution-level links between the two walks.

A half-line walk launched from a localized coin state (alpha, beta) is fully
encoded in a line walk launched from the associated real two-site state of
:func:`qwalk.core.make_delocalized_initial`.  Each half-line amplitude is a
combination of one line amplitude at a nonnegative site and one at the
mirrored site -x-1, with the index map alternating with the parity of the
current time.  Folding the line distribution over the same mirror therefore
reproduces the half-line distribution position by position.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    HalfLineState,
    LineState,
    Protocol,
    iterate_steps,
    make_delocalized_initial,
    make_localized_initial,
)
from .errors import ParityContractError
from .measure import Distribution, distribution


def _padded_components(line: LineState, lo: int, hi: int) -> tuple[np.ndarray, np.ndarray]:
    """Coin-0/coin-1 amplitudes over positions lo..hi, zero outside the support."""
    g = np.zeros(hi - lo + 1, dtype=np.complex128)
    d = np.zeros(hi - lo + 1, dtype=np.complex128)
    src_lo = max(lo, line.xmin)
    src_hi = min(hi, line.xmax)
    if src_lo <= src_hi:
        sl = slice(src_lo - line.xmin, src_hi - line.xmin + 1)
        dst = slice(src_lo - lo, src_hi - lo + 1)
        g[dst] = line.amps[sl, 0]
        d[dst] = line.amps[sl, 1]
    return g, d


def halfline_amps_from_line(line: LineState, *, parity: int | None = None) -> HalfLineState:
    """Reconstruct the half-line state at time t from the line state at time t.

    The reconstruction pairs each site x with the mirrored site -x-1 and
    dispatches on the parity of t (and of x) internally; ``parity`` only lets
    a caller assert which branch it expects.
    """
    t = line.t
    if parity is not None and parity != t % 2:
        raise ParityContractError(
            f"state has time {t} (parity {t % 2}), caller requested parity {parity}"
        )
    g, d = _padded_components(line, -(t + 1), t)
    off = t + 1
    xs = np.arange(t + 1)
    mirror = -xs - 1
    g_x = g[xs + off]
    d_x = d[xs + off]
    g_m = g[mirror + off]
    d_m = d[mirror + off]
    even_x = xs % 2 == 0
    if t % 2 == 0:
        alpha = np.where(even_x, g_x - 1j * d_m, d_m + 1j * g_x)
        beta = np.where(even_x, d_x + 1j * g_m, -g_m + 1j * d_x)
    else:
        alpha = np.where(even_x, -d_m + 1j * g_x, g_x + 1j * d_m)
        beta = np.where(even_x, g_m + 1j * d_x, d_x - 1j * g_m)
    return HalfLineState(t, np.column_stack((alpha, beta)))


def halfline_dist_from_line(line_dist: Distribution) -> Distribution:
    """Fold a line distribution onto the half line.

    Site x (x >= 0) collects the mass at x and at the mirrored site -x-1,
    with the two coin states swapped on the mirrored contribution.  The fold
    is a bijection on positions, so mass is preserved exactly.  Total-only
    distributions fold to total-only distributions.
    """
    hi = max(line_dist.xmax, -line_dist.xmin - 1)
    xs = np.arange(hi + 1)

    def padded(arr: np.ndarray) -> np.ndarray:
        out = np.zeros(2 * hi + 2)
        out[line_dist.xmin + hi + 1 : line_dist.xmax + hi + 2] = arr
        return out

    off = hi + 1
    mirror = -xs - 1
    if line_dist.p0 is not None:
        q0 = padded(line_dist.p0)
        q1 = padded(line_dist.p1)
        p0 = q1[mirror + off] + q0[xs + off]
        p1 = q0[mirror + off] + q1[xs + off]
        return Distribution(line_dist.t, 0, p0 + p1, p0, p1)
    q = padded(line_dist.p_total)
    return Distribution(line_dist.t, 0, q[mirror + off] + q[xs + off])


@dataclass(frozen=True)
class CorrespondenceReport:
    """Residuals of the side-by-side reconstruction check up to a horizon.

    ``amp_residuals[t]`` is the largest amplitude difference between the
    reconstructed and the directly evolved half-line state at time t;
    ``prob_residuals[t]`` the largest per-position difference between the
    folded line distribution and the direct half-line distribution.
    """

    T: int
    max_amp_residual: float
    max_prob_residual: float
    amp_residuals: tuple[float, ...]
    prob_residuals: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "T": self.T,
            "max_amp_residual": self.max_amp_residual,
            "max_prob_residual": self.max_prob_residual,
            "series": [
                {"t": t, "amp": a, "prob": p}
                for t, (a, p) in enumerate(zip(self.amp_residuals, self.prob_residuals))
            ],
        }


def _amp_residual(direct: HalfLineState, reconstructed: HalfLineState) -> float:
    return float(np.max(np.abs(reconstructed.amps - direct.amps)))


def _prob_residual(direct: Distribution, folded: Distribution) -> float:
    res = np.max(np.abs(folded.p_total - direct.p_total))
    res = max(res, np.max(np.abs(folded.p0 - direct.p0)))
    res = max(res, np.max(np.abs(folded.p1 - direct.p1)))
    return float(res)


def verify_amplitude_correspondence(
    protocol: Protocol, alpha: complex, beta: complex, T: int
) -> CorrespondenceReport:
    """Evolve both walks side by side and record reconstruction residuals for t <= T."""
    if T < 0:
        raise ValueError(f"horizon must be nonnegative, got {T}")
    hl = make_localized_initial(alpha, beta)
    ln = make_delocalized_initial(alpha, beta)
    hl_states = [hl] + list(iterate_steps(protocol, hl, T))
    ln_states = [ln] + list(iterate_steps(protocol, ln, T))
    amp_res = []
    prob_res = []
    for direct, line in zip(hl_states, ln_states):
        amp_res.append(_amp_residual(direct, halfline_amps_from_line(line)))
        prob_res.append(
            _prob_residual(distribution(direct), halfline_dist_from_line(distribution(line)))
        )
    return CorrespondenceReport(
        T=T,
        max_amp_residual=max(amp_res),
        max_prob_residual=max(prob_res),
        amp_residuals=tuple(amp_res),
        prob_residuals=tuple(prob_res),
    )


def max_imaginary_drift(protocol: Protocol, alpha: complex, beta: complex, T: int) -> float:
    """Largest imaginary part appearing in the associated line walk up to time T.

    The two-site initial state is real and the coins are real matrices, so
    the line amplitudes must stay real; this measures how well that holds.
    """
    state = make_delocalized_initial(alpha, beta)
    worst = float(np.max(np.abs(state.amps.imag)))
    for state in iterate_steps(protocol, state, T):
        worst = max(worst, float(np.max(np.abs(state.amps.imag))))
    return worst
