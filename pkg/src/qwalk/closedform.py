"""Exact single-coin probabilities for the reflecting walk, without evolution.

For a walk driven by one coin angle theta the finding probability at time t
splits into four families indexed by the gap t - x:

* gap 0 (x = t): a pure boundary product c^(2(t-1)) |s*alpha - c*beta|^2;
* gap 1 (x = t - 1): the companion boundary product c^(2(t-1)) |c*alpha + s*beta|^2
  (this cell is evaluated at x = t - 1; the interior sums below start one
  gap further in and never cover it);
* even gap 2m: a double sum over j1, j2 = 1..m of signed ratio powers
  (-s^2/c^2)^(j1+j2) weighted by four binomial coefficients and a quadratic
  form in (|alpha|^2, |beta|^2, Re(alpha * conj(beta)));
* odd gap 2m + 1: the same sum with the quadratic form's coefficients
  swapped between |alpha|^2 and |beta|^2 and the cross term negated.

The summands alternate in sign and grow far beyond the final probability, so
accumulation is error-sensitive.  Up to t = 20 exact integer binomials with
an error-free float summation keep the absolute error below ~1e-13; beyond
that the terms are accumulated in arbitrary precision and rounded once at
the end, because the cancellation (term magnitudes up to ~1e12 at t = 60 for
|s/c| ~ sqrt(3)) would otherwise eat double precision down to ~1e-5.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb, fsum

import mpmath as mp
import numpy as np

from .core import (
    Protocol,
    evolve,
    iterate_steps,
    make_line_localized_initial,
    make_localized_initial,
)
from .errors import DegenerateAngle, DomainError, NormError
from .measure import Distribution, distribution

_FLOAT_T_MAX = 20


def _check_query_angle(theta: float) -> None:
    if min(abs(math.cos(theta)), abs(math.sin(theta))) < 1e-12:
        raise DegenerateAngle(
            f"theta={theta!r} is within 1e-12 of a multiple of pi/2, "
            "which the closed forms exclude"
        )


@dataclass(frozen=True)
class ClosedFormQuery:
    """One probability evaluation request: angle, initial coin state, time, position."""

    theta: float
    alpha: complex
    beta: complex
    t: int
    x: int

    def __post_init__(self) -> None:
        a, b = complex(self.alpha), complex(self.beta)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)
        mass = abs(a) ** 2 + abs(b) ** 2
        if not abs(mass - 1.0) <= 1e-12:
            raise NormError(f"initial coin state has mass {mass!r}, expected 1 within 1e-12")
        _check_query_angle(self.theta)
        if self.t < 1:
            raise ValueError(f"time must be >= 1, got {self.t}")


def _interior_sum_float(
    t: int, m: int, c: float, s: float, aa: float, bb: float, re_ab: float, odd_gap: bool
) -> float:
    c2 = c * c
    s2 = s * s
    ratio = -s2 / c2
    w_a = m * m * c2 + (t - m) * (t - m) * s2
    w_b = m * m * s2 + (t - m) * (t - m) * c2
    cs = c * s
    terms = []
    for j1 in range(1, m + 1):
        w1 = comb(m - 1, j1 - 1) * comb(t - m - 1, j1 - 1)
        if w1 == 0:
            continue
        for j2 in range(1, m + 1):
            w2 = comb(m - 1, j2 - 1) * comb(t - m - 1, j2 - 1)
            if w2 == 0:
                continue
            jj = j1 + j2
            cross = ((t - 2 * m) * jj + 2 * t * (2 * m - t) * s2) * cs * re_ab
            if odd_gap:
                inner = (w_b - jj * m) * aa + (w_a - jj * (t - m)) * bb + (-cross + j1 * j2) / s2
            else:
                inner = (w_a - jj * (t - m)) * aa + (w_b - jj * m) * bb + (cross + j1 * j2) / s2
            terms.append(ratio**jj * (w1 * w2) * inner / (j1 * j2))
    return c2 ** (t - 1) * fsum(terms)


def _interior_sum_mp(
    t: int, m: int, theta: float, aa: float, bb: float, re_ab: float, odd_gap: bool
) -> float:
    with mp.workdps(30 + t):
        c = mp.cos(theta)
        s = mp.sin(theta)
        c2 = c * c
        s2 = s * s
        ratio = -s2 / c2
        w_a = m * m * c2 + (t - m) * (t - m) * s2
        w_b = m * m * s2 + (t - m) * (t - m) * c2
        cs = c * s
        aa_mp, bb_mp, re_mp = mp.mpf(aa), mp.mpf(bb), mp.mpf(re_ab)
        terms = []
        for j1 in range(1, m + 1):
            w1 = comb(m - 1, j1 - 1) * comb(t - m - 1, j1 - 1)
            if w1 == 0:
                continue
            for j2 in range(1, m + 1):
                w2 = comb(m - 1, j2 - 1) * comb(t - m - 1, j2 - 1)
                if w2 == 0:
                    continue
                jj = j1 + j2
                cross = ((t - 2 * m) * jj + 2 * t * (2 * m - t) * s2) * cs * re_mp
                if odd_gap:
                    inner = (w_b - jj * m) * aa_mp + (w_a - jj * (t - m)) * bb_mp + (-cross + j1 * j2) / s2
                else:
                    inner = (w_a - jj * (t - m)) * aa_mp + (w_b - jj * m) * bb_mp + (cross + j1 * j2) / s2
                terms.append(ratio**jj * (w1 * w2) * inner / (j1 * j2))
        return float(c2 ** (t - 1) * mp.fsum(terms))


def _probability(theta: float, alpha: complex, beta: complex, t: int, x: int) -> float:
    if x < 0 or x > t:
        raise DomainError(f"position {x} outside the reachable range 0..{t}")
    c = math.cos(theta)
    s = math.sin(theta)
    prefactor = (c * c) ** (t - 1)
    if x == t:
        return prefactor * abs(s * alpha - c * beta) ** 2
    if x == t - 1:
        return prefactor * abs(c * alpha + s * beta) ** 2
    gap = t - x
    odd_gap = gap % 2 == 1
    m = (gap - 1) // 2 if odd_gap else gap // 2
    aa = abs(alpha) ** 2
    bb = abs(beta) ** 2
    re_ab = (alpha * beta.conjugate()).real
    if t <= _FLOAT_T_MAX:
        return _interior_sum_float(t, m, c, s, aa, bb, re_ab, odd_gap)
    return _interior_sum_mp(t, m, theta, aa, bb, re_ab, odd_gap)


def exact_probability(q: ClosedFormQuery) -> float:
    """Closed-form finding probability at position q.x and time q.t."""
    return _probability(q.theta, q.alpha, q.beta, q.t, q.x)


def closedform_distribution(theta: float, alpha: complex, beta: complex, t: int) -> Distribution:
    """Closed-form distribution over the full support 0..t (totals only)."""
    ClosedFormQuery(theta, alpha, beta, t, 0)  # validate inputs once
    a, b = complex(alpha), complex(beta)
    vals = np.array([_probability(theta, a, b, t, x) for x in range(t + 1)])
    return Distribution(t, 0, vals)


@dataclass(frozen=True)
class FoldingReport:
    """Outcome of folding a localized line walk onto the half line.

    ``max_residual`` is the largest per-position difference between the
    half-line probability and the sum of the line probabilities at x and
    -x-1; ``max_overlap`` is the largest value of min(P(x), P(-x-1)), which
    must vanish because a localized line walk only reaches positions of one
    parity at each time.
    """

    theta: float
    t: int
    max_residual: float
    max_overlap: float

    @property
    def parity_ok(self) -> bool:
        return self.max_overlap == 0.0


def _fold_once(hl_dist: Distribution, ln_dist: Distribution) -> tuple[float, float]:
    t = hl_dist.t
    p_line = np.zeros(2 * t + 2)
    off = t + 1
    p_line[ln_dist.xmin + off : ln_dist.xmax + off + 1] = ln_dist.p_total
    xs = np.arange(t + 1)
    left = p_line[-xs - 1 + off]
    right = p_line[xs + off]
    residual = float(np.max(np.abs(hl_dist.p_total - (left + right))))
    overlap = float(np.max(np.minimum(left, right)))
    return residual, overlap


def folding_relation_check(theta: float, alpha: complex, beta: complex, t: int) -> FoldingReport:
    """Compare the half-line distribution at time t with the folded line distribution.

    Both walks run with the single coin theta from the same localized coin
    state; the line walk starts at site 0 (not from the two-site state used
    by the amplitude reconstruction).
    """
    proto = Protocol(theta, theta)
    hl = evolve(proto, make_localized_initial(alpha, beta), t)
    ln = evolve(proto, make_line_localized_initial(alpha, beta), t)
    residual, overlap = _fold_once(distribution(hl), distribution(ln))
    return FoldingReport(theta, t, residual, overlap)


def folding_relation_sweep(theta: float, alpha: complex, beta: complex, T: int) -> FoldingReport:
    """Worst folding residual and parity overlap over all times t <= T."""
    proto = Protocol(theta, theta)
    hl = make_localized_initial(alpha, beta)
    ln = make_line_localized_initial(alpha, beta)
    worst_res, worst_ov = _fold_once(distribution(hl), distribution(ln))
    hl_steps = iterate_steps(proto, hl, T)
    ln_steps = iterate_steps(proto, ln, T)
    for hl_state, ln_state in zip(hl_steps, ln_steps):
        res, ov = _fold_once(distribution(hl_state), distribution(ln_state))
        worst_res = max(worst_res, res)
        worst_ov = max(worst_ov, ov)
    return FoldingReport(theta, T, worst_res, worst_ov)
