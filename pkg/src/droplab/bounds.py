"""Gaussian approximations and explicit error bounds for thinned scores.

Contains the normal-CDF error estimates for raw and thinned scores, an
empirical Berry-Esseen check against simulated Poisson scores, the explicit
bound that converts a thinned-measure error rate into a raw-measure one (the
"altitude" bound: thinning the training measure exponentiates the test
error), classical Gaussian tail inequalities, and the construction of a
max-margin topic separator from the word-probability matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from .diagnostics import berry_esseen_statistic, model_diagnostics, score_moments
from .linalg import jacobi_eigenvalues
from .stats import dkw_slack, kolmogorov_distance
from .topics import TopicModel

BERRY_ESSEEN_CONSTANT = 4.0


def normal_cdf(x) -> np.ndarray | float:
    """Standard normal CDF via the complementary error function."""
    x = np.asarray(x, dtype=float)
    out = 0.5 * erfc(-x / np.sqrt(2.0))
    return float(out) if out.ndim == 0 else out


def normal_quantile(p: float) -> float:
    """Inverse standard normal CDF (bisection on normal_cdf, |x| <= 40)."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    lo, hi = -40.0, 40.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if normal_cdf(mid) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def gaussian_error_estimate(weights: np.ndarray, intensity: np.ndarray,
                            delta: float) -> tuple[float, float]:
    """Gaussian-approximation error rates on the raw and thinned measures.

    Assumes the positive class is optimal (score mean > 0 up to the caller's
    sign convention).  Thinning scales the mean by 1 - delta but the standard
    deviation by sqrt(1 - delta), so the thinned z-score shrinks by
    sqrt(1 - delta).
    """
    mu, var = score_moments(weights, intensity)
    if var <= 0.0:
        raise ValueError("score variance must be positive")
    z = mu / np.sqrt(var)
    return normal_cdf(-z), normal_cdf(-np.sqrt(1.0 - delta) * z)


@dataclass(frozen=True)
class BerryEsseenReport:
    """Empirical CDF distance of a Poisson score against its Gaussian fit."""

    sup_distance: float
    bound: float
    slack: float
    n_samples: int
    be_stat: float

    @property
    def passed(self) -> bool:
        return self.sup_distance <= self.bound + self.slack


def berry_esseen_check(weights: np.ndarray, intensity: np.ndarray,
                       n_samples: int, rng: np.random.Generator,
                       confidence: float = 0.999,
                       chunk: int = 1_000_000) -> BerryEsseenReport:
    """Compare the empirical CDF of w.x (Poisson counts) with its Gaussian fit.

    The Kolmogorov distance must not exceed the theoretical bound
    4 * sqrt(be_stat) plus a DKW sampling slack at the given confidence.
    """
    w = np.asarray(weights, dtype=float)
    lam = np.asarray(intensity, dtype=float)
    mu, var = score_moments(w, lam)
    be = berry_esseen_statistic(w, lam)
    sigma = np.sqrt(var)
    scores = np.empty(n_samples)
    done = 0
    while done < n_samples:
        b = min(chunk, n_samples - done)
        counts = rng.poisson(lam, size=(b, len(lam)))
        scores[done:done + b] = counts @ w
        done += b
    dist = kolmogorov_distance(scores, lambda s: normal_cdf((s - mu) / sigma))
    return BerryEsseenReport(
        sup_distance=dist,
        bound=BERRY_ESSEEN_CONSTANT * float(np.sqrt(be)),
        slack=dkw_slack(n_samples, confidence),
        n_samples=n_samples, be_stat=be)


@dataclass(frozen=True)
class BoundReport:
    """Evaluated raw-measure error bound for a thinned-measure error rate.

    `inflated` is the thinned rate plus the Berry-Esseen correction; the
    bound is valid (non-vacuous) only while that stays below the normal tail
    at one standard deviation.
    """

    delta: float
    eps_thinned: float
    be_stat: float
    constant: float
    inflated: float
    vacuous: bool
    value: float


def altitude_error_bound(eps_thinned: float, be_stat: float,
                         delta: float) -> BoundReport:
    """Explicit bound on the raw-measure error given the thinned-measure error.

    The leading term exponentiates the (Berry-Esseen-inflated) thinned error
    to the power 1/(1 - delta) with an explicit constant and a slowly varying
    log factor; a residual Berry-Esseen floor is added back.  When the
    inflated error is too large the report is flagged vacuous.
    """
    if not 0.0 <= delta < 1.0:
        raise ValueError("delta must lie in [0, 1)")
    if eps_thinned < 0.0 or be_stat < 0.0:
        raise ValueError("eps_thinned and be_stat must be >= 0")
    c = BERRY_ESSEEN_CONSTANT
    root = float(np.sqrt(be_stat))
    inflated = eps_thinned + c * root / np.sqrt(1.0 - delta)
    validity = normal_cdf(-1.0)
    if inflated > validity:
        return BoundReport(delta=delta, eps_thinned=eps_thinned,
                           be_stat=be_stat, constant=c, inflated=inflated,
                           vacuous=True, value=float("inf"))
    expo = 1.0 / (1.0 - delta)
    ratio = delta / (1.0 - delta)
    coeff = (2.0 ** expo) * np.sqrt(1.0 - delta) * (np.sqrt(4.0 * np.pi) ** ratio)
    log_factor = np.sqrt(-np.log(inflated)) ** ratio
    value = coeff * log_factor * inflated ** expo + c * root
    return BoundReport(delta=delta, eps_thinned=eps_thinned, be_stat=be_stat,
                       constant=c, inflated=inflated, vacuous=False,
                       value=float(value))


@dataclass(frozen=True)
class TailBound:
    t: float
    lower: float
    middle: float
    upper: float

    @property
    def strict(self) -> bool:
        return self.lower < self.middle < self.upper


@dataclass(frozen=True)
class TailCheckReport:
    entries: tuple[TailBound, ...]

    @property
    def passed(self) -> bool:
        return all(e.strict for e in self.entries)


def gaussian_tail_check(t_grid) -> TailCheckReport:
    """Verify t/(t^2+1) < sqrt(2 pi) e^{t^2/2} Phi(-t) < 1/t on a grid of t > 0."""
    entries = []
    for t in np.asarray(t_grid, dtype=float):
        if t <= 0:
            raise ValueError("tail inequalities require t > 0")
        middle = float(np.sqrt(2.0 * np.pi) * np.exp(t * t / 2.0) * normal_cdf(-t))
        entries.append(TailBound(t=float(t), lower=float(t / (t * t + 1.0)),
                                 middle=middle, upper=float(1.0 / t)))
    return TailCheckReport(entries=tuple(entries))


class RankDeficientError(ValueError):
    """The word-probability matrix has fewer independent columns than topics."""


@dataclass(frozen=True)
class MarginReport:
    """Margin condition evaluation and the constructed topic separator."""

    holds: bool
    threshold: float
    min_singular_value: float
    signs: np.ndarray
    separator: np.ndarray
    separator_norm: float
    norm_bound: float
    margins: np.ndarray
    max_margin_error: float


def margin_condition(model: TopicModel, delta: float,
                     rank_tol: float = 1e-12) -> MarginReport:
    """Check that topics are separable with margin and build the separator.

    The condition compares the smallest singular value of the d x T
    word-probability matrix against sqrt(T / ((1-delta) * min_length)) times
    (1 + sqrt(log+ (min_length / 2 pi))).  The separator is the minimum-norm
    vector giving every signed topic center a unit margin; it is returned
    normalized, with the achieved margins and norm bound reported.
    """
    if not 0.0 <= delta < 1.0:
        raise ValueError("delta must lie in [0, 1)")
    diag = model_diagnostics(model)
    pi = diag.word_prob_matrix
    n_topics = pi.shape[1]
    lam = diag.min_length
    log_plus = max(np.log(lam / (2.0 * np.pi)), 0.0)
    threshold = float(np.sqrt(n_topics / ((1.0 - delta) * lam))
                      * (1.0 + np.sqrt(log_plus)))
    holds = diag.min_singular_value >= threshold

    gram = pi.T @ pi
    eigs = jacobi_eigenvalues(gram)
    if eigs[0] <= rank_tol * max(eigs[-1], 1.0):
        raise RankDeficientError(
            "word-probability matrix does not have full column rank")
    signs = np.where(diag.majority_labels == 1, 1.0, -1.0)
    z = np.linalg.solve(gram, signs)
    w_star = pi @ z
    margins = signs * (pi.T @ w_star)
    norm = float(np.linalg.norm(w_star))
    ones = np.ones(n_topics)
    norm_bound = float(np.sqrt(ones @ np.linalg.solve(gram, ones)))
    return MarginReport(
        holds=bool(holds), threshold=threshold,
        min_singular_value=diag.min_singular_value,
        signs=signs, separator=w_star / norm, separator_norm=norm,
        norm_bound=norm_bound, margins=margins,
        max_margin_error=float(np.max(np.abs(margins - 1.0))))
