"""Experiment harness: learning curves, influence geometry, posterior
preservation checks, and the thinning-exponent sweep.

Every cell of every grid owns a random stream derived from the master seed
and the cell coordinates, so results are independent of scheduling and of
which other cells run, and any cell can be reproduced in isolation.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import serialize
from .bounds import BoundReport, altitude_error_bound, gaussian_error_estimate
from .classifiers import (LinearClassifier, TrainConfig, error_by_topic,
                          evaluate_error, recalibrate_intercept,
                          train_logistic, train_logistic_dropout,
                          train_naive_bayes)
from .diagnostics import berry_esseen_statistic, score_moments
from .dropout import DropoutConfig, dropout_posterior, thin_counts
from .streams import make_rng, seed_fingerprint
from .topics import (DiscreteSampler, DocumentBatch, GenerativeSampler, Topic,
                     TopicModel, bayes_posterior, enumerate_counts,
                     sample_documents)

VERSION = "0.1.0"

_CELL_TAG = "curve-cell"
_TEST_TAG = "curve-test"


@dataclass(frozen=True)
class CurveSpec:
    """Grid specification for a learning-curve run."""

    sampler: GenerativeSampler
    n_grid: tuple[int, ...] = (100, 300, 1000, 3000, 10000)
    delta_grid: tuple[float, ...] = (0.0, 0.5, 0.75, 0.9, 0.95, 1.0)
    trials: int = 10
    test_size: int = 100_000
    train_cfg: TrainConfig = field(default_factory=TrainConfig)
    nb_smoothing: float = 1.0
    master_seed: int = 0
    sampler_name: str = ""

    def __post_init__(self):
        if not self.n_grid or not self.delta_grid:
            raise ValueError("n_grid and delta_grid must be non-empty")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if any(n < 1 for n in self.n_grid) or self.test_size < 1:
            raise ValueError("sizes must be positive")
        if any(not 0.0 <= d <= 1.0 for d in self.delta_grid):
            raise ValueError("delta values must lie in [0, 1]")

    def describe(self) -> dict:
        name = self.sampler_name or getattr(self.sampler, "name", "custom")
        return {
            "model": name,
            "model_params": dict(getattr(self.sampler, "params", {})),
            "n_grid": list(self.n_grid),
            "delta_grid": list(self.delta_grid),
            "trials": self.trials,
            "test_size": self.test_size,
            "l2_weight": self.train_cfg.l2_weight,
            "epochs": self.train_cfg.epochs,
            "batch_size": self.train_cfg.batch_size,
            "step_size": self.train_cfg.step_size,
            "mc_replicates": self.train_cfg.dropout.mc_replicates,
            "nb_smoothing": self.nb_smoothing,
            "master_seed": self.master_seed,
        }


@dataclass(frozen=True)
class CurveRecord:
    n: int
    delta: float
    trial: int
    test_error: float
    train_error: float
    wall_time_ms: float
    seed: int
    note: str = ""


@dataclass(frozen=True)
class CurveResult:
    spec: CurveSpec
    records: tuple[CurveRecord, ...]

    def cell_mean(self, n: int, delta: float) -> float:
        errs = [r.test_error for r in self.records
                if r.n == n and r.delta == delta and not np.isnan(r.test_error)]
        return float(np.mean(errs)) if errs else float("nan")


def _train_cell(train: DocumentBatch, delta: float, spec: CurveSpec,
                train_seed: int) -> LinearClassifier:
    if delta >= 1.0:
        clf = train_naive_bayes(train, smoothing=spec.nb_smoothing)
    else:
        cfg = replace(spec.train_cfg, seed=train_seed,
                      dropout=replace(spec.train_cfg.dropout, delta=delta))
        if delta == 0.0:
            clf = train_logistic(train, cfg)
        else:
            clf = train_logistic_dropout(train, cfg)
    return recalibrate_intercept(clf, train)


def _run_cell(spec: CurveSpec, n: int, delta_idx: int, trial: int,
              test: DocumentBatch) -> CurveRecord:
    # streams derive from the delta value (not its grid position) so a cell's
    # record never depends on which other cells are in the grid
    delta = spec.delta_grid[delta_idx]
    started = time.perf_counter()
    rng = make_rng(spec.master_seed, _CELL_TAG, n, delta, trial)
    fingerprint = seed_fingerprint(spec.master_seed, _CELL_TAG, n, delta, trial)
    train_seed = int(rng.integers(0, 2 ** 31 - 1))
    note = ""
    try:
        train = sample_documents(spec.sampler, n, rng)
        clf = _train_cell(train, delta, spec, train_seed)
        train_error = evaluate_error(clf, train)
        test_error = evaluate_error(clf, test)
    except ValueError as exc:
        train_error = test_error = float("nan")
        note = f"{type(exc).__name__}: {exc}"
    wall = (time.perf_counter() - started) * 1000.0
    return CurveRecord(n=n, delta=delta, trial=trial, test_error=test_error,
                       train_error=train_error, wall_time_ms=wall,
                       seed=fingerprint, note=note)


def run_learning_curves(spec: CurveSpec, threads: int = 1) -> CurveResult:
    """Run the full (n, delta, trial) grid.

    Each trial shares one held-out test sample across its cells so grid
    comparisons are paired; each cell samples its own training set, trains
    (delta = 1 means naive Bayes), recalibrates the intercept on the training
    set, and records train/test error.  Cell failures are recorded, not fatal.
    """
    records: dict[tuple[int, int, int], CurveRecord] = {}
    for trial in range(spec.trials):
        test_rng = make_rng(spec.master_seed, _TEST_TAG, trial)
        test = sample_documents(spec.sampler, spec.test_size, test_rng)
        cells = [(n, di, trial)
                 for n in spec.n_grid
                 for di in range(len(spec.delta_grid))]
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                futures = {cell: pool.submit(_run_cell, spec, cell[0],
                                             cell[1], cell[2], test)
                           for cell in cells}
                for cell, fut in futures.items():
                    records[cell] = fut.result()
        else:
            for cell in cells:
                records[cell] = _run_cell(spec, cell[0], cell[1], cell[2], test)
    ordered = [records[(n, di, t)]
               for n in spec.n_grid
               for di in range(len(spec.delta_grid))
               for t in range(spec.trials)]
    return CurveResult(spec=spec, records=tuple(ordered))


CSV_HEADER = "n,delta,trial,test_error,train_error,wall_time_ms,seed"


def curve_csv(result: CurveResult, include_timing: bool = False) -> str:
    """Render curve records as CSV with a reproducibility header.

    Timings are written as 0 unless include_timing is set, keeping the
    default output byte-identical across reruns with the same seed.
    """
    ff = serialize.format_float
    lines = [
        f"# droplab {VERSION}",
        "# config: " + serialize.dumps(result.spec.describe()),
        f"# seed: {result.spec.master_seed}",
        CSV_HEADER,
    ]
    for r in result.records:
        wall = ff(r.wall_time_ms) if include_timing else "0"
        lines.append(",".join([
            str(r.n), ff(r.delta), str(r.trial), ff(r.test_error),
            ff(r.train_error), wall, str(r.seed),
        ]))
    return "\n".join(lines) + "\n"


def curve_summary(result: CurveResult) -> dict:
    """Per-cell mean and standard error of the test error."""
    cells = []
    for n in result.spec.n_grid:
        for delta in result.spec.delta_grid:
            rows = [r for r in result.records if r.n == n and r.delta == delta]
            errs = np.array([r.test_error for r in rows])
            ok = errs[~np.isnan(errs)]
            k = len(ok)
            mean = float(np.mean(ok)) if k else None
            se = float(np.std(ok, ddof=1) / np.sqrt(k)) if k > 1 else None
            failed = [r.note for r in rows if r.note]
            cells.append({
                "n": n, "delta": delta, "trials": len(rows),
                "mean_test_error": mean, "se_test_error": se,
                "mean_train_error":
                    float(np.nanmean([r.train_error for r in rows]))
                    if k else None,
                "failures": failed,
            })
    return {
        "meta": {"version": VERSION, "config": result.spec.describe(),
                 "seed": result.spec.master_seed},
        "cells": cells,
    }


@dataclass(frozen=True)
class BiasCheckReport:
    """Worst posterior gap between the thinned and raw models."""

    equal_length: bool
    v_budget: int
    max_gap: dict[float, float]
    worst_vector: dict[float, tuple[int, ...]]

    def passed(self, tol: float = 1e-10) -> bool:
        return self.equal_length and all(g <= tol for g in self.max_gap.values())


def run_bias_check(model: TopicModel, delta_grid, v_budget: int
                   ) -> BiasCheckReport:
    """Compare thinned-model posteriors with raw posteriors on a count grid.

    For models whose topics share one expected document length the gap is
    zero (thinning preserves the posterior field); models with unequal
    lengths report their nonzero gap as a negative control.
    """
    lengths = model.doc_lengths
    equal = bool(np.max(lengths) - np.min(lengths) <= 1e-9 * np.max(lengths))
    grid = enumerate_counts(model.vocab_size, v_budget)
    max_gap: dict[float, float] = {}
    worst: dict[float, tuple[int, ...]] = {}
    for delta in delta_grid:
        gap = -1.0
        arg = None
        for v in grid:
            g = abs(dropout_posterior(model, float(delta), v)
                    - bayes_posterior(model, v))
            if g > gap:
                gap, arg = g, tuple(int(c) for c in v)
        max_gap[float(delta)] = gap
        worst[float(delta)] = arg
    return BiasCheckReport(equal_length=equal, v_budget=v_budget,
                           max_gap=max_gap, worst_vector=worst)


@dataclass(frozen=True)
class SweepConfig:
    """One (weights, intensity, delta) point of the exponent sweep."""

    weights: tuple[float, ...]
    intensity: tuple[float, ...]
    delta: float


@dataclass(frozen=True)
class SweepResult:
    config: SweepConfig
    eps: float
    eps_thinned: float
    se_eps: float
    se_eps_thinned: float
    gaussian_eps: float
    gaussian_eps_thinned: float
    bound: BoundReport
    bound_holds: bool | None
    exponent: float
    exponent_target: float


def run_altitude_sweep(configs, mc_budget: int, master_seed: int = 0,
                       chunk: int = 1_000_000) -> list[SweepResult]:
    """Measure raw and thinned sub-optimal rates for fixed linear scores.

    For each configuration the raw counts are sampled from the Poisson
    intensities and thinned binomially (paired); errors are score <= 0 events
    under the positive-class convention (score mean must be positive).  Each
    result reports the Monte Carlo rates, their Gaussian predictions, the
    explicit error bound with its pass/fail (None when vacuous), and the
    empirical exponent log(eps) / log(eps_thinned) against 1 / (1 - delta).
    """
    results = []
    for k, cfg in enumerate(configs):
        w = np.asarray(cfg.weights, dtype=float)
        lam = np.asarray(cfg.intensity, dtype=float)
        mu, _ = score_moments(w, lam)
        if mu <= 0:
            raise ValueError("sweep configurations need a positive score mean")
        rng = make_rng(master_seed, "altitude-sweep", k)
        wrong = wrong_thin = 0
        done = 0
        while done < mc_budget:
            b = min(chunk, mc_budget - done)
            counts = rng.poisson(lam, size=(b, len(lam)))
            thinned = thin_counts(counts, cfg.delta, rng)
            wrong += int(np.count_nonzero(counts @ w <= 0.0))
            wrong_thin += int(np.count_nonzero(thinned @ w <= 0.0))
            done += b
        eps = wrong / mc_budget
        eps_thin = wrong_thin / mc_budget
        g_eps, g_eps_thin = gaussian_error_estimate(w, lam, cfg.delta)
        be = berry_esseen_statistic(w, lam)
        bound = altitude_error_bound(eps_thin, be, cfg.delta)
        holds = None if bound.vacuous else bool(eps <= bound.value)
        if eps > 0.0 and 0.0 < eps_thin < 1.0:
            exponent = float(np.log(eps) / np.log(eps_thin))
        else:
            exponent = float("nan")
        results.append(SweepResult(
            config=cfg, eps=eps, eps_thinned=eps_thin,
            se_eps=float(np.sqrt(eps * (1 - eps) / mc_budget)),
            se_eps_thinned=float(np.sqrt(eps_thin * (1 - eps_thin) / mc_budget)),
            gaussian_eps=g_eps, gaussian_eps_thinned=g_eps_thin,
            bound=bound, bound_holds=holds, exponent=exponent,
            exponent_target=1.0 / (1.0 - cfg.delta) if cfg.delta < 1 else
            float("inf")))
    return results


@dataclass(frozen=True)
class InfluenceDemoConfig:
    """Two-word, three-cluster geometry for the influence demonstration.

    One blue cluster (label 0) and a 99:1 red mixture (label 1) whose rare
    component sits close to the blue cluster.  All clusters share one
    expected document length, so thinning preserves the posterior field.
    The epoch budget is large because the influence effect only appears
    once the plain fit is near its optimum; with d = 2 that stays cheap.
    """

    doc_length: float = 400.0
    blue_word1_prob: float = 0.5
    red_common_word1_prob: float = 0.8
    red_rare_word1_prob: float = 0.58
    rare_weight: float = 0.01
    train_cfg: TrainConfig = field(default_factory=lambda: TrainConfig(
        epochs=15_000, dropout=DropoutConfig(delta=0.75, mc_replicates=1)))

    def model(self) -> TopicModel:
        length = self.doc_length

        def intensity(p):
            return np.array([p * length, (1.0 - p) * length])

        topics = (
            Topic(id=0, rho0=1.0, rho1=0.0,
                  intensity=intensity(self.blue_word1_prob)),
            Topic(id=1, rho0=0.0, rho1=1.0 - self.rare_weight,
                  intensity=intensity(self.red_common_word1_prob)),
            Topic(id=2, rho0=0.0, rho1=self.rare_weight,
                  intensity=intensity(self.red_rare_word1_prob)),
        )
        return TopicModel(label_prior=0.5, topics=topics, vocab_size=2)


@dataclass(frozen=True)
class InfluenceDemoReport:
    config: InfluenceDemoConfig
    delta: float
    clf_plain: LinearClassifier
    clf_dropout: LinearClassifier
    angle_degrees: float
    plain_error_by_cluster: dict[float, float]
    dropout_error_by_cluster: dict[float, float]
    plain_test_error: float
    dropout_test_error: float


def _angle_between(u: np.ndarray, v: np.ndarray) -> float:
    cos = float(u @ v / (np.linalg.norm(u) * np.linalg.norm(v)))
    return float(np.degrees(np.arccos(np.clip(cos, -1.0, 1.0))))


def run_influence_demo(delta: float = 0.75, n: int = 10_000,
                       master_seed: int = 0,
                       config: InfluenceDemoConfig | None = None,
                       eval_size: int = 100_000) -> InfluenceDemoReport:
    """Train plain and thinned classifiers on the three-cluster geometry.

    Reports the angle between the two fitted normals and per-cluster error
    rates on a fresh evaluation sample: thinning redistributes gradient
    influence from the rare hard cluster toward the common easy one.
    """
    config = config or InfluenceDemoConfig()
    model = config.model()
    sampler = DiscreteSampler(model)
    rng = make_rng(master_seed, "influence-train")
    train = sample_documents(sampler, n, rng)
    train_seed = int(rng.integers(0, 2 ** 31 - 1))

    cfg0 = replace(config.train_cfg, seed=train_seed,
                   dropout=DropoutConfig(delta=0.0))
    clf_plain = recalibrate_intercept(train_logistic(train, cfg0), train)
    if delta == 0.0:
        clf_drop = clf_plain
    else:
        cfgd = replace(config.train_cfg, seed=train_seed,
                       dropout=replace(config.train_cfg.dropout, delta=delta))
        clf_drop = recalibrate_intercept(
            train_logistic_dropout(train, cfgd), train)

    eval_rng = make_rng(master_seed, "influence-eval")
    eval_batch = sample_documents(sampler, eval_size, eval_rng)
    return InfluenceDemoReport(
        config=config, delta=delta,
        clf_plain=clf_plain, clf_dropout=clf_drop,
        angle_degrees=_angle_between(clf_plain.weights, clf_drop.weights),
        plain_error_by_cluster=error_by_topic(clf_plain, eval_batch),
        dropout_error_by_cluster=error_by_topic(clf_drop, eval_batch),
        plain_test_error=evaluate_error(clf_plain, eval_batch),
        dropout_test_error=evaluate_error(clf_drop, eval_batch))
