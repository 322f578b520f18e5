"""Binomial thinning of count features and thinned-model posteriors.

Thinning keeps each word occurrence independently with probability 1 - delta.
Poisson counts stay Poisson under thinning, so a thinned discrete model is
just the same model with every intensity scaled by 1 - delta.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .topics import Topic, TopicModel, bayes_posterior


@dataclass(frozen=True)
class DropoutConfig:
    """Thinning probability and the Monte Carlo replicate count per pass."""

    delta: float = 0.0
    mc_replicates: int = 8

    def __post_init__(self):
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError("delta must lie in [0, 1]")
        if self.mc_replicates < 1:
            raise ValueError("mc_replicates must be >= 1")


def thin_counts(counts: np.ndarray, delta: float,
                rng: np.random.Generator) -> np.ndarray:
    """Independently keep each counted occurrence with probability 1 - delta."""
    x = np.asarray(counts)
    if np.any(x < 0):
        raise ValueError("counts must be non-negative")
    if not 0.0 <= delta <= 1.0:
        raise ValueError("delta must lie in [0, 1]")
    if delta == 0.0:
        return x.copy()
    if delta == 1.0:
        return np.zeros_like(x)
    return rng.binomial(x, 1.0 - delta)


def thinned_model(model: TopicModel, delta: float) -> TopicModel:
    """The model seen through dropout: every intensity scaled by 1 - delta."""
    if not 0.0 <= delta < 1.0:
        raise ValueError("delta must lie in [0, 1) for a valid thinned model")
    if delta == 0.0:
        return model
    topics = tuple(
        Topic(id=t.id, rho0=t.rho0, rho1=t.rho1,
              intensity=(1.0 - delta) * t.intensity)
        for t in model.topics
    )
    return TopicModel(label_prior=model.label_prior, topics=topics,
                      vocab_size=model.vocab_size)


def dropout_posterior(model: TopicModel, delta: float,
                      counts: np.ndarray) -> float:
    """P(y = 1 | thinned counts = v): the Bayes posterior of the thinned model."""
    return bayes_posterior(thinned_model(model, delta), counts)
