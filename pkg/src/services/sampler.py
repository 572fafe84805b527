"""
Seeded Monte Carlo simulation of measurement outcomes.

Outcomes are drawn by inverting the cumulative distribution with numpy's
PCG64 generator, so a report is a pure function of (set, state, n, seed).
"""
import logging
import math
from typing import List, Optional

import numpy as np

from src.core.config import settings
from src.models import BlochState, PovmSet
from src.schemas import SampleReport
from src.services.bloch_core import outcome_distribution

logger = logging.getLogger(__name__)

FLAG_SIGMAS = 5.0


class SamplerService:
    def __init__(self, max_trials: Optional[int] = None):
        self.max_trials = max_trials or settings.MAX_SAMPLE_TRIALS

    @staticmethod
    def make_generator(seed: int) -> np.random.Generator:
        if not 0 <= seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
        return np.random.Generator(np.random.PCG64(seed))

    @staticmethod
    def cumulative(probabilities: List[float]) -> np.ndarray:
        """
        Bucket edges for inversion sampling.

        Probabilities within EPS_ROUND of zero become exactly zero. The last
        nonzero bucket is widened to infinity so residual float mass never
        falls past the end; empty buckets keep zero width.
        """
        p = np.array(probabilities, dtype=float)
        p[p <= settings.EPS_ROUND] = 0.0
        nonzero = np.flatnonzero(p)
        if nonzero.size == 0:
            raise ValueError("distribution has no mass")
        edges = np.cumsum(p)
        edges[nonzero[-1]:] = np.inf
        return edges

    def sample_indices(self, probabilities: List[float], n: int, seed: int) -> np.ndarray:
        edges = self.cumulative(probabilities)
        u = self.make_generator(seed).random(n)
        # strict upper edge: index i is drawn iff edges[i-1] <= u < edges[i]
        return np.searchsorted(edges, u, side="right")

    def sample_outcomes(self, s: PovmSet, st: BlochState, n: int, seed: int) -> SampleReport:
        if n < 1:
            raise ValueError(f"n must be positive, got {n}")
        if n > self.max_trials:
            raise ValueError(f"n={n} exceeds the limit of {self.max_trials} trials")

        expected = outcome_distribution(s, st)
        indices = self.sample_indices(expected, n, seed)
        counts = np.bincount(indices, minlength=len(expected)).tolist()
        frequencies = [c / n for c in counts]
        standard_errors = [math.sqrt(p * (1.0 - p) / n) for p in expected]
        deviations = [abs(f - p) for f, p in zip(frequencies, expected)]

        flagged = []
        for i, (dev, se, c) in enumerate(zip(deviations, standard_errors, counts)):
            if se == 0.0:
                if c and expected[i] <= settings.EPS_ROUND:
                    flagged.append(i)
            elif dev > FLAG_SIGMAS * se:
                flagged.append(i)
        if flagged:
            logger.warning("outcomes %s deviate by more than %.0f sigma (seed=%d)", flagged, FLAG_SIGMAS, seed)

        return SampleReport(
            counts=counts,
            n=n,
            frequencies=frequencies,
            expected=expected,
            max_abs_deviation=max(deviations),
            seed=seed,
            standard_errors=standard_errors,
            flagged=flagged,
        )


_default_sampler = SamplerService()


def sample_outcomes(s: PovmSet, st: BlochState, n: int, seed: int) -> SampleReport:
    return _default_sampler.sample_outcomes(s, st, n, seed)
