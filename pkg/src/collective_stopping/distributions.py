"""Discrete posterior-belief distributions and convex-order predicates.

Every pure Markov stopping outcome is a binary policy, so only discrete
distributions are represented.  The mean-preserving contraction test compares
integrated CDFs on the merged atom set, which is exact for discrete
distributions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MEAN_TOL = 1e-10
ICDF_TOL = 1e-10


class DistributionError(ValueError):
    pass


@dataclass(frozen=True)
class PosteriorDistribution:
    """Atoms (belief, probability) with positive weights summing to one."""

    beliefs: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        b, w = self.beliefs, self.probs
        if len(b) != len(w) or len(b) == 0:
            raise DistributionError("need matching, non-empty atom arrays")
        if np.any(np.diff(b) <= 0):
            raise DistributionError("beliefs must be sorted and distinct")
        if np.any((b < 0) | (b > 1)):
            raise DistributionError("beliefs must lie in [0, 1]")
        if np.any(w <= 0):
            raise DistributionError("probabilities must be positive")
        if abs(w.sum() - 1.0) > 1e-12:
            raise DistributionError(f"probabilities sum to {w.sum()}, not 1")
        b.setflags(write=False)
        w.setflags(write=False)

    @classmethod
    def from_atoms(cls, atoms) -> "PosteriorDistribution":
        merged: dict[float, float] = {}
        for b, w in atoms:
            merged[float(b)] = merged.get(float(b), 0.0) + float(w)
        bs = np.array(sorted(merged))
        return cls(beliefs=bs, probs=np.array([merged[b] for b in bs]))

    def mean(self) -> float:
        return float(self.beliefs @ self.probs)

    def integrated_cdf(self, ps: np.ndarray) -> np.ndarray:
        """integral_0^p F(x) dx, evaluated at each p; piecewise linear with
        kinks exactly at the atoms."""
        ps = np.asarray(ps, dtype=float)
        # integral of the CDF = sum_k w_k * max(p - b_k, 0)
        return np.maximum(ps[:, None] - self.beliefs[None, :], 0.0) @ self.probs


@dataclass(frozen=True)
class BinaryPolicy:
    """Bayes-plausible distribution on two beliefs bracketing the prior."""

    p_low: float
    p_high: float
    prior: float
    w_low: float
    w_high: float

    def is_degenerate(self) -> bool:
        return self.p_low == self.p_high

    def to_distribution(self) -> PosteriorDistribution:
        if self.is_degenerate():
            return PosteriorDistribution(np.array([self.prior]), np.array([1.0]))
        return PosteriorDistribution(np.array([self.p_low, self.p_high]),
                                     np.array([self.w_low, self.w_high]))


def binary_from_bounds(p_low: float, p_high: float, prior: float) -> BinaryPolicy:
    """Binary policy with the stated support; weights are pinned down by the
    requirement that the mean equal the prior."""
    if not (p_low <= prior <= p_high):
        raise DistributionError(
            f"prior {prior} outside [{p_low}, {p_high}]")
    if p_low == p_high:
        return BinaryPolicy(prior, prior, prior, 1.0, 0.0)
    w_low = (p_high - prior) / (p_high - p_low)
    return BinaryPolicy(p_low, p_high, prior, w_low, 1.0 - w_low)


def is_mpc(f: PosteriorDistribution, g: PosteriorDistribution) -> bool:
    """True iff f is a mean-preserving contraction of g.

    Checked via equal means and the integrated CDF of f lying weakly below
    that of g on the merged atom set (sufficient for discrete distributions:
    both integrated CDFs are piecewise linear with kinks only at atoms).
    """
    if abs(f.mean() - g.mean()) > MEAN_TOL:
        return False
    merged = np.union1d(f.beliefs, g.beliefs)
    return bool(np.all(f.integrated_cdf(merged) <= g.integrated_cdf(merged) + ICDF_TOL))


def is_mps_supported(f: PosteriorDistribution, g: PosteriorDistribution,
                     region) -> bool:
    """True iff f is a mean-preserving spread of g with no atom inside the
    (open) sampling region.  Region boundary points are allowed."""
    if not is_mpc(g, f):
        return False
    return not any(region.contains_belief(b) for b in f.beliefs)
