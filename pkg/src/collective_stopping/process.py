"""Belief-process specifications.

A process supplies the quadratic-variation rate qv(p) of the belief
martingale, which converts flow time-costs into belief-space costs.  Only
processes with strictly positive qv on the clipped grid are representable;
conclusive Poisson learning is handled separately (its belief path is a
deterministic drift plus a jump, so qv is undefined for it).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import BeliefGrid, GridFunction


class ProcessError(ValueError):
    pass


@dataclass(frozen=True)
class DiffusionSpec:
    """Drift-diffusion signal with noise magnitude sigma.

    The belief follows dp = (2/sigma) p(1-p) dB, hence
    qv(p) = (4/sigma^2) p^2 (1-p)^2.
    """

    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ProcessError(f"sigma must be positive, got {self.sigma}")

    def qv(self, p):
        p = np.asarray(p, dtype=float)
        return (4.0 / self.sigma**2) * p**2 * (1.0 - p) ** 2

    def vol(self, p):
        """Instantaneous belief volatility (2/sigma) p(1-p)."""
        p = np.asarray(p, dtype=float)
        return (2.0 / self.sigma) * p * (1.0 - p)


@dataclass(frozen=True)
class PoissonSpec:
    """Conclusive good-news Poisson signal with arrival rate lam.

    No-news beliefs drift as dp = -lam p(1-p) dt; a breakthrough jumps the
    belief to 1.  qv is undefined for this process.
    """

    lam: float

    def __post_init__(self):
        if not self.lam > 0:
            raise ProcessError(f"lambda must be positive, got {self.lam}")


@dataclass(frozen=True)
class CustomQvSpec:
    """Tabulated quadratic-variation rate; must be strictly positive."""

    table: GridFunction

    def __post_init__(self):
        if np.any(self.table.values <= 0.0):
            raise ProcessError("qv table must be strictly positive everywhere")

    def qv(self, p):
        return np.interp(np.asarray(p, dtype=float),
                         self.table.grid.points, self.table.values)


def qv_at(spec, p):
    """Quadratic-variation rate at belief p (scalar or array)."""
    if isinstance(spec, PoissonSpec):
        raise ProcessError("qv is undefined for Poisson learning; "
                           "use the applications module's transform")
    if not isinstance(spec, (DiffusionSpec, CustomQvSpec)):
        raise ProcessError(f"unsupported process spec {type(spec).__name__}")
    out = spec.qv(p)
    if np.any(out <= 0.0):
        raise ProcessError("quadratic-variation rate must be strictly positive")
    return out if np.ndim(p) else float(out)


def qv_on_grid(spec, grid: BeliefGrid) -> GridFunction:
    return GridFunction(grid, np.asarray(qv_at(spec, grid.points)))
