"""Collocation grid for the DE Sinc method: uniform nodes s_j = j*h for
j = -N..N, their mapped times and transform derivatives.

Storage is 0-based: array index k corresponds to node index j = k - N, so
index N is the center node j = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .special import Interval, dphi_de, phi_de

__all__ = ["DEGrid", "build_grid"]


@dataclass(frozen=True)
class DEGrid:
    iv: Interval
    N: int
    h: float
    s: np.ndarray  # nodes j*h, j = -N..N
    t: np.ndarray  # mapped times phi(s_j), strictly increasing in (a, b)
    dphi: np.ndarray  # phi'(s_j), nonnegative (0 only by underflow)

    @property
    def m(self) -> int:
        """Number of nodes, 2N + 1."""
        return 2 * self.N + 1


def default_step(N: int) -> float:
    """Step size log(N)/N used throughout the experiments."""
    return math.log(N) / N


def build_grid(iv: Interval, N: int, h: float | None = None) -> DEGrid:
    """Build the DE collocation grid on the given interval.

    h defaults to log(N)/N; an explicit h may be supplied for
    experimentation.
    """
    if N < 2:
        raise ValueError(f"N must be at least 2, got {N}")
    if h is None:
        h = default_step(N)
    elif h <= 0.0:
        raise ValueError(f"step size must be positive, got {h}")
    j = np.arange(-N, N + 1, dtype=float)
    s = j * h
    t = phi_de(s, iv)
    dphi = dphi_de(s, iv)
    return DEGrid(iv=iv, N=N, h=h, s=s, t=t, dphi=dphi)
