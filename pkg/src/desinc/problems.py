"""Test problems with closed-form exact solutions, including the
Toda-lattice machinery that generates exact Lotka-Volterra trajectories
for an arbitrary odd number of species.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg

from .solver import IVProblem
from .special import Interval

__all__ = [
    "TestProblem",
    "TodaState",
    "example1",
    "example2",
    "example3",
    "lv_random",
    "toda_rhs_check",
    "toda_solve",
    "miura_to_lv",
    "lv_exact",
    "lv_rhs",
    "matrix_exp",
    "lr_decompose",
    "LRDecompositionError",
    "MiuraPivotError",
    "problem_from_name",
]


@dataclass(frozen=True)
class TestProblem:
    problem: IVProblem
    exact: Callable[[float], np.ndarray]
    name: str


@dataclass(frozen=True)
class TodaState:
    """Lattice of size m: positions q (length m) and off-diagonal
    variables e (length m-1, nonzero for the Miura map)."""

    m: int
    q: np.ndarray
    e: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "q", np.asarray(self.q, dtype=float))
        object.__setattr__(self, "e", np.asarray(self.e, dtype=float))
        if self.q.shape != (self.m,) or self.e.shape != (self.m - 1,):
            raise ValueError("q must have length m and e length m-1")
        if not (np.all(np.isfinite(self.q)) and np.all(np.isfinite(self.e))):
            raise ValueError("state entries must be finite")

    def lax_matrix(self) -> np.ndarray:
        """Tridiagonal matrix with q on the diagonal, e on the
        subdiagonal and ones on the superdiagonal."""
        a = np.diag(self.q)
        for k in range(self.m - 1):
            a[k, k + 1] = 1.0
            a[k + 1, k] = self.e[k]
        return a


class LRDecompositionError(RuntimeError):
    def __init__(self, index: int, pivot: float):
        super().__init__(f"zero or near-zero pivot {pivot:.3e} at index {index}")
        self.index = index
        self.pivot = pivot


class MiuraPivotError(RuntimeError):
    def __init__(self, index: int, value: float):
        super().__init__(
            f"Miura map undefined: x_{index} = {value:.3e} is too close to zero"
        )
        self.index = index
        self.value = value


def example1() -> TestProblem:
    """Scalar linear growth x' = x on [0, 1/2], x(0) = 1."""
    prob = IVProblem(
        n=1,
        rhs=lambda t, x: x,
        x_a=np.array([1.0]),
        iv=Interval(0.0, 0.5),
        lip=1.0,
        bound_m=2.0,
        rho=1.0,
    )
    return TestProblem(problem=prob, exact=lambda t: np.array([math.exp(t)]), name="example1")


def example2(n: int = 11) -> TestProblem:
    """Semi-discrete heat equation x' = A x on [0, 1/8] with a unit spike
    at the center; n must be odd."""
    if n < 3 or n % 2 == 0:
        raise ValueError(f"n must be odd and at least 3, got {n}")
    a = (np.diag(-2.0 * np.ones(n))
         + np.diag(np.ones(n - 1), 1)
         + np.diag(np.ones(n - 1), -1))
    x0 = np.zeros(n)
    x0[(n + 1) // 2 - 1] = 1.0

    k = np.arange(1, n + 1)
    ell = np.arange(1, n + 1)
    # eigen-expansion of the solution: modes sin(k*l*pi/(n+1)) with decay
    # rates 4 sin^2(l*pi/(2(n+1)))
    modes = np.sin(np.outer(k, ell) * math.pi / (n + 1))
    coeff = np.sin(ell * math.pi / 2.0) * 2.0 / (n + 1)
    rates = 4.0 * np.sin(ell * math.pi / (2.0 * (n + 1))) ** 2

    def exact(t: float) -> np.ndarray:
        return modes @ (coeff * np.exp(-rates * t))

    prob = IVProblem(
        n=n,
        rhs=lambda t, x: a @ x,
        x_a=x0,
        iv=Interval(0.0, 0.125),
        lip=4.0,
        bound_m=6.0,
        rho=1.0,
    )
    return TestProblem(problem=prob, exact=exact, name=f"example2:n={n}")


def lv_rhs(t: float, x: np.ndarray) -> np.ndarray:
    """Lotka-Volterra field x_k' = x_k (x_{k+1} - x_{k-1}) with zero
    boundary species."""
    up = np.concatenate([x[1:], [0.0]])
    down = np.concatenate([[0.0], x[:-1]])
    return x * (up - down)


def example3() -> TestProblem:
    """Three-species Lotka-Volterra on [0, 1] with the closed-form
    solution built from the 2-site Toda lattice."""

    def exact(t: float) -> np.ndarray:
        x2 = 1.0 / (math.cosh(t) * (2.0 * math.cosh(t) + math.sinh(t)))
        return np.array([2.0 + math.tanh(t), x2, 2.0 - math.tanh(t) - x2])

    prob = IVProblem(
        n=3,
        rhs=lv_rhs,
        x_a=np.array([2.0, 0.5, 1.5]),
        iv=Interval(0.0, 1.0),
        rho=0.5,
    )
    return TestProblem(problem=prob, exact=exact, name="example3")


def lv_random(m: int, seed: int = 0, iv: Interval | None = None) -> TestProblem:
    """Random (2m-1)-species Lotka-Volterra problem whose exact solution
    comes from the Toda-lattice pipeline.

    The Toda state is drawn so that the Miura recursion stays away from
    zero on a moderate time range.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    rng = np.random.default_rng(seed)
    s0 = TodaState(m=m, q=rng.uniform(2.5, 3.5, m), e=rng.uniform(0.25, 0.75, m - 1))
    if iv is None:
        iv = Interval(0.0, 1.0)
    x0 = miura_to_lv(s0)
    prob = IVProblem(n=2 * m - 1, rhs=lv_rhs, x_a=x0, iv=iv)
    return TestProblem(
        problem=prob,
        exact=lambda t: lv_exact(m, s0, t),
        name=f"lv:m={m}:seed={seed}",
    )


def matrix_exp(a: np.ndarray, t: float = 1.0) -> np.ndarray:
    """exp(t*a) by scaling-and-squaring with Pade approximation."""
    a = np.asarray(a, dtype=float)
    return scipy.linalg.expm(t * a)


def lr_decompose(m: np.ndarray, pivot_tol: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Plain LR (Doolittle) factorization without pivoting.

    Pivoting would destroy the similarity structure the Toda construction
    relies on, so a vanishing pivot is a hard error.
    """
    a = np.array(m, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    low = np.eye(n)
    for k in range(n):
        piv = a[k, k]
        if abs(piv) <= pivot_tol or piv == 0.0:
            raise LRDecompositionError(k, piv)
        if k < n - 1:
            low[k + 1:, k] = a[k + 1:, k] / piv
            a[k + 1:, k:] -= np.outer(low[k + 1:, k], a[k, k:])
    return low, np.triu(a)


def toda_rhs_check(s: TodaState) -> float:
    """Maximum deviation of the commutator [A, A_-] from the tridiagonal
    form prescribed by the lattice equations."""
    a = s.lax_matrix()
    a_minus = np.tril(a, k=-1)
    comm = a @ a_minus - a_minus @ a
    expected = np.zeros_like(comm)
    e_pad = np.concatenate([[0.0], s.e, [0.0]])
    for k in range(s.m):
        expected[k, k] = e_pad[k + 1] - e_pad[k]
    for k in range(s.m - 1):
        expected[k + 1, k] = s.e[k] * (s.q[k + 1] - s.q[k])
    return float(np.max(np.abs(comm - expected)))


def toda_solve(s0: TodaState, t: float) -> TodaState:
    """Exact Toda-lattice state at time t via the group-theoretic
    construction: LR-factor exp(t*A(0)) and conjugate A(0) by the lower
    factor."""
    a0 = s0.lax_matrix()
    if t == 0.0:
        return s0
    expm = matrix_exp(a0, t)
    low, _ = lr_decompose(expm)
    at = scipy.linalg.solve_triangular(low, a0 @ low, lower=True, unit_diagonal=True)
    return TodaState(m=s0.m, q=np.diag(at).copy(), e=np.diag(at, k=-1).copy())


def miura_to_lv(s: TodaState) -> np.ndarray:
    """Map a Toda state (q, e) to the 2m-1 Lotka-Volterra variables via
    the forward recursion of the Miura transformation."""
    m = s.m
    x = np.empty(2 * m - 1)
    thresh = 1e-12 * max(1.0, float(np.max(np.abs(s.q))))
    x[0] = s.q[0] - 1.0
    for k in range(1, m):
        odd = x[2 * k - 2]  # x_{2k-1} in 1-based indexing
        if abs(odd) <= thresh:
            raise MiuraPivotError(2 * k - 1, odd)
        x[2 * k - 1] = s.e[k - 1] / odd
        x[2 * k] = s.q[k] - x[2 * k - 1] - 1.0
    return x


def lv_exact(m: int, s0: TodaState, t: float) -> np.ndarray:
    """Exact Lotka-Volterra solution at time t for 2m-1 species, from the
    Toda trajectory through s0."""
    if m != s0.m:
        raise ValueError("m must match the state size")
    return miura_to_lv(toda_solve(s0, t))


def problem_from_name(spec: str) -> TestProblem:
    """Resolve a problem name like 'example1', 'example2:n=11', 'example3'
    or 'lv:m=3:seed=7'."""
    parts = spec.split(":")
    name, params = parts[0], {}
    for p in parts[1:]:
        key, _, val = p.partition("=")
        if not val:
            raise ValueError(f"malformed problem parameter {p!r} in {spec!r}")
        params[key] = int(val)
    if name == "example1":
        return example1()
    if name == "example2":
        return example2(**params) if params else example2()
    if name == "example3":
        return example3()
    if name == "lv":
        return lv_random(**params)
    raise ValueError(f"unknown problem {spec!r}")
