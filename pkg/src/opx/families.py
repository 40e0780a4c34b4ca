"""Moment functionals presented by recurrence coefficients, and their monic
orthogonal polynomial sequences.

A family is the pair of sequences (c_n, lambda_n), n >= 1, driving the
three-term recurrence

    x P_n(x) = P_{n+1}(x) + c_{n+1} P_n(x) + lambda_{n+1} P_{n-1}(x),

with P_{-1} = 0, P_0 = 1.  The recurrence never consumes lambda_1; by
convention lambda_1 := mu_0 = L(1), which makes L(P_n^2) equal to the
product lambda_1 ... lambda_{n+1} used throughout the kernel formulas.
Provider indices are 1-based to mirror the subscripts above; arrays of
evaluated polynomials are 0-based by degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ParameterOutOfRange

__all__ = [
    "FamilySpec",
    "PolySequence",
    "chebyshev1",
    "laguerre",
    "jacobi",
    "custom_family",
    "recurrence_coefficients",
    "eval_sequence",
    "eval_table",
    "norm_products",
    "monic_coefficient_table",
]

CoeffProvider = Callable[[int], tuple[float, float]]


@dataclass(frozen=True, eq=False)
class FamilySpec:
    """A moment functional given by its recurrence coefficient provider.

    Parameters
    ----------
    kind : str
        One of ``"chebyshev1"``, ``"laguerre"``, ``"jacobi"``, ``"custom"``.
    coeffs : callable
        Deterministic map ``n -> (c_n, lambda_n)`` for ``n >= 1``, with
        ``lambda_1 = mu0``.
    support : tuple of float
        Closure of the support interval; ``math.inf`` marks a half line.
    mu0 : float
        Total mass L(1).  Must be nonzero (positive in the positive-definite
        case).
    params : tuple
        Classical parameters, kept for reporting, e.g. ``(("gamma", 0.5),)``.
    """

    kind: str
    coeffs: CoeffProvider
    support: tuple[float, float]
    mu0: float
    params: tuple[tuple[str, float], ...] = ()

    def coefficient(self, n: int) -> tuple[float, float]:
        """Return (c_n, lambda_n) for 1-based index n."""
        if n < 1:
            raise ValueError(f"coefficient index must be >= 1, got {n}")
        return self.coeffs(n)

    def __repr__(self) -> str:  # keep callables out of the repr
        ps = ", ".join(f"{k}={v}" for k, v in self.params)
        return f"FamilySpec({self.kind}{', ' + ps if ps else ''}, mu0={self.mu0})"


@dataclass(frozen=True)
class PolySequence:
    """Values (and optionally derivatives) of P_0..P_n at one point."""

    x: complex
    values: np.ndarray
    derivs: np.ndarray | None = None


def chebyshev1() -> FamilySpec:
    """Monic Chebyshev polynomials of the first kind on [-1, 1].

    c_n = 0 for all n, lambda_2 = 1/2, lambda_n = 1/4 for n >= 3, and
    lambda_1 = mu0 = pi (the mass of (1 - x^2)^(-1/2) dx).
    """

    def coeffs(n: int) -> tuple[float, float]:
        if n == 1:
            return 0.0, math.pi
        if n == 2:
            return 0.0, 0.5
        return 0.0, 0.25

    return FamilySpec("chebyshev1", coeffs, (-1.0, 1.0), math.pi)


def laguerre(gamma: float) -> FamilySpec:
    """Monic Laguerre family for the weight x^gamma e^(-x) on [0, inf).

    lambda_{n+1} = n (n + gamma); the diagonal c_{n+1} = 2n + gamma + 1 is
    the standard monic value and is gated by the quadrature orthogonality
    oracle in the test suite.
    """
    if gamma <= -1.0:
        raise ParameterOutOfRange(f"laguerre requires gamma > -1, got {gamma}")
    mu0 = math.exp(math.lgamma(gamma + 1.0))

    def coeffs(n: int) -> tuple[float, float]:
        if n == 1:
            return gamma + 1.0, mu0
        m = n - 1
        return 2.0 * m + gamma + 1.0, m * (m + gamma)

    return FamilySpec("laguerre", coeffs, (0.0, math.inf), mu0, (("gamma", gamma),))


def jacobi(gamma: float, delta: float) -> FamilySpec:
    """Monic Jacobi family for the weight (1-x)^gamma (1+x)^delta on [-1, 1].

    lambda_{n+1} = 4 n (n+gamma)(n+delta)(n+gamma+delta) /
    ((2n+gamma+delta)^2 (2n+gamma+delta+1)(2n+gamma+delta-1)); the first two
    coefficients are taken in cancelled form so gamma + delta in {0, -1}
    does not divide by zero.
    """
    if gamma <= -1.0 or delta <= -1.0:
        raise ParameterOutOfRange(
            f"jacobi requires gamma > -1 and delta > -1, got ({gamma}, {delta})"
        )
    s = gamma + delta
    mu0 = math.exp(
        (s + 1.0) * math.log(2.0)
        + math.lgamma(gamma + 1.0)
        + math.lgamma(delta + 1.0)
        - math.lgamma(s + 2.0)
    )

    def coeffs(n: int) -> tuple[float, float]:
        if n == 1:
            return (delta - gamma) / (s + 2.0), mu0
        if n == 2:
            c = (delta - gamma) * (delta + gamma) / ((s + 2.0) * (s + 4.0))
            lam = 4.0 * (1.0 + gamma) * (1.0 + delta) / ((s + 2.0) ** 2 * (s + 3.0))
            return c, lam
        m = n - 1  # lambda_n = lambda_{m+1} with m = n-1
        c = (delta - gamma) * (delta + gamma) / ((2.0 * m + s) * (2.0 * m + s + 2.0))
        lam = (
            4.0 * m * (m + gamma) * (m + delta) * (m + s)
            / ((2.0 * m + s) ** 2 * (2.0 * m + s + 1.0) * (2.0 * m + s - 1.0))
        )
        return c, lam

    return FamilySpec(
        "jacobi", coeffs, (-1.0, 1.0), mu0, (("gamma", gamma), ("delta", delta))
    )


def custom_family(
    coeffs: CoeffProvider,
    support: tuple[float, float],
    mu0: float | None = None,
) -> FamilySpec:
    """Wrap a user-supplied provider n -> (c_n, lambda_n).

    The provider must be deterministic.  When ``mu0`` is omitted it is taken
    from ``coeffs(1)[1]`` (the lambda_1 = mu0 convention).
    """
    if mu0 is None:
        mu0 = coeffs(1)[1]
    return FamilySpec("custom", coeffs, support, mu0)


def recurrence_coefficients(family: FamilySpec, n_max: int) -> np.ndarray:
    """Return the pairs (c_n, lambda_n) for n = 1..n_max as an (n_max, 2) array."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    pairs = [family.coefficient(n) for n in range(1, n_max + 1)]
    dtype = complex if any(isinstance(v, complex) for p in pairs for v in p) else float
    return np.array(pairs, dtype=dtype)


def eval_table(family: FamilySpec, n: int, xs) -> np.ndarray:
    """Evaluate P_0..P_n at every point of ``xs``; shape (n+1, len(xs)).

    Forward recurrence; complex points and complex coefficient providers are
    supported transparently.
    """
    xs = np.atleast_1d(np.asarray(xs))
    want_complex = np.iscomplexobj(xs)
    pairs = [family.coefficient(m) for m in range(1, n + 2)]
    if any(isinstance(v, complex) for p in pairs for v in p):
        want_complex = True
    dtype = complex if want_complex else float
    xs = xs.astype(dtype)
    table = np.empty((n + 1, xs.size), dtype=dtype)
    table[0] = 1.0
    if n >= 1:
        table[1] = xs - pairs[0][0]
    for m in range(1, n):
        c_next, lam_next = pairs[m]
        table[m + 1] = (xs - c_next) * table[m] - lam_next * table[m - 1]
    return table


def eval_sequence(
    family: FamilySpec, n: int, x, with_derivs: bool = False
) -> PolySequence:
    """Evaluate P_0..P_n (and optionally P'_0..P'_n) at a single point.

    Derivatives come from the differentiated recurrence
    P'_{n+1} = P_n + (x - c_{n+1}) P'_n - lambda_{n+1} P'_{n-1}.
    """
    values = eval_table(family, n, [x])[:, 0]
    derivs = None
    if with_derivs:
        derivs = np.zeros_like(values)
        if n >= 1:
            derivs[1] = 1.0
        for m in range(1, n):
            c_next, lam_next = family.coefficient(m + 1)
            derivs[m + 1] = values[m] + (x - c_next) * derivs[m] - lam_next * derivs[m - 1]
    return PolySequence(x=x, values=values, derivs=derivs)


def norm_products(family: FamilySpec, n: int) -> np.ndarray:
    """Products N_j = lambda_1 ... lambda_{j+1} for j = 0..n (equal to L(P_j^2))."""
    out = np.empty(n + 1, dtype=complex)
    prod = 1.0 + 0.0j
    for j in range(n + 1):
        prod = prod * family.coefficient(j + 1)[1]
        out[j] = prod
    if abs(out.imag).max() == 0.0:
        return out.real
    return out


def monic_coefficient_table(
    pairs: Sequence[tuple[float, float]], n_max: int
) -> list[np.ndarray]:
    """Monomial coefficient vectors (ascending) of P_0..P_n_max for given pairs.

    ``pairs[m]`` holds (c_{m+1}, lambda_{m+1}).  Exact at desk scale; used for
    monicity / degree checks and the moment-functional solver.
    """
    dtype = complex if any(isinstance(v, complex) for p in pairs for v in p) else float
    polys = [np.array([1.0], dtype=dtype)]
    if n_max >= 1:
        polys.append(np.array([-pairs[0][0], 1.0], dtype=dtype))
    for m in range(1, n_max):
        c_next, lam_next = pairs[m]
        nxt = np.zeros(m + 2, dtype=dtype)
        nxt[1:] += polys[m]              # x * P_m
        nxt[: m + 1] -= c_next * polys[m]
        nxt[: m] -= lam_next * polys[m - 1]
        polys.append(nxt)
    return polys
