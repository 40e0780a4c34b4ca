"""Ratio limits of kernel polynomials, continued fractions for
hypergeometric ratios, and chain-sequence utilities.

The ratio of consecutive kernel polynomials at the shift itself has the
closed form (all sums taken at k)

    lim_{x->k} Pk_{n+1}/Pk_n = (P_n/P_{n+1}) lambda_{n+2} (1 + t_{n+1}/S_n),

with t_j = P_j^2/(lambda_1...lambda_{j+1}) and S_n = t_0 + ... + t_n; the
reciprocal direction replaces (1 + t_{n+1}/S_n) by (1 - t_{n+1}/S_{n+1}),
so the product of the two directions is exactly 1.  Evaluation runs on the
ratio-form context caches and therefore stays finite out to n ~ 10^3.

Continued fractions are written as 1/(1 + s_1 a_1 z/(1 + s_2 a_2 z/(...)))
with explicit per-term signs s_j; they are evaluated by backward recurrence
at the requested depth and again at depth+10, with a tiny-floor rescue for
vanishing intermediate denominators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import Divergent, NonConvergent, ParameterOutOfRange, ZeroDenominator
from .families import FamilySpec, eval_sequence, norm_products
from .kernels import KernelContext

__all__ = [
    "confluent_cd",
    "kernel_ratio_limit",
    "ContinuedFraction",
    "evaluate_cf",
    "gauss_cf_ratio",
    "kummer_cf_ratio",
    "laguerre_ratio_cf",
    "laguerre_mixed_cf",
    "jacobi_ratio_cf",
    "hyp_series",
    "ChainSequence",
    "chain_params",
]

_TINY = 1e-300


def confluent_cd(family: FamilySpec, n: int, x) -> tuple[float, float]:
    """Both sides of the confluent Christoffel-Darboux identity at x.

    lhs = sum_j P_j(x)^2 / (lambda_1...lambda_{j+1});
    rhs = (P'_{n+1} P_n - P_{n+1} P'_n) / (lambda_1...lambda_{n+1}).
    """
    seq = eval_sequence(family, n + 1, x, with_derivs=True)
    norms = norm_products(family, n + 1)
    lhs = float(np.sum(seq.values[: n + 1] ** 2 / norms[: n + 1]))
    rhs = float(
        (seq.derivs[n + 1] * seq.values[n] - seq.values[n + 1] * seq.derivs[n]) / norms[n]
    )
    return lhs, rhs


def kernel_ratio_limit(ctx: KernelContext, n: int) -> tuple[float, float]:
    """Limits (r_up, r_down) of Pk_{n+1}/Pk_n and its reciprocal as x -> k.

    Computed from the ratio-form caches, so large n is safe; the exact
    algebraic identity r_up * r_down = 1 survives in floating point to
    roughly machine precision.
    """
    if n + 1 >= ctx.ratios.size:
        raise ValueError(f"n={n} exceeds the cached ratio range {ctx.ratios.size - 2}")
    lam_n2 = ctx.family.coefficient(n + 2)[1]
    rho = ctx.ratios[n + 1]            # P_{n+1}(k)/P_n(k)
    t = ctx.weighted_squares[n + 1]    # P_{n+1}^2(k)/N_{n+1}
    s_n = ctx.cd_partials[n]
    s_n1 = ctx.cd_partials[n + 1]
    r_up = (1.0 / rho) * lam_n2 * (1.0 + t / s_n)
    r_down = rho * (1.0 / lam_n2) * (1.0 - t / s_n1)
    if abs(np.imag(r_up)) == 0.0:
        return float(np.real(r_up)), float(np.real(r_down))
    return complex(r_up), complex(r_down)


# ---------------------------------------------------------------------------
# continued fractions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ContinuedFraction:
    """1/(1 + s_1 a_1 z / (1 + s_2 a_2 z / ...)) to a fixed depth.

    ``partials(j)`` returns (a_j, s_j) for j >= 1 with s_j in {+1, -1}.
    The leading numerator is always 1.
    """

    partials: Callable[[int], tuple[float, int]]
    depth: int
    lead: float = 1.0


def _backward_pass(cf: ContinuedFraction, z: float, depth: int) -> tuple[float, bool]:
    tail = 1.0
    floored = False
    for j in range(depth, 0, -1):
        a_j, s_j = cf.partials(j)
        if abs(tail) < _TINY:
            tail = math.copysign(_TINY, tail if tail != 0.0 else 1.0)
            floored = True
        tail = 1.0 + s_j * a_j * z / tail
    if abs(tail) < _TINY:
        raise ZeroDenominator("continued fraction denominator vanished at the top level")
    return cf.lead / tail, floored


def evaluate_cf(cf: ContinuedFraction, z: float, rtol: float = 1e-13) -> float:
    """Evaluate by backward recurrence at depth and depth+10.

    The two passes must agree to ``rtol`` relative; a tiny-floor rescue is
    applied to vanishing intermediate denominators and counts as agreement
    only if both passes still match.
    """
    v1, _ = _backward_pass(cf, z, cf.depth)
    v2, _ = _backward_pass(cf, z, cf.depth + 10)
    if abs(v1 - v2) > rtol * max(1.0, abs(v2)):
        raise NonConvergent(
            f"depth {cf.depth} and {cf.depth + 10} disagree: {v1} vs {v2}"
        )
    return v2


def _gauss_g(p: float, q: float, r: float, j: int) -> float:
    if j == 0:
        return 0.0
    if j % 2 == 0:
        k = j // 2
        return (p + k) / (r + 2 * k - 1)
    k = (j + 1) // 2
    return (q + k - 1) / (r + 2 * k - 2)


def gauss_cf_ratio(p: float, q: float, r: float, z: float, depth: int = 60) -> float:
    """F(p+1, q; r; z) / F(p, q; r; z) as a g-fraction.

    Partial numerators -(1 - g_{j-1}) g_j z with the g table
    g_{2k} = (p+k)/(r+2k-1), g_{2k-1} = (q+k-1)/(r+2k-2).  Terminates
    exactly when p or q is a nonpositive integer; otherwise needs |z| < 1.
    """
    if r <= 0.0 and float(r).is_integer():
        raise ParameterOutOfRange(f"r must avoid nonpositive integers, got {r}")
    terminating = (p <= 0 and float(p).is_integer()) or (q <= 0 and float(q).is_integer())
    if not terminating and abs(z) >= 1.0:
        raise Divergent(f"non-terminating ratio needs |z| < 1, got z={z}")

    def partials(j: int) -> tuple[float, int]:
        return (1.0 - _gauss_g(p, q, r, j - 1)) * _gauss_g(p, q, r, j), -1

    return evaluate_cf(ContinuedFraction(partials, depth), z)


def _kummer_d(p: float, r: float, j: int) -> float:
    # q -> infinity limit of (1 - g_{j-1}) g_j / q; the odd rows for j >= 3
    # are (r - p + k - 2)/((r + 2k - 3)(r + 2k - 2)), which is what the
    # series oracle confirms (an index-shifted variant also circulates).
    if j == 1:
        return 1.0 / r
    if j % 2 == 0:
        k = j // 2
        return -(p + k) / ((r + 2 * k - 1) * (r + 2 * k - 2))
    k = (j + 1) // 2
    return (r - p + k - 2) / ((r + 2 * k - 3) * (r + 2 * k - 2))


def kummer_cf_ratio(p: float, r: float, z: float, depth: int = 60) -> float:
    """phi(p+1; r; z) / phi(p; r; z) as the confluent limit fraction.

    All partial numerators carry the minus sign: 1/(1 - d_1 z/(1 - d_2 z/...)).
    """
    if r <= 0.0 and float(r).is_integer():
        raise ParameterOutOfRange(f"r must avoid nonpositive integers, got {r}")

    def partials(j: int) -> tuple[float, int]:
        return _kummer_d(p, r, j), -1

    return evaluate_cf(ContinuedFraction(partials, depth), z)


def laguerre_ratio_cf(
    gamma: float, n: int, x: float, depth: int = 60
) -> tuple[float, float, float]:
    """Laguerre kernel-ratio pieces at shift 0 for parameter gamma.

    Returns (cf_value, same_param_prefactor, mixed_param_prefactor) where
    cf_value is the plus-signed fraction for
    phi(-n+1; gamma+2; -x) / phi(-n; gamma+2; -x) in the variable x, i.e.
    with coefficients dt_1 = 1/(gamma+2),
    dt_{2k} = (n-k)/((gamma+2k)(gamma+2k+1)) and
    dt_{2k-1} = (gamma+n+k)/((gamma+2k-1)(gamma+2k)) for k >= 2.

    The same-parameter prefactor is (1/n^2) sqrt(B(n, gamma+2)/(n B(n,
    gamma+1))) via log-Gamma; the mixed prefactor
    gamma^2 / (n^(3/2) (n+gamma)(gamma+1)(n+gamma-1)) needs gamma > 0 and is
    NaN otherwise.  Both prefactors are reporting targets: they are compared
    against directly computed kernel ratios, never hard-asserted.
    """
    if gamma <= -1.0:
        raise ParameterOutOfRange(f"gamma must exceed -1, got {gamma}")
    if n < 1:
        raise ParameterOutOfRange(f"n must be >= 1, got {n}")

    def partials(j: int) -> tuple[float, int]:
        return _kummer_d(-float(n), gamma + 2.0, j), +1

    cf_value = evaluate_cf(ContinuedFraction(partials, depth), x)

    def log_beta(a: float, b: float) -> float:
        return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)

    same = (1.0 / n**2) * math.exp(
        0.5 * (log_beta(n, gamma + 2.0) - math.log(n) - log_beta(n, gamma + 1.0))
    )
    if gamma > 0.0:
        mixed = gamma**2 / (n**1.5 * (n + gamma) * (gamma + 1.0) * (n + gamma - 1.0))
    else:
        mixed = math.nan
    return cf_value, same, mixed


def laguerre_mixed_cf(gamma: float, n: int, x: float, depth: int = 60) -> float:
    """The alternating-sign fraction printed for the mixed-parameter ratio
    phi(-n+1; gamma+2; -x) / phi(-n; gamma+1; -x).

    Coefficients d'_{2k+1} = (n+k+gamma+1)/((gamma+2k+1)(gamma+2k+2)) and
    d'_{2k+2} = (1-n+k)/((gamma+2k+1)(gamma+2k+2)), signs +, -, +, -, ...
    Followed as printed; agreement with direct kernel ratios is reported,
    not asserted.
    """
    if gamma <= -1.0:
        raise ParameterOutOfRange(f"gamma must exceed -1, got {gamma}")

    def partials(j: int) -> tuple[float, int]:
        if j % 2 == 1:
            k = (j - 1) // 2
            coef = (n + k + gamma + 1.0) / ((gamma + 2 * k + 1.0) * (gamma + 2 * k + 2.0))
        else:
            k = (j - 2) // 2
            coef = (1.0 - n + k) / ((gamma + 2 * k + 1.0) * (gamma + 2 * k + 2.0))
        return coef, (+1 if j % 2 == 1 else -1)

    return evaluate_cf(ContinuedFraction(partials, depth), x)


def jacobi_ratio_cf(
    gamma: float, delta: float, n: int, x: float, depth: int = 60
) -> tuple[float, float]:
    """Jacobi kernel-ratio pieces at shift 1: (cf_value, prefactor).

    cf_value is the minus-signed g-fraction in the variable (1-x)/2 with
    e_{2k} = (-n+k)/(gamma+2k+1), e_{2k-1} = (n+gamma+delta+k)/(gamma+2k),
    equal to F(-n+1, n+gamma+delta+1; gamma+2; (1-x)/2) /
    F(-n, n+gamma+delta+1; gamma+2; (1-x)/2).  The prefactor is

        C = sqrt((gamma+delta+2)^2 (2n+gamma+delta+1)(2n+gamma+delta)^3
                 / (32 n^3 (n+gamma+1)(gamma+1)^2 delta^2)),

    a reporting target like the Laguerre prefactors.
    """
    if gamma <= -1.0 or delta <= 0.0:
        raise ParameterOutOfRange(
            f"need gamma > -1 and delta > 0, got ({gamma}, {delta})"
        )
    if n < 1:
        raise ParameterOutOfRange(f"n must be >= 1, got {n}")
    if not (-1.0 < x <= 1.0):
        raise ParameterOutOfRange(f"x must lie in (-1, 1], got {x}")
    u = (1.0 - x) / 2.0
    cf_value = gauss_cf_ratio(-float(n), n + gamma + delta + 1.0, gamma + 2.0, u, depth)
    s = gamma + delta
    prefactor = math.sqrt(
        (s + 2.0) ** 2
        * (2 * n + s + 1.0)
        * (2 * n + s) ** 3
        / (32.0 * n**3 * (n + gamma + 1.0) * (gamma + 1.0) ** 2 * delta**2)
    )
    return cf_value, prefactor


def hyp_series(kind: str, params: tuple, z: float, terms: int = 200) -> float:
    """Truncated (or exactly terminating) hypergeometric sum.

    kind "2F1" with params (p, q, r) or "1F1" with params (p, r).  A
    nonpositive-integer numerator parameter terminates the series exactly;
    otherwise 2F1 requires |z| < 1.
    """
    if kind == "2F1":
        p, q, r = params
        numerators = (p, q)
    elif kind == "1F1":
        p, r = params
        numerators = (p,)
    else:
        raise ValueError(f"kind must be '2F1' or '1F1', got {kind!r}")
    if r <= 0.0 and float(r).is_integer():
        raise ParameterOutOfRange(f"r must avoid nonpositive integers, got {r}")
    terminating = any(v <= 0 and float(v).is_integer() for v in numerators)
    if kind == "2F1" and not terminating and abs(z) >= 1.0:
        raise Divergent(f"non-terminating 2F1 needs |z| < 1, got z={z}")
    collected = []
    term = 1.0
    for m in range(terms):
        collected.append(term)
        if kind == "2F1":
            term *= (p + m) * (q + m) / ((r + m) * (m + 1.0)) * z
        else:
            term *= (p + m) / ((r + m) * (m + 1.0)) * z
        if term == 0.0:
            break
    # alternating terminating sums cancel heavily; accumulate exactly
    return math.fsum(collected)


# ---------------------------------------------------------------------------
# chain sequences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChainSequence:
    """A sequence l_n with its minimal parameters m_n (m_0 = 0).

    ``positive`` records whether every computed m_n lies in (0, 1), the
    positive chain sequence criterion.  ``complementary`` holds the same
    data for k_n = 1 - l_n (one level deep).
    """

    l: np.ndarray
    m: np.ndarray
    positive: bool
    complementary: "ChainSequence | None" = None


def _minimal_params(l: np.ndarray) -> np.ndarray:
    m = np.empty(l.size + 1)
    m[0] = 0.0
    for n in range(1, l.size + 1):
        den = 1.0 - m[n - 1]
        if den == 0.0:
            raise ZeroDivisionError(f"minimal parameter recurrence hits m_{n-1} = 1")
        m[n] = l[n - 1] / den
    return m


def chain_params(l, n_max: int | None = None) -> ChainSequence:
    """Minimal parameters m_n = l_n / (1 - m_{n-1}) and positivity verdict.

    ``l`` is the sequence l_1..l_N (or a callable n -> l_n used for
    n = 1..n_max).  The complementary sequence k_n = 1 - l_n is analyzed
    the same way and attached.
    """
    if callable(l):
        if n_max is None:
            raise ValueError("n_max is required when l is a callable")
        l_arr = np.array([float(l(n)) for n in range(1, n_max + 1)])
    else:
        l_arr = np.asarray(l, dtype=float)
        if n_max is not None:
            l_arr = l_arr[:n_max]
    if l_arr.size < 1:
        raise ValueError("need at least one chain element")
    m = _minimal_params(l_arr)
    positive = bool(np.all((m[1:] > 0.0) & (m[1:] < 1.0)))
    comp_l = 1.0 - l_arr
    comp_m = _minimal_params(comp_l)
    comp_positive = bool(np.all((comp_m[1:] > 0.0) & (comp_m[1:] < 1.0)))
    comp = ChainSequence(l=comp_l, m=comp_m, positive=comp_positive)
    return ChainSequence(l=l_arr, m=m, positive=positive, complementary=comp)
