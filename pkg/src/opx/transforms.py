"""Geronimus and Uvarov transformed polynomials and the four recovery
constructions that rebuild P_n from quasi-type kernel data.

Each recovery returns the explicit coefficient sequences from the matching
linear system (coefficients of P_{n+1}, P_n, P_{n-1} after expanding the
combination); the companion ``*_recovery_poly`` evaluators rebuild the
rational combination so tests can assert Q_n == P_n pointwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ConstraintViolated,
    DegenerateDenominator,
    EvalAtShift,
    PoleAtSample,
    ShiftInsideSupport,
)
from .families import FamilySpec, custom_family, eval_table, norm_products
from .kernels import IteratedKernelContext, KernelContext, iterated_kernel, kernel_poly
from .moments import cauchy_mass, gauss_rule, integrate_until_stable

__all__ = [
    "GeronimusData",
    "UvarovData",
    "RecoveryCoefficients",
    "geronimus_data",
    "geronimus_poly",
    "geronimus_mass0",
    "geronimus_family",
    "op_from_geronimus",
    "uvarov_data",
    "uvarov_poly",
    "recover_christoffel",
    "christoffel_recovery_poly",
    "recover_geronimus",
    "geronimus_recovery_poly",
    "recover_uvarov",
    "uvarov_recovery_poly",
    "recover_order2",
    "order2_constraint_rhs",
    "order2_recovery_poly",
]

_POLE_RTOL = 1e-11


@dataclass(frozen=True)
class GeronimusData:
    """Correction coefficients A_n of the Geronimus-transformed sequence.

    A[n] = A_n = -I_n / I_{n-1} with I_n the principal integral of
    P_n(x)/(k - x); mass0 records the Ltilde(1) value used for verification.
    """

    k: float
    A: np.ndarray
    mass0: float


@dataclass(frozen=True)
class UvarovData:
    """Mixing coefficients T_n of the point-mass (Uvarov) transform."""

    k: float
    r0: float
    T: np.ndarray


@dataclass(frozen=True)
class RecoveryCoefficients:
    """Coefficient sequences of one of the four recovery constructions.

    ``kind`` is one of "christoffel", "geronimus", "uvarov", "order2";
    entries are indexed so that ``gamma[n]``, ``eta[n]``, ... belong to the
    combination that rebuilds P_n (unused slots hold NaN).
    """

    kind: str
    gamma: np.ndarray | None = None
    eta: np.ndarray | None = None
    alpha: np.ndarray | None = None
    beta: np.ndarray | None = None


def _require_outside_support(family: FamilySpec, k: float, what: str) -> None:
    a, b = family.support
    if a <= k <= b:
        raise ShiftInsideSupport(f"{what} requires k outside the support [{a}, {b}], got {k}")


def _principal_integral(family: FamilySpec, k: float, n: int, atol: float = 0.0) -> float:
    """integral of P_n(x) / (k - x) dmu by node doubling."""

    def integrand(xs: np.ndarray) -> np.ndarray:
        return eval_table(family, n, xs)[n] / (k - xs)

    return integrate_until_stable(family, integrand, start_order=32, rtol=1e-11, atol=atol)


def _backward_integrals(family: FamilySpec, k: float, n_max: int, i0: float) -> np.ndarray:
    """I_0..I_n_max by backward (minimal-solution) recurrence scaled to I_0.

    The integrals satisfy I_{n+1} = (k - c_{n+1}) I_n - lambda_{n+1} I_{n-1}
    for n >= 1 and are the minimal solution when k sits outside the support,
    so the downward direction is stable; only I_0 needs quadrature, and its
    integrand 1/(k - x) never changes sign there.
    """
    top = n_max + 60
    trial = np.zeros(top + 2)
    trial[top] = 1.0
    for m in range(top, 0, -1):
        c_next, lam_next = family.coefficient(m + 1)
        trial[m - 1] = ((k - c_next) * trial[m] - trial[m + 1]) / lam_next
        if abs(trial[m - 1]) > 1e250:
            trial /= trial[m - 1]
    return trial[: n_max + 1] * (i0 / trial[0])


def geronimus_data(family: FamilySpec, k: float, n_max: int, mass0: float | None = None) -> GeronimusData:
    """A_1..A_n_max from the defining integrals, plus the verification mass.

    The defining node-doubling quadrature of P_n(x)/(k - x) loses digits to
    cancellation exactly when the integrals decay (oscillating numerator,
    small value); in that regime the backward-recurrence evaluation anchored
    at the quadrature I_0 is used instead, and the two routes must agree to
    1e-7 relative either way.  ``mass0`` defaults to the unique value that
    kills the degree-(1,0) Gram entry, -mu0 / (k - c_1 + A_1).
    """
    _require_outside_support(family, k, "the Geronimus transformation")
    # L1 scale of each integrand from one moderate fixed rule; it feeds the
    # absolute stopping floor (quadrature cannot resolve values below
    # roundoff times this scale) and the route-agreement gate below
    scale_rule = gauss_rule(family, max(64, n_max + 2))
    table = np.abs(eval_table(family, n_max, scale_rule.nodes)) / np.abs(k - scale_rule.nodes)
    l1 = table @ scale_rule.weights
    quad = np.array(
        [_principal_integral(family, k, n, atol=1e-13 * l1[n]) for n in range(n_max + 1)]
    )
    integrals = quad
    if n_max >= 1 and abs(quad[n_max]) < abs(quad[0]):
        # decaying integrals lose relative accuracy to cancellation; the
        # backward minimal-solution recurrence anchored at I_0 does not
        backward = _backward_integrals(family, k, n_max, quad[0])
        agree = np.abs(backward - quad) <= np.maximum(1e-7 * np.abs(quad), 1e-10 * l1)
        if np.all(agree):
            integrals = backward
    A = np.full(n_max + 1, np.nan)
    for n in range(1, n_max + 1):
        if abs(integrals[n - 1]) < 1e-280:
            raise DegenerateDenominator(f"Geronimus denominator integral I_{n-1} underflows")
        A[n] = -integrals[n] / integrals[n - 1]
    if mass0 is None:
        # the degree-1 orthogonality condition gives -mu0/(k - c_1 + A_1),
        # which collapses to -L(1/(k - x)) via I_1 = (k - c_1) I_0 - mu0;
        # the latter form shares the cached integral the functional uses
        mass0 = -cauchy_mass(family, k)
    return GeronimusData(k=k, A=A, mass0=mass0)


def geronimus_mass0(family: FamilySpec, k: float) -> float:
    """The Ltilde(1) value under which the transformed sequence is orthogonal."""
    return geronimus_data(family, k, 1).mass0


def geronimus_family(
    family: FamilySpec, k: float, n_max: int, data: GeronimusData | None = None
) -> FamilySpec:
    """The transformed sequence as a family of its own.

    Matching coefficients in x Pt_n expanded over the P basis gives

        ct_{n+1} = c_{n+1} + A_n - A_{n+1}        (A_0 = 0)
        lt_{n+1} = lambda_{n+1} + A_n (c_n - ct_{n+1}),

    with lt_1 = mass0 by the mass convention.  Applying the Christoffel
    construction to the result at the same k recovers the original
    coefficients (the two transformations are mutually inverse).
    """
    if data is None:
        data = geronimus_data(family, k, n_max + 1)
    if data.A.size < n_max + 2:
        raise ValueError(f"need A_1..A_{n_max + 1}; supplied data stops at {data.A.size - 1}")
    a_seq = np.concatenate([[0.0], data.A[1:]])
    table = []
    for n in range(n_max + 1):
        c_next, lam_next = family.coefficient(n + 1)
        ct = c_next + a_seq[n] - a_seq[n + 1]
        if n == 0:
            table.append((ct, data.mass0))
        else:
            c_n = family.coefficient(n)[0]
            table.append((ct, lam_next + a_seq[n] * (c_n - ct)))

    def coeffs(m: int) -> tuple[float, float]:
        if m > len(table):
            raise ValueError(f"geronimus_family cached only {len(table)} coefficients")
        return table[m - 1]

    return custom_family(coeffs, family.support, data.mass0)


def geronimus_poly(family: FamilySpec, k: float, n: int, x, data: GeronimusData | None = None):
    """Transformed polynomial Pt_n(k; x) = P_n(x) + A_n P_{n-1}(x)."""
    if n == 0:
        return np.ones_like(np.asarray(x)) if np.ndim(x) else 1.0
    if data is None:
        data = geronimus_data(family, k, n)
    xs = np.atleast_1d(np.asarray(x))
    table = eval_table(family, n, xs)
    out = table[n] + data.A[n] * table[n - 1]
    return out if np.ndim(x) else out[0]


def op_from_geronimus(family: FamilySpec, k: float, n: int, x, data: GeronimusData | None = None):
    """Invert the transform: P_n(x) from Pt_{n+1} and Pt_n.

    P_n(x) = [Pt_{n+1}(k;x) + (lambda_{n+1}/A_n) Pt_n(k;x)] / (x - k).
    Expanding the combination over the P basis forces the mixing coefficient
    B_n to satisfy lambda_{n+1} = +B_n A_n (equivalently A_{n+1} =
    c_{n+1} - k - lambda_{n+1}/A_n, the ratio form of the integral
    recurrence), hence the plus sign; a minus-signed variant of this formula
    circulates but fails the direct-evaluation oracle.  The numerator
    vanishes at x = k, but no stable branch is implemented there, so points
    within the pole radius raise EvalAtShift.
    """
    if data is None:
        data = geronimus_data(family, k, n + 1)
    xs = np.atleast_1d(np.asarray(x))
    if np.any(np.abs(xs - k) < _POLE_RTOL * (1.0 + abs(k))):
        raise EvalAtShift(f"evaluation point coincides with the shift k={k}")
    lam = family.coefficient(n + 1)[1]
    if n == 0:
        num = geronimus_poly(family, k, 1, xs, data) + (lam / data.A[1]) * 1.0
    else:
        num = geronimus_poly(family, k, n + 1, xs, data) + (lam / data.A[n]) * geronimus_poly(
            family, k, n, xs, data
        )
    out = num / (xs - k)
    return out if np.ndim(x) else out[0]


def uvarov_data(family: FamilySpec, k: float, r0: float, n_max: int) -> UvarovData:
    """Mixing coefficients T_n of Lhat = L + r0 delta(x - k), n = 0..n_max.

    T_n = r0 P_n(k) P_{n-1}(k) / (N_{n-1} (1 + r0 K_{n-1}(k, k))) with
    N_j = lambda_1...lambda_{j+1} and K the CD kernel; T_0 = 0.  This is the
    classical point-mass formula, which the quadrature oracle confirms; the
    variant with both indices raised to n fails the orthogonality contract
    and is not used.
    """
    if r0 == 0.0:
        raise ValueError("r0 must be nonzero")
    pk = eval_table(family, max(n_max, 1), [k])[:, 0].real
    norms = norm_products(family, max(n_max, 1)).real
    T = np.zeros(n_max + 1)
    kkk = np.cumsum(pk**2 / norms)  # K_n(k,k) partial sums
    for n in range(1, n_max + 1):
        den = 1.0 + r0 * kkk[n - 1]
        if abs(den) < 1e-13 * max(1.0, abs(r0) * kkk[n - 1]):
            raise DegenerateDenominator(f"Uvarov denominator 1 + r0 K_{n-1}(k,k) vanishes at n={n}")
        T[n] = r0 * pk[n] * pk[n - 1] / (norms[n - 1] * den)
    return UvarovData(k=k, r0=r0, T=T)


def uvarov_poly(
    family: FamilySpec, k: float, r0: float, n: int, x, data: UvarovData | None = None
):
    """Point-mass transformed polynomial Ph_n(x) = P_n(x) - T_n Pk_{n-1}(k; x)."""
    if data is None:
        data = uvarov_data(family, k, r0, max(n, 1))
    xs = np.atleast_1d(np.asarray(x))
    table = eval_table(family, n, xs)
    if n == 0:
        out = table[0]
    else:
        ctx = KernelContext(family, k, n)
        out = table[n] - data.T[n] * kernel_poly(ctx, n - 1, xs)
    return out if np.ndim(x) else out[0]


# ---------------------------------------------------------------------------
# recovery constructions
# ---------------------------------------------------------------------------


def recover_christoffel(
    family: FamilySpec, k1: complex, k2: complex, B, n_max: int
) -> RecoveryCoefficients:
    """Sequences (gamma_n, eta_n) rebuilding P_n from an order-one quasi-type
    kernel at k1 and a kernel polynomial at k2.

    ``B[j]`` supplies B_{j+1}, the quasi mixing coefficient of
    T_n = Pk_n(k1;.) + B_n Pk_{n-1}(k1;.).  Entries gamma[n] and eta[n] are
    the values entering the degree-(n+1) combination.
    """
    B = np.asarray(B)
    if B.size < n_max:
        raise ValueError(f"need B_1..B_{n_max}, got {B.size} values")
    pk1 = eval_table(family, n_max + 2, [k1])[:, 0]
    pk2 = eval_table(family, n_max + 2, [k2])[:, 0]
    gamma = np.full(n_max + 1, np.nan, dtype=complex)
    eta = np.full(n_max + 1, np.nan, dtype=complex)
    for n in range(n_max):
        lam = family.coefficient(n + 2)[1]
        c = family.coefficient(n + 2)[0]
        b_next = B[n]  # B_{n+1}
        eta[n] = -(lam + b_next * pk1[n + 1] / pk1[n]) * pk2[n] / pk2[n + 1]
        gamma[n] = c + pk1[n + 2] / pk1[n + 1] - b_next - eta[n]
    if abs(gamma.imag[~np.isnan(gamma.real)]).max(initial=0.0) == 0.0:
        gamma, eta = gamma.real, eta.real
    return RecoveryCoefficients(kind="christoffel", gamma=gamma, eta=eta)


def christoffel_recovery_poly(
    family: FamilySpec,
    k1: complex,
    k2: complex,
    B,
    rc: RecoveryCoefficients,
    n: int,
    x,
):
    """Q_n(x) = [(x-k1) T_n(k1;x) + eta_{n-1} (x-k2) Pk_{n-1}(k2;x)] / (x - gamma_{n-1})."""
    B = np.asarray(B)
    gamma, eta = rc.gamma[n - 1], rc.eta[n - 1]
    if np.any(np.abs(np.asarray(x) - gamma) < _POLE_RTOL * (1.0 + abs(gamma))):
        raise PoleAtSample(f"a sample point hits the pole gamma_{n-1} = {gamma}")
    ctx1 = KernelContext(family, k1, n + 1)
    ctx2 = KernelContext(family, k2, n + 1)
    t_quasi = kernel_poly(ctx1, n, x) + B[n - 1] * kernel_poly(ctx1, n - 1, x)
    return ((x - k1) * t_quasi + eta * (x - k2) * kernel_poly(ctx2, n - 1, x)) / (x - gamma)


def recover_geronimus(
    family: FamilySpec, k1: float, k2: complex, Btilde, n_max: int
) -> RecoveryCoefficients:
    """Sequences (alpha_n, gamma_n, eta_n) for the Geronimus-based recovery.

    ``Btilde[j]`` supplies Bt_{j+1} for the quasi combination at k2.  The
    identities alpha_n = 1 + eta_n hold by construction.
    """
    Btilde = np.asarray(Btilde)
    if Btilde.size < n_max:
        raise ValueError(f"need Btilde_1..Btilde_{n_max}, got {Btilde.size} values")
    gdata = geronimus_data(family, k1, n_max + 1)
    pk2 = eval_table(family, n_max + 1, [k2])[:, 0]
    alpha = np.full(n_max + 1, np.nan, dtype=complex)
    gamma = np.full(n_max + 1, np.nan, dtype=complex)
    eta = np.full(n_max + 1, np.nan, dtype=complex)
    for n in range(1, n_max + 1):
        c, lam = family.coefficient(n + 1)
        bt = Btilde[n - 1]
        den = lam + bt * pk2[n] / pk2[n - 1]
        if abs(den) < 1e-13 * max(1.0, abs(lam)):
            raise DegenerateDenominator(f"recover_geronimus denominator vanishes at n={n}")
        eta[n] = -lam / den
        alpha[n] = 1.0 + eta[n]
        gamma[n] = c * (1.0 + eta[n]) - gdata.A[n + 1] + eta[n] * pk2[n + 1] / pk2[n] - eta[n] * bt
    if abs(np.nan_to_num(gamma.imag)).max() == 0.0:
        alpha, gamma, eta = alpha.real, gamma.real, eta.real
    return RecoveryCoefficients(kind="geronimus", alpha=alpha, gamma=gamma, eta=eta)


def geronimus_recovery_poly(
    family: FamilySpec,
    k1: float,
    k2: complex,
    Btilde,
    rc: RecoveryCoefficients,
    n: int,
    x,
    gdata: GeronimusData | None = None,
):
    """Q_n(x) = [Pt_{n+1}(k1;x) + eta_n (x-k2) T_n(k2;x)] / (alpha_n x - gamma_n)."""
    Btilde = np.asarray(Btilde)
    alpha, gamma, eta = rc.alpha[n], rc.gamma[n], rc.eta[n]
    if np.any(np.abs(alpha * np.asarray(x) - gamma) < _POLE_RTOL * (1.0 + abs(gamma))):
        raise PoleAtSample(f"a sample point hits the pole of the degree-{n} combination")
    if gdata is None:
        gdata = geronimus_data(family, k1, n + 1)
    ctx2 = KernelContext(family, k2, n + 1)
    t_quasi = kernel_poly(ctx2, n, x) + Btilde[n - 1] * kernel_poly(ctx2, n - 1, x)
    pt = geronimus_poly(family, k1, n + 1, x, gdata)
    return (pt + eta * (x - k2) * t_quasi) / (alpha * x - gamma)


def recover_uvarov(
    family: FamilySpec, k1: float, k2: complex, r0: float, Btilde, n_max: int
) -> RecoveryCoefficients:
    """Sequences (alpha_n, beta_n, eta_n) for the point-mass recovery.

    beta_n plays the role the other constructions give to gamma_n (the
    returned ``gamma`` aliases it).  eta_n = alpha_n - 1 identically.
    """
    Btilde = np.asarray(Btilde)
    if Btilde.size < n_max:
        raise ValueError(f"need Btilde_1..Btilde_{n_max}, got {Btilde.size} values")
    udata = uvarov_data(family, k1, r0, n_max)
    pk1 = eval_table(family, n_max + 1, [k1])[:, 0].real
    pk2 = eval_table(family, n_max + 1, [k2])[:, 0]
    alpha = np.full(n_max + 1, np.nan, dtype=complex)
    beta = np.full(n_max + 1, np.nan, dtype=complex)
    eta = np.full(n_max + 1, np.nan, dtype=complex)
    for n in range(1, n_max + 1):
        c, lam = family.coefficient(n + 1)
        bt = Btilde[n - 1]
        den = bt * pk2[n] / pk2[n - 1] + lam
        if abs(den) < 1e-13 * max(1.0, abs(lam)):
            raise DegenerateDenominator(f"recover_uvarov denominator vanishes at n={n}")
        eta[n] = udata.T[n] * (pk1[n] / pk1[n - 1]) / den
        alpha[n] = 1.0 + eta[n]
        beta[n] = k1 + udata.T[n] + (c - bt + pk2[n + 1] / pk2[n]) * eta[n]
    if abs(np.nan_to_num(beta.imag)).max() == 0.0:
        alpha, beta, eta = alpha.real, beta.real, eta.real
    return RecoveryCoefficients(kind="uvarov", alpha=alpha, beta=beta, gamma=beta, eta=eta)


def uvarov_recovery_poly(
    family: FamilySpec,
    k1: float,
    k2: complex,
    r0: float,
    Btilde,
    rc: RecoveryCoefficients,
    n: int,
    x,
    udata: UvarovData | None = None,
):
    """Q_n(x) = [(x-k1) Ph_n(x) + eta_n (x-k2) T_n(k2;x)] / (alpha_n x - beta_n)."""
    Btilde = np.asarray(Btilde)
    alpha, beta, eta = rc.alpha[n], rc.beta[n], rc.eta[n]
    if np.any(np.abs(alpha * np.asarray(x) - beta) < _POLE_RTOL * (1.0 + abs(beta))):
        raise PoleAtSample(f"a sample point hits the pole of the degree-{n} combination")
    if udata is None:
        udata = uvarov_data(family, k1, r0, n)
    ctx2 = KernelContext(family, k2, n + 1)
    t_quasi = kernel_poly(ctx2, n, x) + Btilde[n - 1] * kernel_poly(ctx2, n - 1, x)
    phat = uvarov_poly(family, k1, r0, n, x, udata)
    return ((x - k1) * phat + eta * (x - k2) * t_quasi) / (alpha * x - beta)


def order2_constraint_rhs(
    family: FamilySpec, k1: complex, k2: complex, k3: complex, n_max: int
) -> np.ndarray:
    """Right side of the order-two compatibility constraint for n = 1..n_max:

        P_{n+2}(k1)/P_{n+1}(k1) - P_{n+2}(k2)/P_{n+1}(k2) - R_n,

    where R_n is the value ratio Pk_{n+1}(k2;k3) / Pk_n(k2;k3) of the
    first-shift kernels at the second shift.  Solving the constraint for
    Ltilde_n given Mtilde_n is one linear equation per n.
    """
    pk1 = eval_table(family, n_max + 2, [k1])[:, 0]
    ctx = KernelContext(family, k2, n_max + 2)
    ictx = IteratedKernelContext(ctx, k3)
    out = np.empty(n_max + 1, dtype=complex)
    out[0] = np.nan
    for n in range(1, n_max + 1):
        star_ratio = ictx.star_values[n + 1] / ictx.star_values[n]
        out[n] = pk1[n + 2] / pk1[n + 1] - ctx.pk[n + 2] / ctx.pk[n + 1] - star_ratio
    return out


def recover_order2(
    family: FamilySpec,
    k1: complex,
    k2: complex,
    k3: complex,
    Ltilde,
    Mtilde,
    n_max: int,
    constraint_tol: float = 1e-10,
) -> RecoveryCoefficients:
    """Sequences (alpha_n, beta_n) for the order-two / iterated-kernel recovery.

    ``Ltilde[j]`` and ``Mtilde[j]`` supply (Lt_n, Mt_n) for n = j+1; they
    must satisfy the compatibility constraint (checked against
    ``order2_constraint_rhs``, never silently repaired).  beta_n is taken
    from the matching linear system; the cross-sum ratio enters through
    lambda_{n+2} X_{n+1} / X_n with X_n the cached cross sums.
    """
    Ltilde = np.asarray(Ltilde, dtype=complex)
    Mtilde = np.asarray(Mtilde, dtype=complex)
    if Ltilde.size < n_max or Mtilde.size < n_max:
        raise ValueError(f"need Ltilde_1..Ltilde_{n_max} and Mtilde_1..Mtilde_{n_max}")
    pk1 = eval_table(family, n_max + 2, [k1])[:, 0]
    ctx = KernelContext(family, k2, n_max + 2)
    ictx = IteratedKernelContext(ctx, k3)
    rhs = order2_constraint_rhs(family, k1, k2, k3, n_max)
    alpha = np.full(n_max + 1, np.nan, dtype=complex)
    beta = np.full(n_max + 1, np.nan, dtype=complex)
    for n in range(1, n_max + 1):
        c, lam = family.coefficient(n + 1)
        lam2 = family.coefficient(n + 2)[1]
        lt, mt = Ltilde[n - 1], Mtilde[n - 1]
        lhs = lt + mt * pk1[n] / (lam * pk1[n - 1])
        scale = max(1.0, abs(lhs), abs(rhs[n]))
        if abs(lhs - rhs[n]) > constraint_tol * scale:
            raise ConstraintViolated(
                f"(Ltilde_{n}, Mtilde_{n}) violate the compatibility constraint: "
                f"|{lhs} - {rhs[n]}| > {constraint_tol} * {scale}"
            )
        alpha[n] = -(1.0 / lam) * mt * pk1[n] / pk1[n - 1]
        cross_ratio = ictx.cd_cross[n + 1] / ictx.cd_cross[n]
        beta[n] = lt * pk1[n + 1] / pk1[n] - mt + lam2 * cross_ratio + alpha[n] * c
    return RecoveryCoefficients(kind="order2", alpha=alpha, beta=beta)


def order2_recovery_poly(
    family: FamilySpec,
    k1: complex,
    k2: complex,
    k3: complex,
    Ltilde,
    Mtilde,
    rc: RecoveryCoefficients,
    n: int,
    x,
):
    """Q_n(x) = [(x-k1) S_{n+1}(k1;x) - (x-k2)(x-k3) Pkk_n(k2,k3;x)] / (alpha_n x - beta_n).

    S_{n+1} is the order-two quasi combination Pk_{n+1} + Lt_n Pk_n +
    Mt_n Pk_{n-1} at k1, and Pkk_n the iterated kernel polynomial.
    """
    Ltilde = np.asarray(Ltilde, dtype=complex)
    Mtilde = np.asarray(Mtilde, dtype=complex)
    alpha, beta = rc.alpha[n], rc.beta[n]
    if np.any(np.abs(alpha * np.asarray(x) - beta) < _POLE_RTOL * (1.0 + abs(beta))):
        raise PoleAtSample(f"a sample point hits the pole of the degree-{n} combination")
    ctx1 = KernelContext(family, k1, n + 2)
    s_quasi = (
        kernel_poly(ctx1, n + 1, x)
        + Ltilde[n - 1] * kernel_poly(ctx1, n, x)
        + Mtilde[n - 1] * kernel_poly(ctx1, n - 1, x)
    )
    ctx2 = KernelContext(family, k2, n + 2)
    ictx = IteratedKernelContext(ctx2, k3)
    iter_val = iterated_kernel(ictx, n, x)
    return ((x - k1) * s_quasi - (x - k2) * (x - k3) * iter_val) / (alpha * x - beta)
