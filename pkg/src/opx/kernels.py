"""Christoffel-transformed (kernel) polynomials.

For a shift k with P_j(k) != 0 the monic kernel polynomials are

    Pk_n(k; x) = (x - k)^(-1) [P_{n+1}(x) - (P_{n+1}(k)/P_n(k)) P_n(x)],

orthogonal with respect to L*(p) = L((x - k) p).  Near x = k the divided
difference loses ~|x - k|^(-1) digits, so evaluation switches to the
equivalent Christoffel-Darboux sum

    Pk_n(k; x) = lambda_1...lambda_{n+1} P_n(k)^(-1) K_n(x, k),
    K_n(x, y)  = sum_j P_j(x) P_j(y) / (lambda_1...lambda_{j+1}).

Contexts cache P_j(k), the norm products, and the CD partial sums; they
also carry ratio-form caches (P_j(k)/P_{j-1}(k) and normalized squares)
that stay finite where the raw values under- or overflow, which is what the
ratio-limit machinery at large n runs on.
"""

from __future__ import annotations

import numpy as np

from .errors import IteratedUndefined, KernelUndefined
from .families import FamilySpec, custom_family, eval_table, norm_products
from .moments import gauss_rule

__all__ = [
    "KernelContext",
    "IteratedKernelContext",
    "kernel_poly",
    "kernel_recurrence",
    "kernel_family",
    "cd_kernel",
    "op_from_kernels",
    "iterated_kernel",
    "product_orthogonality_check",
]

# |x - k| below this multiple of (1 + |k|) switches kernel_poly to the CD sum
SWITCH_RADIUS = 1e-4
# relative scale below which P_j(k) counts as a genuine zero (see __init__)
ZERO_RTOL = 1e-13


class KernelContext:
    """Caches everything the kernel formulas need for one family and shift.

    Immutable after construction; construction fails with KernelUndefined
    when some P_j(k) vanishes relative to the scale of its own recurrence
    step max(|(k - c_j) P_{j-1}(k)|, |lambda_j P_{j-2}(k)|), which catches
    genuine zeros without misfiring on geometrically decaying sequences.
    """

    def __init__(self, family: FamilySpec, k: complex, n_max: int):
        if n_max < 0:
            raise ValueError("n_max must be >= 0")
        self.family = family
        self.k = k
        self.n_max = n_max
        top = n_max + 2  # P_j(k) for j = 0..n_max+2 (op_from_kernels needs n+2)
        self.pk = eval_table(family, top + 1, [k])[:, 0]
        pairs = [family.coefficient(n) for n in range(1, top + 3)]
        self._pairs = pairs
        # zero detection against the recurrence-step scale (scale-relative, so
        # geometrically decaying but nonvanishing sequences pass at any n_max)
        for j in range(1, top + 2):
            c_j, lam_j = pairs[j - 1]
            scale = abs((k - c_j) * self.pk[j - 1])
            if j >= 2:
                scale = max(scale, abs(lam_j * self.pk[j - 2]))
            if abs(self.pk[j]) < ZERO_RTOL * scale or self.pk[j] == 0.0:
                raise KernelUndefined(
                    f"P_{j}({k}) = {self.pk[j]} vanishes; kernel sequence undefined"
                )
        self.norms = norm_products(family, top + 1)
        # ratio-form caches: rho_j = P_j/P_{j-1}, t_j = P_j^2/N_j, S_n = sum t_j
        dtype = self.pk.dtype
        rho = np.empty(top + 2, dtype=dtype)
        t = np.empty(top + 2, dtype=dtype)
        partials = np.empty(top + 2, dtype=dtype)
        t[0] = 1.0 / pairs[0][1]
        partials[0] = t[0]
        rho[0] = np.nan  # undefined; kept so rho[j] pairs with P_j/P_{j-1}
        for j in range(1, top + 2):
            c_j, lam_j = pairs[j - 1]
            rho[j] = (k - c_j) if j == 1 else (k - c_j) - lam_j / rho[j - 1]
            t[j] = t[j - 1] * rho[j] ** 2 / pairs[j][1]
            partials[j] = partials[j - 1] + t[j]
        self.ratios = rho
        self.weighted_squares = t
        self.cd_partials = partials

    def __repr__(self) -> str:
        return f"KernelContext({self.family!r}, k={self.k}, n_max={self.n_max})"


def cd_kernel(ctx: KernelContext, n: int, x):
    """Christoffel-Darboux kernel K_n(x, k) as the explicit sum."""
    if n > ctx.n_max + 2:
        raise ValueError(f"n={n} exceeds cached range {ctx.n_max + 2}")
    xs = np.atleast_1d(np.asarray(x))
    table = eval_table(ctx.family, n, xs)
    out = (table.T * (ctx.pk[: n + 1] / ctx.norms[: n + 1])).sum(axis=1)
    return out if np.ndim(x) else out[0]


def kernel_poly(ctx: KernelContext, n: int, x):
    """Monic kernel polynomial Pk_n(k; x); scalar or array x.

    Uses the divided difference away from k and the CD sum inside the
    switch radius; the two branches agree on the overlap.
    """
    if n > ctx.n_max + 1:
        raise ValueError(f"n={n} exceeds context n_max+1 = {ctx.n_max + 1}")
    if n == 0:
        return np.ones_like(np.asarray(x)) if np.ndim(x) else 1.0 * (1 + 0 * x)
    xs = np.atleast_1d(np.asarray(x))
    dtype = complex if (np.iscomplexobj(xs) or np.iscomplexobj(ctx.pk)) else float
    xs = xs.astype(dtype)
    out = np.empty_like(xs)
    near = np.abs(xs - ctx.k) < SWITCH_RADIUS * (1.0 + abs(ctx.k))
    if np.any(~near):
        far = xs[~near]
        table = eval_table(ctx.family, n + 1, far)
        out[~near] = (table[n + 1] - ctx.pk[n + 1] / ctx.pk[n] * table[n]) / (far - ctx.k)
    if np.any(near):
        close = xs[near]
        table = eval_table(ctx.family, n, close)
        ksum = (table.T * (ctx.pk[: n + 1] / ctx.norms[: n + 1])).sum(axis=1)
        out[near] = ctx.norms[n] / ctx.pk[n] * ksum
    return out if np.ndim(x) else out[0]


def kernel_recurrence(ctx: KernelContext, n_max: int) -> np.ndarray:
    """Recurrence pairs (c*_n, lambda*_n) of the kernel family, n = 1..n_max.

    lambda*_n = lambda_n P_n(k) P_{n-2}(k) / P_{n-1}(k)^2 for n >= 2, and
    c*_n = c_{n+1} - (P_n(k)^2 - P_{n-1}(k) P_{n+1}(k)) / (P_{n-1}(k) P_n(k)).
    The unused first entry follows the mass convention
    lambda*_1 := L*(1) = (c_1 - k) mu0.
    """
    if n_max > ctx.n_max + 1:
        raise ValueError(f"n_max={n_max} exceeds context range {ctx.n_max + 1}")
    pk = ctx.pk
    pairs = np.empty((n_max, 2), dtype=complex)
    for n in range(1, n_max + 1):
        c_next = ctx.family.coefficient(n + 1)[0]
        c_star = c_next - (pk[n] ** 2 - pk[n - 1] * pk[n + 1]) / (pk[n - 1] * pk[n])
        if n == 1:
            lam_star = (ctx.family.coefficient(1)[0] - ctx.k) * ctx.family.mu0
        else:
            lam_n = ctx.family.coefficient(n)[1]
            lam_star = lam_n * pk[n] * pk[n - 2] / pk[n - 1] ** 2
        pairs[n - 1] = (c_star, lam_star)
    if abs(pairs.imag).max() == 0.0:
        return pairs.real
    return pairs


def kernel_family(ctx: KernelContext, n_max: int) -> FamilySpec:
    """The Christoffel-shifted family as a FamilySpec of its own.

    Support is inherited; the mass is L*(1).  Coefficients may be complex
    for complex shifts, in which case only evaluation (not quadrature) is
    meaningful for the returned family.
    """
    pairs = kernel_recurrence(ctx, n_max)
    table = [tuple(row) for row in pairs]

    def coeffs(n: int) -> tuple[float, float]:
        if n > len(table):
            raise ValueError(f"kernel_family cached only {len(table)} coefficients")
        c, lam = table[n - 1]
        return (c, lam)

    mu0_star = table[0][1]
    return custom_family(coeffs, ctx.family.support, mu0_star)


def op_from_kernels(ctx: KernelContext, n: int, x):
    """Reconstruct P_{n+1}(x) = Pk_{n+1}(k;x) - (P_n(k)/P_{n+1}(k)) lambda_{n+2} Pk_n(k;x)."""
    lam = ctx.family.coefficient(n + 2)[1]
    return kernel_poly(ctx, n + 1, x) - ctx.pk[n] / ctx.pk[n + 1] * lam * kernel_poly(ctx, n, x)


class IteratedKernelContext:
    """Two successive Christoffel shifts: first k2, then k3.

    Caches the cross sums X_n = sum_j P_j(k3) P_j(k2) / (lambda_1...lambda_{j+1})
    and the values Pk_j(k2; k3) of the first-shift kernels at the second
    shift.  Shifts in conjugate half planes keep every X_n away from zero.
    """

    def __init__(self, base: KernelContext, k3: complex):
        self.base = base
        self.k3 = k3
        n_top = base.n_max + 2
        pk3 = eval_table(base.family, n_top + 1, [k3])[:, 0]
        cross = np.cumsum(pk3 * base.pk[: n_top + 2] / base.norms[: n_top + 2])
        scale = np.maximum.accumulate(np.abs(pk3 * base.pk[: n_top + 2] / base.norms[: n_top + 2]))
        bad = np.abs(cross) < 1e-13 * np.maximum(scale, 1e-300)
        if np.any(bad):
            j = int(np.argmax(bad))
            raise IteratedUndefined(f"cross sum X_{j} vanishes at (k2={base.k}, k3={k3})")
        self.cd_cross = cross
        self.star_values = base.norms[: n_top + 2] / base.pk[: n_top + 2] * cross

    @property
    def k2(self) -> complex:
        return self.base.k


def iterated_kernel(ictx: IteratedKernelContext, n: int, x):
    """Twice-shifted monic kernel polynomial of degree n.

    Built by composition: the first shift is realized through the kernel
    recurrence coefficients, and the plain kernel construction is applied
    to that family at the second shift.
    """
    if n == 0:
        return np.ones_like(np.asarray(x)) if np.ndim(x) else 1.0
    if n > ictx.base.n_max - 2:
        raise ValueError(f"n={n} needs a base context with n_max >= {n + 2}")
    shifted = kernel_family(ictx.base, n + 3)
    ctx2 = KernelContext(shifted, ictx.k3, max(n - 1, 0))
    return kernel_poly(ctx2, n, x)


def product_orthogonality_check(
    family: FamilySpec, n: int, m: int, quad_order: int
) -> float:
    """Tensor-quadrature value of the product-measure double integral

        integral integral (x - u)^2 K_n(x, u) K_m(x, u) dmu(u) dmu(x).

    Vanishes for n != m; for n = m it equals twice the square of the
    orthonormal-side recurrence coefficient (2 * lambda_{n+2} in the monic
    convention), which the tests pin empirically from the n = m = 0 case.
    """
    if quad_order < n + m + 3:
        raise ValueError(f"quad_order must be >= n+m+3 = {n + m + 3}")
    rule = gauss_rule(family, quad_order)
    top = max(n, m)
    table = eval_table(family, top, rule.nodes)  # (top+1, M)
    norms = norm_products(family, top)
    kn = (table[: n + 1].T / norms[: n + 1]) @ table[: n + 1]
    km = (table[: m + 1].T / norms[: m + 1]) @ table[: m + 1]
    diff2 = (rule.nodes[:, None] - rule.nodes[None, :]) ** 2
    return float(rule.weights @ (diff2 * kn * km) @ rule.weights)
