"""Archimedean side: Selberg density, simplex quadrature, Jacobi families.

The density on the ordered simplex 0 <= u_1 <= ... <= u_m <= 1 is

    s_m * prod u_i^{alpha/2-1} (1-u_i)^{beta/2-1} * prod_{i<j} |u_i-u_j|^gamma

For m = 1 this is the beta density and Gauss-Jacobi quadrature integrates
polynomials exactly.  For m = 2 the ordered region is mapped by
u_1 = u_2 y, which absorbs the |u_1 - u_2|^gamma factor into the per-axis
weights; the only non-separable remainder is (1 - u_2 y)^{beta/2-1},
evaluated pointwise.  Refinement doubling guards accuracy.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import mpmath
import numpy as np
from scipy.special import roots_jacobi

from .errors import DegenerateNormalization, GammaPole, QuadratureNotConverged
from .partitions import Partition, as_partition, distinct_permutations, partitions_of, weight
from .scalars import DEFAULT_PRECISION, FloatScalar
from .sympoly import SymPolynomial


@dataclass(frozen=True)
class ArchParams:
    """Selberg parameters; the two field specializations are classmethods."""

    alpha: float
    beta: float
    gamma: float
    m: int

    def __post_init__(self):
        if self.alpha <= 0 or self.beta <= 0 or self.gamma <= 0:
            raise GammaPole("alpha, beta, gamma must be positive")

    @classmethod
    def real_grassmannian(cls, n: int, m: int) -> "ArchParams":
        return cls(n - 2 * m + 1, 1, 1, m)

    @classmethod
    def complex_grassmannian(cls, n: int, m: int) -> "ArchParams":
        return cls(2 * (n - 2 * m + 1), 2, 2, m)


def selberg_constant(m: int, alpha, beta, gamma, prec: int = DEFAULT_PRECISION) -> FloatScalar:
    """The normalizing constant s_m of the Selberg density."""
    with mpmath.workprec(prec):
        a, b, g = mpmath.mpf(alpha) / 2, mpmath.mpf(beta) / 2, mpmath.mpf(gamma) / 2
        out = mpmath.mpf(1)
        for j in range(1, m + 1):
            args = [a + b + (m + j - 2) * g, g, a + (j - 1) * g, b + (j - 1) * g, j * g]
            if any(x <= 0 for x in args):
                raise GammaPole(f"nonpositive Gamma argument in s_{m}")
            out *= mpmath.gamma(args[0]) * mpmath.gamma(args[1])
            out /= mpmath.gamma(args[2]) * mpmath.gamma(args[3]) * mpmath.gamma(args[4])
        return FloatScalar(out, prec)


# ---------------------------------------------------------------------------
# Quadrature rules for the normalized measure
# ---------------------------------------------------------------------------

def _jacobi_rule_01(n: int, at_zero: float, at_one: float):
    """Nodes/weights for int_0^1 u^{at_zero} (1-u)^{at_one} f(u) du."""
    x, w = roots_jacobi(n, at_one, at_zero)
    u = (x + 1) / 2
    w = w * 0.5 ** (at_zero + at_one + 1)
    return u, w


@dataclass
class QuadratureRule:
    """Points (npts, m) and weights integrating f against the full density."""

    points: np.ndarray
    weights: np.ndarray

    def integrate(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, values))


def selberg_rule(P: ArchParams, n_nodes: int) -> QuadratureRule:
    if P.m == 1:
        u, w = _jacobi_rule_01(n_nodes, P.alpha / 2 - 1, P.beta / 2 - 1)
        const = float(selberg_constant(1, P.alpha, P.beta, P.gamma).value)
        return QuadratureRule(u.reshape(-1, 1), w * const)
    if P.m == 2:
        a, b, g = P.alpha / 2, P.beta / 2, P.gamma
        # outer u2: weight u2^{2a+g-1} (1-u2)^{b-1}; inner y: y^{a-1} (1-y)^g
        u2, w2 = _jacobi_rule_01(n_nodes, 2 * a + g - 1, b - 1)
        y, wy = _jacobi_rule_01(n_nodes, a - 1, g)
        U2, Y = np.meshgrid(u2, y, indexing="ij")
        W = np.outer(w2, wy) * (1 - U2 * Y) ** (b - 1)
        pts = np.stack([(U2 * Y).ravel(), U2.ravel()], axis=1)
        const = float(selberg_constant(2, P.alpha, P.beta, P.gamma).value)
        return QuadratureRule(pts, W.ravel() * const)
    raise QuadratureNotConverged(f"continuous quadrature implemented for m <= 2, got m={P.m}")


def _sym_values_on_points(poly: SymPolynomial, pts: np.ndarray) -> np.ndarray:
    out = np.zeros(pts.shape[0])
    for nu, c in poly.coeffs.items():
        acc = np.zeros(pts.shape[0])
        for eta in distinct_permutations(nu, poly.m):
            term = np.ones(pts.shape[0])
            for i, e in enumerate(eta):
                if e:
                    term = term * pts[:, i] ** e
            acc += term
        out += float(c) * acc
    return out


def selberg_total(P: ArchParams, tol: float = 1e-8,
                  levels=(40, 80, 160, 320)) -> tuple:
    """Total mass of the normalized density, with the refinement error."""
    vals = []
    for n in levels:
        rule = selberg_rule(P, n)
        vals.append(float(np.sum(rule.weights)))
        if len(vals) >= 2 and abs(vals[-1] - vals[-2]) < tol:
            return vals[-1], abs(vals[-1] - vals[-2])
    raise QuadratureNotConverged(
        f"total mass refinements {vals} did not converge within {tol}")


def inner_product(f: SymPolynomial, g: SymPolynomial, P: ArchParams,
                  tol: float = 1e-9, levels=(80, 160, 320, 640)) -> tuple:
    """<f, g> against the Selberg density, with a refinement error estimate."""
    vals = []
    for n in levels:
        rule = selberg_rule(P, n)
        fv = _sym_values_on_points(f, rule.points)
        gv = _sym_values_on_points(g, rule.points)
        vals.append(rule.integrate(fv * gv))
        if len(vals) >= 2 and abs(vals[-1] - vals[-2]) < tol * max(1.0, abs(vals[-1])):
            return vals[-1], abs(vals[-1] - vals[-2])
    raise QuadratureNotConverged(f"inner product refinements {vals} did not converge")


# ---------------------------------------------------------------------------
# Generalized Jacobi polynomials
# ---------------------------------------------------------------------------

_gs_cache: dict = {}


def gen_jacobi(lam: Partition, P: ArchParams, n_nodes: int = 200) -> SymPolynomial:
    """Gram-Schmidt generalized Jacobi polynomial, normalized ||E||^2 = E(0).

    The whole flag up to |lam| is orthogonalized against a fixed
    quadrature rule; rule-doubling consistency is the caller's test hook
    (gen_jacobi with 2 * n_nodes).
    """
    lam = as_partition(lam)
    key = (P, n_nodes)
    state = _gs_cache.get(key)
    if state is None:
        rule = selberg_rule(P, n_nodes)
        state = {"rule": rule, "raw": [], "records": {}, "flag": []}
        _gs_cache[key] = state
    rule = state["rule"]
    flag = []
    for w in range(weight(lam) + 1):
        flag.extend(sorted(partitions_of(w, max_parts=P.m)))
    for nu in flag:
        if nu in state["records"]:
            continue
        coeffs = {nu: 1.0}
        vals = _sym_values_on_points(SymPolynomial(P.m, {nu: 1}), rule.points)
        for pcoeffs, pvals, pnorm in state["raw"]:
            c = rule.integrate(vals * pvals) / pnorm
            if c:
                for k, pc in pcoeffs.items():
                    coeffs[k] = coeffs.get(k, 0.0) - c * pc
                vals = vals - c * pvals
        norm = rule.integrate(vals * vals)
        state["raw"].append((coeffs, vals, norm))
        value0 = coeffs.get((), 0.0)
        if value0 == 0:
            raise DegenerateNormalization(f"E~ vanishes at 0 for {nu}")
        scale = value0 / norm
        state["records"][nu] = SymPolynomial(P.m, {k: c * scale for k, c in coeffs.items()})
    return state["records"][lam]


def jacobi_1d(lam: int, alpha, beta) -> SymPolynomial:
    """Closed-form normalized Jacobi polynomial on [0,1] (m = 1).

    E_lam(u) = pref * 2F1[-lam, lam + alpha/2 + beta/2 - 1; alpha/2; u],
    exact Fractions for rational parameters.
    """
    if lam < 0:
        raise ValueError(f"lam must be >= 0, got {lam}")
    a = Fraction(alpha) / 2 if isinstance(alpha, (int, Fraction)) else alpha / 2
    b = Fraction(beta) / 2 if isinstance(beta, (int, Fraction)) else beta / 2
    pref = dims_interp_arch(lam, a, b)
    coeffs = {(): pref}
    term = pref
    upper = lam + a + b - 1
    for j in range(lam):
        den = (a + j) * (j + 1)
        term = term * (-(lam - j)) * (upper + j) / den
        coeffs[(j + 1,)] = term
    return SymPolynomial(1, coeffs)


def dims_interp_arch(lam: int, a, b):
    """E_lam(0): the prefactor (a)_lam (a+b)_lam / ((b)_lam lam!) times
    (2 lam - 1 + a + b) / (lam - 1 + a + b)."""
    if lam == 0:
        return Fraction(1) if isinstance(a, (int, Fraction)) else 1.0
    num = 1
    den = 1
    for j in range(lam):
        num = num * (a + j) * (a + b + j)
        den = den * (b + j) * (j + 1)
    return num / den * (2 * lam - 1 + a + b) / (lam - 1 + a + b)


def dims_arch(lam: int, n: int, field: str) -> Fraction:
    """Dimension of the lam-th irreducible constituent for m = 1.

    field "real": E_lam(0; n-1, 1); "complex": (2 lam + n - 1)/(n - 1)
    times the square of binomial(n + lam - 2, lam).
    """
    if lam == 0:
        return Fraction(1)
    if field == "real":
        return dims_interp_arch(lam, Fraction(n - 1, 2), Fraction(1, 2))
    if field == "complex":
        return Fraction(2 * lam + n - 1, n - 1) * comb(n + lam - 2, lam) ** 2
    raise ValueError(f"field must be 'real' or 'complex', got {field!r}")


def beta_moment_inner_product(f: SymPolynomial, g: SymPolynomial,
                              alpha, beta) -> Fraction:
    """Exact m = 1 inner product via beta moments (independent of quadrature).

    int_0^1 u^k dS(u; alpha, beta) = (alpha/2)_k / (alpha/2 + beta/2)_k.
    """
    if f.m != 1 or g.m != 1:
        raise ValueError("beta moments apply to m = 1 only")
    a, ab = Fraction(alpha) / 2, Fraction(alpha) / 2 + Fraction(beta) / 2

    def moment(k: int) -> Fraction:
        out = Fraction(1)
        for j in range(k):
            out *= (a + j) / (ab + j)
        return out

    total = Fraction(0)
    for nu1, c1 in f.coeffs.items():
        for nu2, c2 in g.coeffs.items():
            k = weight(nu1) + weight(nu2)
            total += Fraction(c1) * Fraction(c2) * moment(k)
    return total
