"""Shifted Macdonald polynomials, (q,t)-binomials and the symmetrized basis.

The interpolation polynomial attached to a partition lam in m variables is
the unique degree-|lam| polynomial, symmetric in the shifted coordinates
w_i = x_i t^{-i}, vanishing at x = q^mu for every mu with |mu| <= |lam|,
mu != lam (at most m parts), and taking the prescribed value at x = q^lam.
It is obtained by a square exact linear solve in the basis of monomial
symmetric polynomials in w.

Two exact regimes are supported: q and t both fixed rationals (plain
Gaussian elimination over Fractions), and q symbolic with t a fixed
rational (fraction-free Bareiss elimination over integer-coefficient
polynomials in q).  Ratios of interpolation values are formed det-free, so
generalized binomial coefficients come out as reduced rational functions
of q, and exact q = 0 substitution needs only a common-q-power strip.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional, Sequence, Union

from functools import lru_cache

from .errors import ParameterDegeneracy, PoleAtZero
from .partitions import (
    Partition,
    as_partition,
    conjugate,
    distinct_permutations,
    glex_key,
    leq_contain,
    nstat,
    partitions_of,
    weight,
)
from .scalars import (
    RationalFunction,
    padd,
    pdiv_exact,
    peval,
    pmul,
    pnorm,
    pscale,
    psub,
    strip_q_power,
)


def v_products(lam: Partition, q, t):
    """The cell products v_lam and v'_lam of the Young diagram."""
    lam = as_partition(lam)
    conj = conjugate(lam)
    v = 1
    vp = 1
    for i, row in enumerate(lam, start=1):
        for j in range(1, row + 1):
            arm = lam[i - 1] - j
            leg = conj[j - 1] - i
            v = v * (1 - q ** arm * t ** (leg + 1))
            vp = vp * (1 - q ** (arm + 1) * t ** leg)
    return v, vp


def interp_normalization(lam: Partition, q, t):
    """Value prescribed at x = q^lam: (-1)^|lam| t^{-2n(lam)} q^{n(lam')} v'_lam."""
    lam = as_partition(lam)
    _, vp = v_products(lam, q, t)
    sign = -1 if weight(lam) % 2 else 1
    return sign * t ** (-2 * nstat(lam)) * q ** nstat(conjugate(lam)) * vp


def _basis(m: int, d: int) -> list:
    """Partitions with at most m parts and weight <= d, graded-lex."""
    out = []
    for w in range(d + 1):
        out.extend(sorted(partitions_of(w, max_parts=m)))
    return out


# ---------------------------------------------------------------------------
# Node rows: M_nu evaluated in shifted coordinates at x = q^mu
# ---------------------------------------------------------------------------

def _monomial_value(nu: Partition, wpoint: Sequence):
    """M_nu(w) = sum over distinct rearrangements eta of prod w_i^eta_i."""
    m = len(wpoint)
    total = 0
    for eta in distinct_permutations(nu, m):
        term = 1
        for wi, e in zip(wpoint, eta):
            if e:
                term = term * wi ** e
        total = total + term
    return total


@lru_cache(maxsize=None)
def _row_poly(mu: Partition, nu: Partition, m: int, t: Fraction) -> tuple:
    """M_nu(w(q^mu)) as a polynomial in q with Fraction coefficients.

    w_i(q^mu) = q^{mu_i} t^{-i}, so each rearrangement eta contributes
    t^{-sum i.eta_i} q^{sum mu_i.eta_i}.
    """
    mu_full = tuple(mu) + (0,) * (m - len(mu))
    coeffs = {}
    for eta in distinct_permutations(nu, m):
        qexp = sum(a * b for a, b in zip(mu_full, eta))
        texp = sum((i + 1) * e for i, e in enumerate(eta))
        coeffs[qexp] = coeffs.get(qexp, Fraction(0)) + Fraction(t) ** (-texp)
    out = [Fraction(0)] * (max(coeffs) + 1)
    for e, c in coeffs.items():
        out[e] = c
    return tuple(pnorm(out))


def _row_value(mu: Partition, nu: Partition, m: int, t: Fraction, q: Fraction) -> Fraction:
    return peval(_row_poly(mu, nu, m, t), q)


# ---------------------------------------------------------------------------
# Fixed (q, t): Gaussian elimination over Fractions
# ---------------------------------------------------------------------------

_fixed_cache: dict = {}


def _solve_fixed(lam: Partition, m: int, q: Fraction, t: Fraction) -> dict:
    key = (lam, m, q, t)
    if key in _fixed_cache:
        return _fixed_cache[key]
    d = weight(lam)
    basis = _basis(m, d)
    n = len(basis)
    a = [[_row_value(mu, nu, m, t, q) for nu in basis] for mu in basis]
    rhs = [Fraction(0)] * n
    rhs[basis.index(lam)] = Fraction(interp_normalization(lam, q, t))
    # Gaussian elimination with partial pivoting (first nonzero).
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            raise ParameterDegeneracy(f"singular interpolation system at (q,t)=({q},{t})")
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            rhs[k], rhs[piv] = rhs[piv], rhs[k]
        inv = 1 / a[k][k]
        a[k] = [x * inv for x in a[k]]
        rhs[k] *= inv
        for i in range(n):
            if i != k and a[i][k] != 0:
                c = a[i][k]
                a[i] = [x - c * y for x, y in zip(a[i], a[k])]
                rhs[i] -= c * rhs[k]
    coeffs = {nu: rhs[j] for j, nu in enumerate(basis) if rhs[j] != 0}
    _fixed_cache[key] = coeffs
    return coeffs


# ---------------------------------------------------------------------------
# Symbolic q, fixed rational t: fraction-free Bareiss over Z[q]
# ---------------------------------------------------------------------------

_symbolic_cache: dict = {}


def _symbolic_system(m: int, d: int, t: Fraction):
    """Solve the weight-d interpolation systems det-free.

    Returns (basis, solutions) where solutions maps each lam of weight d to
    a vector z of integer polynomials in q with A z = s * det * e_lam for a
    fixed nonzero scalar s (irrelevant: all uses take ratios).
    """
    key = (m, d, Fraction(t))
    if key in _symbolic_cache:
        return _symbolic_cache[key]
    basis = _basis(m, d)
    n = len(basis)
    targets = [i for i, nu in enumerate(basis) if weight(nu) == d]

    # integer-poly matrix: scale each row by its denominator lcm
    a = []
    for mu in basis:
        row = [_row_poly(mu, nu, m, t) for nu in basis]
        dens = [c.denominator for pol in row for c in pol] or [1]
        s = lcm(*dens)
        a.append([[int(c * s) for c in pol] for pol in row])
    rhs = [[[1] if i == j else [] for j in targets] for i in range(n)]

    prev = [1]
    for k in range(n):
        piv = None
        best = None
        for i in range(k, n):
            pol = a[i][k]
            if pol:
                deg = len(pol) - 1
                if best is None or deg < best:
                    best, piv = deg, i
        if piv is None:
            raise ParameterDegeneracy(f"singular interpolation system at t={t}")
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            rhs[k], rhs[piv] = rhs[piv], rhs[k]
        pk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                a[i][j] = pdiv_exact(psub(pmul(pk, a[i][j]), pmul(aik, a[k][j])), prev)
            for j in range(len(targets)):
                rhs[i][j] = pdiv_exact(psub(pmul(pk, rhs[i][j]), pmul(aik, rhs[k][j])), prev)
            a[i][k] = []
        prev = pk

    det = a[n - 1][n - 1]
    solutions = {}
    for jt, col in enumerate(targets):
        z = [None] * n
        for i in range(n - 1, -1, -1):
            acc = pmul(det, rhs[i][jt])
            for j in range(i + 1, n):
                acc = psub(acc, pmul(a[i][j], z[j]))
            z[i] = pdiv_exact(acc, a[i][i])
        solutions[basis[col]] = z
    result = (basis, solutions)
    _symbolic_cache[key] = result
    return result


def _symbolic_values(lam: Partition, mu: Partition, m: int, t: Fraction):
    """(num, den) integer-poly pair with P*_lam(q^mu)/P*_lam(q^lam) = num/den."""
    d = weight(lam)
    basis, solutions = _symbolic_system(m, d, t)
    z = solutions[lam]
    num = []
    den = []
    for nu, zv in zip(basis, z):
        if not zv:
            continue
        rn = _row_poly(mu, nu, m, t)
        rd = _row_poly(lam, nu, m, t)
        num = padd(num, pmul([c for c in rn], zv)) if rn else num
        den = padd(den, pmul([c for c in rd], zv)) if rd else den
    return num, den


# ---------------------------------------------------------------------------
# Public objects
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShiftedPoly:
    """An interpolation polynomial in the w-monomial basis.

    coeffs maps a partition nu (at most m parts) to the coefficient of the
    monomial symmetric polynomial M_nu(w), w_i = x_i t^{-i}.  Symmetry in
    the w_i is built into the representation.
    """

    m: int
    lam: Partition
    t: Fraction
    q: Optional[Fraction]          # None in the symbolic-q domain
    coeffs: dict

    def degree(self) -> int:
        return max((weight(nu) for nu, c in self.coeffs.items()
                    if not _is_zero(c)), default=0)

    def evaluate_w(self, wpoint: Sequence):
        total = 0
        for nu, c in self.coeffs.items():
            total = total + c * _monomial_value(nu, wpoint)
        return total

    def evaluate_x(self, xpoint: Sequence):
        tf = Fraction(self.t)
        w = [x * tf ** (-(i + 1)) for i, x in enumerate(xpoint)]
        return self.evaluate_w(w)

    def value_at_node(self, mu: Partition):
        """Value at x = q^mu (fixed-q domain only)."""
        if self.q is None:
            raise ValueError("symbolic-q polynomial: use gen_binomial_q")
        mu_full = tuple(mu) + (0,) * (self.m - len(mu))
        return self.evaluate_x([Fraction(self.q) ** e for e in mu_full])


def _is_zero(c) -> bool:
    if isinstance(c, RationalFunction):
        return c.is_zero()
    return c == 0


def shifted_macdonald(lam: Partition, m: int, q, t) -> ShiftedPoly:
    """The interpolation polynomial for lam in m variables.

    Pass a Fraction q for the fixed-(q,t) domain, or q=None for symbolic q
    with RationalFunction coefficients (t must be a fixed rational).
    """
    lam = as_partition(lam)
    if len(lam) > m:
        raise ValueError(f"{lam} has more than {m} parts")
    t = Fraction(t)
    if q is None:
        return _shifted_symbolic(lam, m, t)
    q = Fraction(q)
    if not lam:
        return ShiftedPoly(m, (), t, q, {(): Fraction(1)})
    coeffs = _solve_fixed(lam, m, q, t)
    return ShiftedPoly(m, lam, t, q, dict(coeffs))


def _shifted_symbolic(lam: Partition, m: int, t: Fraction) -> ShiftedPoly:
    if not lam:
        return ShiftedPoly(m, (), t, None, {(): RationalFunction.const(1)})
    d = weight(lam)
    basis, solutions = _symbolic_system(m, d, t)
    z = solutions[lam]
    # normalize: coefficient vector is z * c_lam(q) / (row_lam . z)
    den = []
    for nu, zv in zip(basis, z):
        if zv:
            den = padd(den, pmul(_row_poly(lam, nu, m, t), zv))
    qrf = RationalFunction.q()
    c_lam = interp_normalization(lam, qrf, RationalFunction.const(t))
    denom_rf = RationalFunction(den)
    coeffs = {}
    for nu, zv in zip(basis, z):
        if zv:
            coeffs[nu] = RationalFunction(zv) * c_lam / denom_rf
    return ShiftedPoly(m, lam, t, None, coeffs)


def gen_binomial(mu: Partition, lam: Partition, m: int, q, t) -> Fraction:
    """Generalized binomial (mu over lam)_{q,t} = P*_lam(q^mu)/P*_lam(q^lam)."""
    mu, lam = as_partition(mu), as_partition(lam)
    if mu == lam:
        return Fraction(1)
    if not lam:
        return Fraction(1)
    q, t = Fraction(q), Fraction(t)
    poly = shifted_macdonald(lam, m, q, t)
    num = poly.value_at_node(mu)
    den = interp_normalization(lam, q, t)
    if den == 0:
        raise ParameterDegeneracy(f"normalization vanishes at (q,t)=({q},{t})")
    return num / den


def gen_binomial_q(mu: Partition, lam: Partition, m: int, t) -> RationalFunction:
    """(mu over lam)_{q,t} as a reduced rational function of q (t fixed)."""
    mu, lam = as_partition(mu), as_partition(lam)
    if mu == lam or not lam:
        return RationalFunction.const(1)
    num, den = _symbolic_values(lam, mu, m, Fraction(t))
    if not den:
        raise ParameterDegeneracy(f"interpolation normalization vanished at t={t}")
    return RationalFunction(num, den)


def gen_binomial_at_zero(mu: Partition, lam: Partition, m: int, t) -> Fraction:
    """Exact q = 0 substitution of (mu over lam)_{q,t}.

    Only the common power of q is stripped before evaluating: any further
    common factor of numerator and denominator is a unit at q = 0, so the
    value (and the pole check) agree with the fully reduced function.
    """
    mu, lam = as_partition(mu), as_partition(lam)
    if mu == lam or not lam:
        return Fraction(1)
    num, den = _symbolic_values(lam, mu, m, Fraction(t))
    if not den:
        raise ParameterDegeneracy(f"interpolation normalization vanished at t={t}")
    if not num:
        return Fraction(0)
    num, den = strip_q_power(list(num), list(den))
    if not den or den[0] == 0:
        raise PoleAtZero(f"(mu over lam) has a pole at q=0 for mu={mu}, lam={lam}")
    if not num or num[0] == 0:
        return Fraction(0)
    return Fraction(num[0]) / Fraction(den[0])


def cq_value(lam: Partition, x: Sequence, m: int, t, q) -> Union[Fraction, RationalFunction]:
    """The symmetrized-normalized basis element C^q_lam at an explicit point.

    C^q_lam(x; t) = P*_lam(x_1 t^{1-m}, ..., x_m) / P*_lam(q^lam).
    """
    lam = as_partition(lam)
    t = Fraction(t)
    if not lam:
        return Fraction(1)
    q = Fraction(q)
    poly = shifted_macdonald(lam, m, q, t)
    shifted_x = [xi * t ** (i + 1 - m) for i, xi in enumerate(x)]
    den = interp_normalization(lam, q, t)
    if den == 0:
        raise ParameterDegeneracy(f"normalization vanishes at (q,t)=({q},{t})")
    return poly.evaluate_x(shifted_x) / den


def cq_value_at_partition(lam: Partition, mu: Partition, m: int, t, q) -> Fraction:
    """C^q_lam at the lattice point x = q^mu t^rho; equals (mu over lam)_{q,t}."""
    mu = as_partition(mu)
    q, t = Fraction(q), Fraction(t)
    mu_full = tuple(mu) + (0,) * (m - len(mu))
    x = [q ** e * t ** (m - 1 - i) for i, e in enumerate(mu_full)]
    return cq_value(lam, x, m, t, q)


@dataclass(frozen=True)
class QTBinomial:
    """One generalized binomial value, for grid emission."""

    mu: Partition
    lam: Partition
    value: object

    def __post_init__(self):
        if self.mu == self.lam and self.value != 1:
            raise ValueError("binomial at mu = lam must be 1")


def binomial_grid(max_weight: int, m: int, t, at_zero: bool = True) -> list:
    """All (mu over lam) with lam <= mu, |mu| <= max_weight, graded-lex rows."""
    grid = []
    mus = []
    for w in range(max_weight + 1):
        mus.extend(sorted(partitions_of(w, max_parts=m)))
    for mu in mus:
        for lam in mus:
            if leq_contain(lam, mu):
                if at_zero:
                    val = gen_binomial_at_zero(mu, lam, m, t)
                else:
                    val = gen_binomial_q(mu, lam, m, t)
                grid.append(QTBinomial(mu, lam, val))
    return grid
