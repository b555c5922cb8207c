"""Quantum side: the q-Selberg atomic measure and its orthogonal family.

The measure lives on the shifted lattice of points q^lam t^rho,
rho = (m-1, ..., 0), with lam running over partitions with at most m
parts.  Its mass factorizes into a normalization constant, local factors
(one per coordinate) and mixed factors (one per coordinate pair); the
local factor carries a^{lam_j} times a power of t whose exponent is
switchable (see QParams.f2_exponent) because the two published forms of
the weight disagree for m >= 2 -- the probability-normalization test
arbitrates, and the coupled exponent t^{2 lam_j (j-1)} is the default.

The multivariable little q-Jacobi polynomials are produced by
Gram-Schmidt over the monomial flag in graded-lex order with respect to
the induced inner product, normalized so that ||E||^2 = E(0).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import mpmath

from .errors import (
    CutoffTooSmall,
    DegenerateNormalization,
    DivergentParameter,
    PoleInDenominator,
)
from .partitions import Partition, as_partition, partitions_of, weight
from .scalars import DEFAULT_PRECISION, FloatScalar, _qpoch_inf_raw, to_mpf
from .sympoly import SymPolynomial, monomial_value


@dataclass(frozen=True)
class QParams:
    """Parameters (q, a, b, t) in (0,1) for the m-variable q-Selberg measure."""

    q: object
    a: object
    b: object
    t: object
    m: int
    f2_exponent: str = "coupled"   # "coupled": t^{2 lam_j (j-1)}; "flat": t^{2j-2}

    def __post_init__(self):
        for name in ("q", "a", "b", "t"):
            v = float(getattr(self, name))
            if not 0 < v < 1:
                raise DivergentParameter(f"{name} must lie in (0,1), got {v}")
        if self.f2_exponent not in ("coupled", "flat"):
            raise ValueError(f"unknown f2 exponent variant {self.f2_exponent!r}")


def atom_point(lam: Partition, P: QParams, prec: int = DEFAULT_PRECISION):
    """The lattice atom x = q^lam t^rho as a tuple of mpf coordinates."""
    lam = tuple(lam) + (0,) * (P.m - len(lam))
    with mpmath.workprec(prec):
        q, t = to_mpf(P.q, prec), to_mpf(P.t, prec)
        return tuple(q ** lam[i] * t ** (P.m - 1 - i) for i in range(P.m))


class _Weights:
    """Mass evaluator for one parameter set; memoizes the q-Pochhammer calls.

    The normalization factor f1 is independent of the atom and computed
    once; the local and mixed factors reuse a small set of distinct
    infinite products, so evaluation over a whole weight shell is cheap.
    """

    def __init__(self, P: QParams, prec: int):
        self.P = P
        self.prec = prec
        with mpmath.workprec(prec):
            self.q = to_mpf(P.q, prec)
            self.a = to_mpf(P.a, prec)
            self.b = to_mpf(P.b, prec)
            self.t = to_mpf(P.t, prec)
            self.tol = mpmath.mpf(2) ** (8 - prec)
            self._qp = {}
            m = P.m
            f1 = mpmath.mpf(1)
            for j in range(1, m + 1):
                f1 *= self.qp(self.a * self.t ** (m - j)) \
                    * self.qp(self.b * self.t ** (j - 1)) * self.qp(self.t ** j)
                f1 /= self.qp(self.a * self.b * self.t ** (m + j - 2)) \
                    * self.qp(self.t) * self.qp(self.q)
            self.f1 = f1

    def qp(self, z):
        out = self._qp.get(z)
        if out is None:
            out = _qpoch_inf_raw(z, self.q, self.tol)
            self._qp[z] = out
        return out

    def mass(self, lam: Partition):
        m = self.P.m
        lam = tuple(lam) + (0,) * (m - len(lam))
        q, a, b, t = self.q, self.a, self.b, self.t
        out = self.f1
        for j in range(1, m + 1):
            lj = lam[j - 1]
            out *= self.qp(q ** (lj + 1) * t ** (m - j)) \
                / self.qp(b * q ** lj * t ** (m - j))
            out *= a ** lj
            if self.P.f2_exponent == "coupled":
                out *= t ** (2 * lj * (j - 1))
            else:
                out *= t ** (2 * (j - 1))
        for j in range(1, m + 1):
            for i in range(j + 1, m + 1):
                d = lam[j - 1] - lam[i - 1]
                out *= self.qp(q ** (d + 1) * t ** (i - j - 1)) \
                    / self.qp(q ** d * t ** (i - j + 1))
                out *= 1 - q ** d * t ** (i - j)
        return out


_weights_cache: dict = {}


def _weights(P: QParams, prec: int) -> _Weights:
    key = (P, prec)
    if key not in _weights_cache:
        _weights_cache[key] = _Weights(P, prec)
    return _weights_cache[key]


def _mass_raw(lam: Partition, P: QParams, prec: int):
    """f1 * f2 * f3 at the atom q^lam t^rho, raw mpf under caller precision."""
    return _weights(P, prec).mass(lam)


def qselberg_mass(lam: Partition, P: QParams, prec: int = DEFAULT_PRECISION) -> FloatScalar:
    """Mass of the atom q^lam t^rho."""
    lam = as_partition(lam)
    if len(lam) > P.m:
        raise ValueError(f"{lam} has more than m={P.m} parts")
    with mpmath.workprec(prec):
        return FloatScalar(_mass_raw(lam, P, prec), prec)


class TotalMass(NamedTuple):
    total: FloatScalar
    tail_bound: FloatScalar
    cutoff: int


def qselberg_total(P: QParams, cutoff: int, tol: float = 1e-10,
                   prec: int = DEFAULT_PRECISION) -> TotalMass:
    """Truncated total mass with a geometric tail estimate.

    The weight-w shell sums decay roughly like a per unit weight; the tail
    is bounded by the last shell times ratio/(1-ratio) with the ratio
    estimated from the last shells.  Raises CutoffTooSmall when the bound
    exceeds tol.
    """
    with mpmath.workprec(prec):
        shells = []
        total = mpmath.mpf(0)
        for w in range(cutoff + 1):
            s = mpmath.mpf(0)
            for lam in partitions_of(w, max_parts=P.m):
                s += _mass_raw(lam, P, prec)
            shells.append(s)
            total += s
        ratios = [shells[i + 1] / shells[i] for i in range(len(shells) - 3, len(shells) - 1)
                  if shells[i] > 0]
        ratio = max(ratios) if ratios else mpmath.mpf(1)
        if ratio >= 1:
            raise CutoffTooSmall(f"shell sums not decaying at cutoff {cutoff}")
        tail = shells[-1] * ratio / (1 - ratio)
        if tail > tol:
            raise CutoffTooSmall(f"tail bound {float(tail):.3g} exceeds tol {tol}")
        return TotalMass(FloatScalar(total, prec), FloatScalar(tail, prec), cutoff)


# ---------------------------------------------------------------------------
# Gram-Schmidt family
# ---------------------------------------------------------------------------

class QJacobiRecord(NamedTuple):
    lam: Partition
    poly: SymPolynomial
    norm_sq: object      # mpf; equals E(0) under the normalization
    value0: object       # mpf


class _Family:
    """Little q-Jacobi family for one parameter set, built incrementally."""

    def __init__(self, P: QParams, prec: int, cutoff: int):
        self.P = P
        self.prec = prec
        self.cutoff = cutoff
        with mpmath.workprec(prec):
            self.atoms = []
            for w in range(cutoff + 1):
                self.atoms.extend(sorted(partitions_of(w, max_parts=P.m)))
            self.masses = [_mass_raw(lam, P, prec) for lam in self.atoms]
            self.points = [atom_point(lam, P, prec) for lam in self.atoms]
        self._mono_values = {}
        self.records = {}
        self._raw = []    # (coeff dict, value list, norm_sq) in flag order
        self._flag_done = []

    def _values_of_monomial(self, nu: Partition):
        if nu not in self._mono_values:
            with mpmath.workprec(self.prec):
                self._mono_values[nu] = [monomial_value(nu, pt) for pt in self.points]
        return self._mono_values[nu]

    def _dot(self, vals1, vals2):
        total = mpmath.mpf(0)
        for v1, v2, mass in zip(vals1, vals2, self.masses):
            total += v1 * v2 * mass
        return total

    def extend_to(self, lam: Partition):
        """Run the flag up to lam in graded-lex order."""
        flag = []
        for w in range(weight(lam) + 1):
            flag.extend(sorted(partitions_of(w, max_parts=self.P.m)))
        with mpmath.workprec(self.prec):
            for nu in flag:
                if nu in self.records:
                    continue
                coeffs = {nu: mpmath.mpf(1)}
                vals = list(self._values_of_monomial(nu))
                for pcoeffs, pvals, pnorm in self._raw:
                    c = self._dot(vals, pvals) / pnorm
                    if c:
                        for key, pc in pcoeffs.items():
                            coeffs[key] = coeffs.get(key, mpmath.mpf(0)) - c * pc
                        vals = [v - c * pv for v, pv in zip(vals, pvals)]
                norm = self._dot(vals, vals)
                self._raw.append((coeffs, vals, norm))
                value0 = coeffs.get((), mpmath.mpf(0))
                if value0 == 0:
                    raise DegenerateNormalization(f"E~ vanishes at 0 for {nu}")
                scale = value0 / norm
                poly = SymPolynomial(self.P.m, {key: c * scale for key, c in coeffs.items()})
                self.records[nu] = QJacobiRecord(nu, poly, value0 * value0 / norm,
                                                 value0 * scale)
        return self.records[lam]


_family_cache: dict = {}


def _family(P: QParams, prec: int, cutoff: int) -> _Family:
    key = (P, prec, cutoff)
    if key not in _family_cache:
        _family_cache[key] = _Family(P, prec, cutoff)
    return _family_cache[key]


def default_cutoff(P: QParams, tol: float = 1e-12, extra: int = 8) -> int:
    """Weight cutoff from the geometric decay rate a of the shell masses."""
    import math
    a = float(P.a)
    n = int(math.ceil(math.log(tol) / math.log(a))) + 2 * P.m + extra
    return max(n, 10)


def qjacobi(lam: Partition, P: QParams, prec: int = DEFAULT_PRECISION,
            cutoff: int | None = None, tol: float = 1e-12) -> SymPolynomial:
    """Multivariable little q-Jacobi polynomial E_lam, normalized ||E||^2 = E(0)."""
    lam = as_partition(lam)
    if cutoff is None:
        cutoff = default_cutoff(P, tol)
    return _family(P, prec, cutoff).extend_to(lam).poly


def qjacobi_record(lam: Partition, P: QParams, prec: int = DEFAULT_PRECISION,
                   cutoff: int | None = None, tol: float = 1e-12) -> QJacobiRecord:
    lam = as_partition(lam)
    if cutoff is None:
        cutoff = default_cutoff(P, tol)
    return _family(P, prec, cutoff).extend_to(lam)


def qdim(lam: Partition, P: QParams, prec: int = DEFAULT_PRECISION,
         cutoff: int | None = None) -> FloatScalar:
    """Dimension interpolant E(0)^2 / ||E||^2 (normalization independent)."""
    rec = qjacobi_record(lam, P, prec, cutoff)
    with mpmath.workprec(prec):
        return FloatScalar(rec.norm_sq, prec)


# ---------------------------------------------------------------------------
# One-dimensional closed forms
# ---------------------------------------------------------------------------

def qjacobi_1d(lam: int, q, a, b, prec: int | None = None) -> SymPolynomial:
    """Normalized little q-Jacobi polynomial in one variable.

    E_lam(x) = pref * 2phi1[q^-lam, q^{lam-1} a b; a; q, qx]; exact Fraction
    coefficients when the inputs are rational, mpf otherwise.
    """
    if lam < 0:
        raise ValueError(f"lam must be >= 0, got {lam}")
    exact = all(isinstance(v, (int, Fraction)) for v in (q, a, b))
    if exact:
        q, a, b = Fraction(q), Fraction(a), Fraction(b)
    else:
        prec = prec or DEFAULT_PRECISION
        q, a, b = to_mpf(q, prec), to_mpf(a, prec), to_mpf(b, prec)
    pref = qdim_1d(lam, q, a, b)
    # series coefficients of x^j: pref * q^j (q^-lam;q)_j (q^{lam-1}ab;q)_j
    #                                   / ((a;q)_j (q;q)_j)
    coeffs = {(): pref}
    term = pref
    q_lam = q ** lam
    upper = a * b * q ** (lam - 1) if lam >= 1 else None
    qj = 1
    for j in range(lam):
        den1 = 1 - a * qj
        den2 = 1 - q * qj
        if den1 == 0 or den2 == 0:
            raise PoleInDenominator(f"little q-Jacobi pole at term {j + 1}")
        term = term * ((q_lam - qj) / q_lam) * (1 - upper * qj) / (den1 * den2) * q
        key = (j + 1,)
        coeffs[key] = term
        qj = qj * q
    return SymPolynomial(1, coeffs)


def qdim_1d(lam: int, q, a, b):
    """Closed-form dimension interpolant for m = 1: the value E_lam(0).

    (1 - a b q^{2 lam - 1}) (a b q^{-1}; q)_lam (a; q)_lam
    / ((1 - a b q^{-1}) (q; q)_lam (b; q)_lam a^lam), with the leading
    (a b q^{-1}) factors cancelled so nothing blows up as q -> 0.
    """
    if lam < 0:
        raise ValueError(f"lam must be >= 0, got {lam}")
    if lam == 0:
        return q ** 0
    num = 1 - a * b * q ** (2 * lam - 1)
    # (ab q^{-1}; q)_lam / (1 - ab q^{-1}) = prod_{i=1}^{lam-1} (1 - ab q^{i-1})
    for i in range(1, lam):
        num = num * (1 - a * b * q ** (i - 1))
    for i in range(lam):
        num = num * (1 - a * q ** i)
    den = a ** lam
    for i in range(lam):
        den = den * (1 - q ** (i + 1)) * (1 - b * q ** i)
    if den == 0:
        raise PoleInDenominator(f"dimension interpolant pole at lam={lam}")
    return num / den
