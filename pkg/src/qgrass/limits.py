"""The two limit procedures and their verification drivers.

Archimedean limit: substitute (a, b, t) = (q^{alpha/2}, q^{beta/2},
q^{gamma/2}) and let q -> 1.  Non-Archimedean limit: substitute
(a, b, t) = (p^{-alpha}, p^{-beta}, p^{-gamma}), map the point p^{-lam}
to q^{lam} p^{-gamma rho}, and let q -> 0 (exactly, where the quantity
is rational in q).  The Grassmannian parameter pack is
(alpha, beta, gamma) = r (n - 2m + 1, 1, 1).

Each numeric driver reports per-q deviations, a fitted log-log rate, and
a verdict that requires dominated decay over the final three sequence
points together with a final-deviation threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .errors import PoleAtZero
from .padic import (
    NonArchParams,
    dh_infty,
    dims_1d,
    idempotents,
    submodule_count_closed,
)
from .partitions import Partition, as_partition, enumerate_partitions, height, partitions_of
from .qselberg import QParams, atom_point, qdim_1d, qjacobi_1d, qjacobi_record, _mass_raw
from .scalars import DEFAULT_PRECISION
from .selberg import dims_arch, jacobi_1d
from .shifted import gen_binomial_at_zero
from .finite_modules import count_submodules

DEFAULT_QSEQ_NONARCH = (Fraction(1, 10), Fraction(1, 100),
                        Fraction(1, 1000), Fraction(1, 10000))
DEFAULT_QSEQ_ARCH = tuple(1 - Fraction(1, 2 ** j) for j in range(3, 11))


@dataclass
class LimitReport:
    """Outcome of one numeric limit verification."""

    instance: dict
    qs: list
    deviations: list
    rate: float | None
    passed: bool
    detail: str = ""

    def __post_init__(self):
        assert all(d >= 0 for d in self.deviations)


def fit_rate(qs, devs, reference=None) -> float | None:
    """Least-squares slope of log(dev) against log(q or 1-q)."""
    xs, ys = [], []
    for q, d in zip(qs, devs):
        x = float(q) if reference is None else abs(float(q) - reference)
        if d > 0 and x > 0:
            xs.append(math.log(x))
            ys.append(math.log(float(d)))
    if len(xs) < 2:
        return None
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    if sxx == 0:
        return None
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx


def dominated_decay(devs, slack: float = 1e-9) -> bool:
    """Monotone-dominated decay over the final three sequence points."""
    tail = devs[-3:]
    return all(tail[i + 1] <= tail[i] * (1 + slack) + slack
               for i in range(len(tail) - 1))


def nonarch_exponents(P: NonArchParams) -> tuple:
    """(alpha, beta, gamma) = r (n - 2m + 1, 1, 1)."""
    return (P.r * (P.n - 2 * P.m + 1), P.r, P.r)


def nonarch_qparams(P: NonArchParams, q, f2_exponent: str = "coupled") -> QParams:
    alpha, beta, gamma = nonarch_exponents(P)
    pk = Fraction(P.p)
    return QParams(q, pk ** (-alpha), pk ** (-beta), pk ** (-gamma), P.m, f2_exponent)


def arch_qparams(alpha, beta, gamma, m: int, q, prec: int = DEFAULT_PRECISION) -> QParams:
    with mpmath.workprec(prec):
        qv = mpmath.mpf(Fraction(q).numerator) / Fraction(q).denominator
        return QParams(qv, qv ** (mpmath.mpf(alpha) / 2), qv ** (mpmath.mpf(beta) / 2),
                       qv ** (mpmath.mpf(gamma) / 2), m)


# ---------------------------------------------------------------------------
# Measures
# ---------------------------------------------------------------------------

def verify_measure_limit(P: NonArchParams, qs=DEFAULT_QSEQ_NONARCH,
                         weight_cutoff: int = 4, prec: int = DEFAULT_PRECISION,
                         final_tol: float = 1e-3) -> LimitReport:
    """Substituted q-Selberg masses against the non-Archimedean masses."""
    lams = [lam for w in range(weight_cutoff + 1)
            for lam in sorted(partitions_of(w, max_parts=P.m))]
    targets = {lam: dh_infty(lam, P) for lam in lams}
    devs = []
    for q in qs:
        qp = nonarch_qparams(P, q)
        with mpmath.workprec(prec):
            dev = max(abs(_mass_raw(lam, qp, prec)
                          - mpmath.mpf(targets[lam].numerator) / targets[lam].denominator)
                      for lam in lams)
        devs.append(float(dev))
    rate = fit_rate(qs, devs)
    passed = dominated_decay(devs) and devs[-1] < final_tol
    return LimitReport(
        instance={"n": P.n, "m": P.m, "p": P.p, "r": P.r, "cutoff": weight_cutoff},
        qs=[float(q) for q in qs], deviations=devs, rate=rate, passed=passed,
        detail=f"max|qSelberg - dh| over |lam|<={weight_cutoff}")


# ---------------------------------------------------------------------------
# Exact cellular limit
# ---------------------------------------------------------------------------

@dataclass
class ExactVerdict:
    mu: Partition
    lam: Partition
    p: int
    r: int
    lhs: Fraction
    rhs: int
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = self.lhs == self.rhs


def verify_cq_limit(mu: Partition, lam: Partition, p: int, r: int = 1) -> ExactVerdict:
    """Exact q = 0 substitution of the (q,t)-binomial against submodule counts.

    For r = 1 the right side is the brute-force count; for r > 1 it is the
    closed-form count over residue cardinality p^r (itself validated
    against brute force at r = 1).  A pole at q = 0 is reported, never
    swallowed: it would falsify the limit statement.
    """
    mu, lam = as_partition(mu), as_partition(lam)
    m = max(len(mu), len(lam), 1)
    t = Fraction(1, p ** r)
    lhs = gen_binomial_at_zero(mu, lam, m, t)   # may raise PoleAtZero
    if r == 1:
        rhs = count_submodules(mu, lam, p)
    else:
        rhs = submodule_count_closed(mu, lam, p ** r)
    return ExactVerdict(mu, lam, p, r, lhs, rhs)


# ---------------------------------------------------------------------------
# Idempotents
# ---------------------------------------------------------------------------

def verify_idempotent_limit_nonarch(P: NonArchParams, lam: Partition,
                                    qs=DEFAULT_QSEQ_NONARCH, window_level: int | None = None,
                                    prec: int = DEFAULT_PRECISION,
                                    final_tol: float = 1e-2) -> LimitReport:
    """E^q_lam at the mapped lattice points against the Hecke idempotent."""
    lam = as_partition(lam)
    k = window_level or max(height(lam) + 1, 1)
    window = enumerate_partitions(P.m, k)
    es = idempotents(P, k)
    target = next(e for e in es if e.lam == lam)
    devs = []
    for q in qs:
        qp = nonarch_qparams(P, q)
        with mpmath.workprec(prec):
            if P.m == 1:
                poly = qjacobi_1d(height(lam), qp.q, qp.a, qp.b)
            else:
                poly = qjacobi_record(lam, qp, prec).poly
            dev = mpmath.mpf(0)
            for mu in window:
                x = atom_point(mu, qp, prec)
                tv = target.value(mu)
                dev = max(dev, abs(poly.evaluate(x)
                                   - mpmath.mpf(tv.numerator) / tv.denominator))
        devs.append(float(dev))
    rate = fit_rate(qs, devs)
    passed = dominated_decay(devs) and devs[-1] < final_tol
    return LimitReport(
        instance={"n": P.n, "m": P.m, "p": P.p, "r": P.r, "lam": list(lam), "level": k},
        qs=[float(q) for q in qs], deviations=devs, rate=rate, passed=passed,
        detail="max|E^q(q^mu p^-gamma.rho) - e_lam(p^-mu)| over the level window")


def verify_idempotent_limit_arch(n: int, lam: int, field_tag: str = "real",
                                 qs=DEFAULT_QSEQ_ARCH, prec: int = DEFAULT_PRECISION,
                                 final_tol: float = 1e-3) -> LimitReport:
    """Coefficientwise Archimedean limit of the 1-d little q-Jacobi family."""
    if field_tag == "real":
        alpha, beta = n - 1, 1
    elif field_tag == "complex":
        alpha, beta = 2 * (n - 1), 2
    else:
        raise ValueError(f"field must be 'real' or 'complex', got {field_tag!r}")
    target = jacobi_1d(lam, alpha, beta)
    devs = []
    for q in qs:
        qp = arch_qparams(alpha, beta, 1, 1, q, prec)
        with mpmath.workprec(prec):
            poly = qjacobi_1d(lam, qp.q, qp.a, qp.b)
            keys = set(poly.coeffs) | set(target.coeffs)
            tv = {k: mpmath.mpf(Fraction(target.coefficient(k)).numerator)
                  / Fraction(target.coefficient(k)).denominator for k in keys}
            dev = max(abs(poly.coefficient(k) - tv[k]) for k in keys)
        devs.append(float(dev))
    rate = fit_rate(qs, devs, reference=1.0)
    passed = dominated_decay(devs) and devs[-1] < final_tol
    return LimitReport(
        instance={"n": n, "m": 1, "field": field_tag, "lam": lam},
        qs=[float(q) for q in qs], deviations=devs, rate=rate, passed=passed,
        detail="coefficientwise |E^q - E| for the 1-d closed forms")


# ---------------------------------------------------------------------------
# Dimension interpolation
# ---------------------------------------------------------------------------

def verify_qdim_limit_nonarch(P: NonArchParams, lams=range(4),
                              qs=DEFAULT_QSEQ_NONARCH,
                              rel_tol: float = 0.01) -> LimitReport:
    """qdim under the non-Archimedean substitution against dims_1d (m = 1)."""
    alpha, beta, _ = nonarch_exponents(P)
    a = Fraction(P.p) ** (-alpha)
    b = Fraction(P.p) ** (-beta)
    devs = []
    for q in qs:
        dev = 0.0
        for lam in lams:
            target = dims_1d(lam, P)
            val = qdim_1d(lam, Fraction(q), a, b)
            dev = max(dev, abs(float(val) - float(target)) / float(target))
        devs.append(dev)
    rate = fit_rate(qs, devs)
    passed = dominated_decay(devs) and devs[-1] < rel_tol
    return LimitReport(
        instance={"n": P.n, "m": P.m, "p": P.p, "r": P.r, "lams": list(lams)},
        qs=[float(q) for q in qs], deviations=devs, rate=rate, passed=passed,
        detail="relative deviation of qdim from dims_1d")


def verify_qdim_limit_arch(n: int, field_tag: str = "complex", lams=range(4),
                           qs=DEFAULT_QSEQ_ARCH, prec: int = DEFAULT_PRECISION,
                           rel_tol: float = 0.01) -> LimitReport:
    """qdim under the Archimedean substitution against dims_arch (m = 1)."""
    if field_tag == "real":
        alpha, beta = n - 1, 1
    else:
        alpha, beta = 2 * (n - 1), 2
    devs = []
    for q in qs:
        qp = arch_qparams(alpha, beta, 1, 1, q, prec)
        with mpmath.workprec(prec):
            dev = 0.0
            for lam in lams:
                target = float(dims_arch(lam, n, field_tag))
                val = float(qdim_1d(lam, qp.q, qp.a, qp.b))
                dev = max(dev, abs(val - target) / target)
        devs.append(dev)
    rate = fit_rate(qs, devs, reference=1.0)
    passed = dominated_decay(devs) and devs[-1] < rel_tol
    return LimitReport(
        instance={"n": n, "field": field_tag, "lams": list(lams)},
        qs=[float(q) for q in qs], deviations=devs, rate=rate, passed=passed,
        detail="relative deviation of qdim from dims_arch")
