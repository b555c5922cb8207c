"""Non-Archimedean side: orbit measures, Hecke bases, idempotents.

All quantities live over the ring of integers of a local field with
residue cardinality p^r and depend on the field only through p^r, so the
bracket symbols are always taken at q = p^{-r}.  Everything here is exact
rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceeded, DegenerateGram, InvalidOrbit
from .finite_modules import structure_constants
from .partitions import (
    Partition,
    as_partition,
    conjugate,
    enumerate_partitions,
    height,
    rank,
    weight,
)
from .scalars import bracket_factorial, gauss_binomial, gauss_multinomial
from .shifted import gen_binomial_at_zero


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class NonArchParams:
    """Grassmannian parameters over a non-Archimedean local field."""

    n: int
    m: int
    p: int
    r: int = 1

    def __post_init__(self):
        if self.m < 0 or self.m > self.n // 2:
            raise ValueError(f"need m <= n/2, got m={self.m}, n={self.n}")
        if not _is_prime(self.p):
            raise ValueError(f"p must be prime, got {self.p}")
        if self.r < 1:
            raise ValueError(f"residue degree must be >= 1, got {self.r}")

    @property
    def q(self) -> Fraction:
        """The bracket parameter p^{-r}."""
        return Fraction(1, self.p ** self.r)


def _conj_padded(lam: Partition, k: int):
    conj = conjugate(lam)
    return tuple(conj) + (0,) * (k - len(conj))


def dh_level1(lam: Partition, P: NonArchParams) -> Fraction:
    """Level-1 orbit mass: the q-Johnson weight of the intersection column.

    dh_1(lam) = [m, c][n-m, m-c] / [n, m] * p^{-r c (n-2m+c)} with c = lam'_1.
    """
    lam = as_partition(lam)
    if height(lam) > 1:
        raise InvalidOrbit(f"{lam} is not a level-1 orbit (height > 1)")
    c = rank(lam)
    if c > P.m:
        raise InvalidOrbit(f"{lam} has more than m={P.m} parts")
    q = P.q
    val = gauss_binomial(P.m, c, q) * gauss_binomial(P.n - P.m, P.m - c, q) \
        / gauss_binomial(P.n, P.m, q)
    return val * Fraction(1, P.p ** (P.r * c * (P.n - 2 * P.m + c)))


def _level_ratio(c_prev: int, c_k: int, P: NonArchParams) -> Fraction:
    """dh_k(lam) / dh_{k-1}(bar lam) in terms of conjugate parts."""
    q = P.q
    w = P.n - 2 * P.m
    val = gauss_binomial(c_prev, c_k, q) \
        * bracket_factorial(w + c_prev, q) / bracket_factorial(w + c_k, q)
    return val * Fraction(1, P.p ** (P.r * c_k * (w + c_k)))


def dh_level(lam: Partition, k: int, P: NonArchParams) -> Fraction:
    """Orbit mass at level k; masses over all of Lambda_m^k sum to 1."""
    lam = as_partition(lam)
    if k < 1:
        raise InvalidOrbit(f"level must be >= 1, got {k}")
    if height(lam) > k or rank(lam) > P.m:
        raise InvalidOrbit(f"{lam} is not in Lambda_{P.m}^{k}")
    conj = _conj_padded(lam, k)
    out = dh_level1((1,) * conj[0], P)
    for j in range(1, k):
        out *= _level_ratio(conj[j - 1], conj[j], P)
    return out


def dh_infty(lam: Partition, P: NonArchParams) -> Fraction:
    """Mass of the point p^{-lam} for the full (infinite-level) measure."""
    lam = as_partition(lam)
    if rank(lam) > P.m:
        raise InvalidOrbit(f"{lam} has more than m={P.m} parts")
    q = P.q
    conj = conjugate(lam)
    parts = (P.m - (conj[0] if conj else 0),) + tuple(
        conj[i] - (conj[i + 1] if i + 1 < len(conj) else 0) for i in range(len(conj)))
    val = gauss_multinomial(P.m, parts, q) \
        * bracket_factorial(P.n - P.m, q) \
        / (bracket_factorial(P.m - (conj[0] if conj else 0), q)
           * bracket_factorial(P.n - 2 * P.m, q)) \
        / gauss_binomial(P.n, P.m, q)
    expo = sum(c * c for c in conj) + (P.n - 2 * P.m) * sum(conj)
    return val * Fraction(1, P.p ** (P.r * expo))


def dh_table(P: NonArchParams, k: int) -> dict:
    """All level-k orbit masses, keyed by partition in graded-lex order."""
    return {lam: dh_level(lam, k, P) for lam in enumerate_partitions(P.m, k)}


def cellular_value(lam: Partition, mu: Partition, P: NonArchParams) -> Fraction:
    """c_lam(p^{-mu}): the number of type-lam submodules in a type-mu module.

    Computed exactly as the (q,t)-binomial at (q, t) = (0, p^{-r}).
    """
    lam, mu = as_partition(lam), as_partition(mu)
    return gen_binomial_at_zero(mu, lam, P.m, P.q)


# ---------------------------------------------------------------------------
# Hecke elements at finite level
# ---------------------------------------------------------------------------

@dataclass
class HeckeElement:
    """A bi-invariant kernel at level k, stored by its orbit values."""

    level: int
    values: dict
    lam: Partition = None   # label, when the element is a basis member

    def value(self, mu: Partition) -> Fraction:
        return self.values.get(as_partition(mu), Fraction(0))

    def scaled(self, c) -> "HeckeElement":
        return HeckeElement(self.level, {k: v * c for k, v in self.values.items()}, self.lam)

    def minus(self, other: "HeckeElement") -> "HeckeElement":
        keys = set(self.values) | set(other.values)
        return HeckeElement(self.level,
                            {k: self.value(k) - other.value(k) for k in keys}, self.lam)

    def __eq__(self, other):
        if not isinstance(other, HeckeElement):
            return NotImplemented
        keys = set(self.values) | set(other.values)
        return self.level == other.level and all(self.value(k) == other.value(k) for k in keys)


def inner_product(f: HeckeElement, g: HeckeElement, P: NonArchParams, k: int) -> Fraction:
    """<f, g>_k = sum over Lambda_m^k of f g dh_k."""
    table = dh_table(P, k)
    return sum((f.value(mu) * g.value(mu) * mass for mu, mass in table.items()),
               Fraction(0))


def cellular_element(lam: Partition, P: NonArchParams, k: int) -> HeckeElement:
    """The cellular basis element c_lam as a function on level-k orbits."""
    lam = as_partition(lam)
    orbits = enumerate_partitions(P.m, k)
    vals = {mu: cellular_value(lam, mu, P) for mu in orbits}
    return HeckeElement(k, vals, lam)


def idempotents(P: NonArchParams, k: int) -> list:
    """Minimal idempotents of the level-k Hecke algebra, graded-lex order.

    Gram-Schmidt over the cellular flag: e_lam is the unique element of
    span{c_mu : mu <= lam} orthogonal to every earlier flag member, scaled
    so that e_lam(0) = |e_lam|^2, where the value "at 0" of a level-k
    element is its value at the diagonal orbit (k, ..., k).
    """
    orbits = enumerate_partitions(P.m, k)
    diag = (k,) * P.m if k > 0 else ()
    table = dh_table(P, k)

    def dot(f, g):
        return sum((f.value(mu) * g.value(mu) * mass for mu, mass in table.items()),
                   Fraction(0))

    out = []
    raw = []
    for lam in orbits:
        eps = cellular_element(lam, P, k)
        for prev, prev_norm in raw:
            coef = dot(eps, prev) / prev_norm
            if coef != 0:
                eps = eps.minus(prev.scaled(coef))
        eps.lam = lam
        norm = dot(eps, eps)
        if norm == 0:
            raise DegenerateGram(f"cellular Gram matrix singular at {lam}")
        raw.append((eps, norm))
        out.append(eps.scaled(eps.value(diag) / norm))
    for e, lam in zip(out, orbits):
        e.lam = lam
    return out


def grassmannian_size(n: int, m: int, p: int, r: int, k: int) -> int:
    """|Gr(m, n, O_k)|: free rank-m submodules of (O_k)^n."""
    if k == 0:
        return 1
    q = Fraction(1, p ** r)
    base = gauss_binomial(n, m, q) * Fraction(p ** r) ** (m * (n - m))
    size = base * Fraction(p ** r) ** ((k - 1) * m * (n - m))
    assert size.denominator == 1
    return int(size)


def unit_element(P: NonArchParams, k: int) -> HeckeElement:
    """The convolution unit: |X| times the delta at the diagonal orbit."""
    size = grassmannian_size(P.n, P.m, P.p, P.r, k)
    diag = (k,) * P.m if k > 0 else ()
    return HeckeElement(k, {diag: Fraction(size)})


def convolve(f: HeckeElement, g: HeckeElement, P: NonArchParams) -> HeckeElement:
    """Convolution product from counted structure constants (r = 1 only).

    (f * g)(nu) = |X|^{-1} sum_{lam, mu} f(lam) g(mu) N^nu_{lam mu} where
    N counts points x with prescribed intersection types against a fixed
    pair of type nu.
    """
    if f.level != g.level:
        raise InvalidOrbit(f"levels differ: {f.level} != {g.level}")
    if P.r != 1:
        raise BudgetExceeded("structure constants are counted over Z/p^k (r = 1)")
    k = f.level
    constants = structure_constants(P.n, P.m, P.p, k)
    size = grassmannian_size(P.n, P.m, P.p, P.r, k)
    vals = {}
    for (lam, mu, nu), count in constants.items():
        c = f.value(lam) * g.value(mu)
        if c:
            vals[nu] = vals.get(nu, Fraction(0)) + c * count
    return HeckeElement(k, {nu: v / size for nu, v in vals.items() if v})


# ---------------------------------------------------------------------------
# One-dimensional closed forms
# ---------------------------------------------------------------------------

def submodule_count_closed(mu: Partition, lam: Partition, card: int) -> int:
    """Closed-form count of type-lam submodules in a type-mu module.

    The classical product over conjugate rows with Gaussian binomials at
    residue cardinality card; validated against the brute-force oracle at
    r = 1 and used as the comparison path for r > 1.
    """
    mu, lam = as_partition(mu), as_partition(lam)
    from .partitions import leq_contain
    if not leq_contain(lam, mu):
        return 0
    mu_c = conjugate(mu)
    lam_c = conjugate(lam)
    depth = len(mu_c)
    mu_c = tuple(mu_c) + (0,)
    lam_c = tuple(lam_c) + (0,) * (depth + 1 - len(lam_c))
    q = Fraction(1, card)
    out = Fraction(1)
    for i in range(depth):
        nbig = mu_c[i] - lam_c[i + 1]
        ksmall = lam_c[i] - lam_c[i + 1]
        out *= Fraction(card) ** (lam_c[i + 1] * (mu_c[i] - lam_c[i]))
        out *= gauss_binomial(nbig, ksmall, q) * Fraction(card) ** (ksmall * (nbig - ksmall))
    assert out.denominator == 1
    return int(out)


def proj_count(n: int, p: int, r: int, k: int) -> Fraction:
    """|P^{n-1}(O/p^k)| = (1 - p^{-rn}) / (1 - p^{-r}) p^{r(n-1)k}; 1 at k=0."""
    if k == 0:
        return Fraction(1)
    pr = Fraction(p ** r)
    return (1 - pr ** (-n)) / (1 - pr ** (-1)) * pr ** ((n - 1) * k)


def dims_1d(lam: int, P: NonArchParams) -> Fraction:
    """Dimension of the lam-th irreducible constituent for m = 1.

    Equals the jump of projective-space cardinalities at level lam.
    """
    if P.m != 1:
        raise InvalidOrbit("closed form requires m = 1")
    if lam < 0:
        raise InvalidOrbit(f"lam must be >= 0, got {lam}")
    if lam == 0:
        return Fraction(1)
    return proj_count(P.n, P.p, P.r, lam) - proj_count(P.n, P.p, P.r, lam - 1)
