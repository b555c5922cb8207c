"""Brute-force ground truth over finite rings Z/p^k.

Everything here is exact enumeration: subgroup lattices of finite abelian
p-groups (types and co-types), Grassmannians of free submodules of
(Z/p^k)^n with canonical generator matrices, intersection-type orbit
statistics, and the convolution structure constants counted from triples.

Elements of a module prod Z/p^{lam_i} are packed into mixed-radix integers
so that subgroup closures run over plain int sets with precomputed
translation tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .errors import BudgetExceeded
from .partitions import Partition, as_partition, conjugate, leq_contain, weight

DEFAULT_BUDGET = 2 ** 16


def _check_budget(size: int, budget: int):
    if size > budget:
        raise BudgetExceeded(f"module of size {size} exceeds budget {budget}")


class FiniteModule:
    """A finite module prod_i Z/p^{lam_i} with packed-integer elements."""

    def __init__(self, p: int, lam: Partition, budget: int = DEFAULT_BUDGET):
        self.p = p
        self.lam = as_partition(lam)
        self.moduli = [p ** x for x in self.lam]
        self.size = 1
        for m in self.moduli:
            self.size *= m
        _check_budget(self.size, budget)
        # mixed-radix strides for packing
        self._strides = []
        s = 1
        for m in self.moduli:
            self._strides.append(s)
            s *= m

    def pack(self, vec) -> int:
        return sum((v % m) * s for v, m, s in zip(vec, self.moduli, self._strides))

    def unpack(self, idx: int):
        vec = []
        rem = idx
        for m in self.moduli:
            vec.append(rem % m)
            rem //= m
        return tuple(vec)

    def elements(self):
        return range(self.size)

    @lru_cache(maxsize=None)
    def _padd_table(self):
        """tables[g][x] = x + g, all packed."""
        size = self.size
        tables = []
        for g in range(size):
            gv = self.unpack(g)
            row = [0] * size
            for x in range(size):
                xv = self.unpack(x)
                row[x] = self.pack(tuple(a + b for a, b in zip(xv, gv)))
            tables.append(row)
        return tables

    # Building one full table per element is quadratic in the module size;
    # keep it lazy and only build rows on demand for the bigger modules.
    def add_row(self, g: int):
        if self.size <= 1024:
            return self._padd_table()[g]
        gv = self.unpack(g)
        return [self.pack(tuple(a + b for a, b in zip(self.unpack(x), gv)))
                for x in range(self.size)]

    @lru_cache(maxsize=None)
    def pmul_map(self):
        """Packed image of multiplication by p."""
        return [self.pack(tuple(v * self.p for v in self.unpack(x)))
                for x in range(self.size)]

    @lru_cache(maxsize=None)
    def element_heights(self):
        """heights[x] = smallest s with p^s x = 0."""
        pm = self.pmul_map()
        heights = [0] * self.size
        for x in range(self.size):
            y, s = x, 0
            while y != 0:
                y = pm[y]
                s += 1
            heights[x] = s
        return heights

    def cyclic(self, g: int) -> frozenset:
        out = {0}
        row = self.add_row(g)
        x = g
        while x != 0:
            out.add(x)
            x = row[x]
        return frozenset(out)

    def span(self, base: frozenset, g: int) -> frozenset:
        """Subgroup generated by base (a subgroup) and one extra element."""
        if g in base:
            return base
        out = set(base)
        shift = set(base)
        row = self.add_row(g)
        while True:
            shift = {row[x] for x in shift}
            if shift <= out:
                break
            out |= shift
        return frozenset(out)

    def subgroup_type(self, sub: frozenset) -> Partition:
        """Isomorphism type from element-height statistics.

        |{x in H : p^s x = 0}| = p^{sum_i min(s, nu_i)} determines the
        conjugate partition: nu'_s = log_p(c_s / c_{s-1}).
        """
        heights = self.element_heights()
        if len(sub) == 1:
            return ()
        hmax = max(heights[x] for x in sub)
        counts = [0] * (hmax + 1)
        for x in sub:
            counts[heights[x]] += 1
        conj = []
        below = 1
        for s in range(1, hmax + 1):
            below_next = below + counts[s]
            ratio = below_next // below
            conj.append(_int_log(ratio, self.p))
            below = below_next
        return conjugate(tuple(conj))

    def quotient_type(self, sub: frozenset) -> Partition:
        """Type of M / H, again via torsion counts: c_s = |{x : p^s x in H}|/|H|."""
        pm = self.pmul_map()
        hsize = len(sub)
        if hsize == self.size:
            return ()
        counts = []
        cur = list(range(self.size))
        while True:
            c = sum(1 for x in cur if x in sub) // hsize
            counts.append(c)
            if c * hsize == self.size:
                break
            cur = [pm[x] for x in cur]
        conj = [_int_log(counts[s] // counts[s - 1], self.p)
                for s in range(1, len(counts))]
        return conjugate(tuple(conj))


def _int_log(n: int, p: int) -> int:
    e = 0
    while n > 1:
        n, r = divmod(n, p)
        assert r == 0
        e += 1
    return e


@lru_cache(maxsize=None)
def _module(p: int, lam: Partition, budget: int) -> FiniteModule:
    return FiniteModule(p, lam, budget)


@lru_cache(maxsize=None)
def all_subgroups(p: int, mu: Partition, budget: int = DEFAULT_BUDGET):
    """Every subgroup of the type-mu module, as packed frozensets.

    Enumerates all cyclic subgroups, then closes under pairwise joins
    until a fixpoint, deduplicating by element-set hash.
    """
    mu = as_partition(mu)
    mod = _module(p, mu, budget)
    zero = frozenset({0})
    cyclics = {}
    for g in range(1, mod.size):
        c = mod.cyclic(g)
        cyclics.setdefault(c, g)
    found = {zero} | set(cyclics)
    frontier = list(found)
    gens = list(cyclics.values())
    while frontier:
        new = []
        for sub in frontier:
            for g in gens:
                if g in sub:
                    continue
                joined = mod.span(sub, g)
                if joined not in found:
                    found.add(joined)
                    new.append(joined)
        frontier = new
    return mod, sorted(found, key=lambda s: (len(s), sorted(s)))


@lru_cache(maxsize=None)
def _classified_subgroups(p: int, mu: Partition, budget: int = DEFAULT_BUDGET):
    """dict (type, cotype) -> count over all subgroups of the type-mu module."""
    mod, subs = all_subgroups(p, mu, budget)
    tally = {}
    for sub in subs:
        key = (mod.subgroup_type(sub), mod.quotient_type(sub))
        tally[key] = tally.get(key, 0) + 1
    return tally


def count_submodules(mu: Partition, lam: Partition, p: int, budget: int = DEFAULT_BUDGET) -> int:
    """Number of submodules of type lam inside a module of type mu."""
    mu, lam = as_partition(mu), as_partition(lam)
    if not leq_contain(lam, mu):
        return 0
    tally = _classified_subgroups(p, mu, budget)
    return sum(c for (t, _), c in tally.items() if t == lam)


def count_hall(mu: Partition, lam: Partition, nu: Partition, p: int,
               budget: int = DEFAULT_BUDGET) -> int:
    """Hall number: submodules of type lam with quotient of type nu in type mu."""
    mu, lam, nu = as_partition(mu), as_partition(lam), as_partition(nu)
    if not leq_contain(lam, mu):
        return 0
    tally = _classified_subgroups(p, mu, budget)
    return tally.get((lam, nu), 0)


def count_endomorphisms(lam: Partition, p: int, budget: int = DEFAULT_BUDGET) -> int:
    """|End| of the type-lam module, counted from torsion subgroup sizes.

    A homomorphism is fixed by the images of the cyclic generators, and the
    i-th generator can map to any element killed by p^{lam_i}.
    """
    lam = as_partition(lam)
    mod = _module(p, lam, budget)
    heights = mod.element_heights()
    out = 1
    for e in lam:
        out *= sum(1 for h in heights if h <= e)
    return out


# ---------------------------------------------------------------------------
# Grassmannians of free submodules of (Z/p^k)^n
# ---------------------------------------------------------------------------

@dataclass
class FreeSubmoduleSet:
    """All free rank-m submodules of (Z/p^k)^n with canonical generators."""

    n: int
    m: int
    p: int
    k: int
    matrices: list = field(default_factory=list)   # canonical generator matrices
    ambient: FiniteModule = None
    element_sets: list = field(default_factory=list)

    def __len__(self):
        return len(self.matrices)


def _row_reduce(rows, p: int, k: int):
    """Canonical echelon form over Z/p^k with unit pivots, or None.

    Returns None when the rows do not span a free module of full rank
    (no unit pivot available for some row).
    """
    q = p ** k
    rows = [list(r) for r in rows]
    m, n = len(rows), len(rows[0])
    pivots = []
    r = 0
    for col in range(n):
        piv = None
        for i in range(r, m):
            if rows[i][col] % p != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][col], -1, q)
        rows[r] = [(x * inv) % q for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][col] % q != 0:
                c = rows[i][col]
                rows[i] = [(x - c * y) % q for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    if r < m:
        return None
    return tuple(tuple(row) for row in rows)


def grassmannian(n: int, m: int, p: int, k: int,
                 budget: int = DEFAULT_BUDGET) -> FreeSubmoduleSet:
    """Enumerate Gr(m, n, Z/p^k) by canonicalizing all generator matrices."""
    total = p ** (k * m * n)
    _check_budget(total, budget)
    q = p ** k
    ambient = FiniteModule(p, (k,) * n, budget=max(budget, q ** n))
    seen = {}
    for flat in product(range(q), repeat=m * n):
        rows = [flat[i * n:(i + 1) * n] for i in range(m)]
        canon = _row_reduce(rows, p, k)
        if canon is not None and canon not in seen:
            seen[canon] = True
    out = FreeSubmoduleSet(n=n, m=m, p=p, k=k, ambient=ambient)
    for canon in sorted(seen):
        out.matrices.append(canon)
        elems = set()
        for coeffs in product(range(q), repeat=m):
            vec = tuple(sum(c * row[j] for c, row in zip(coeffs, canon)) % q
                        for j in range(n))
            elems.add(ambient.pack(vec))
        out.element_sets.append(frozenset(elems))
    return out


def intersection_type(gr: FreeSubmoduleSet, i: int, j: int) -> Partition:
    """Type of the intersection of two submodules, by membership filtering."""
    inter = gr.element_sets[i] & gr.element_sets[j]
    return gr.ambient.subgroup_type(inter)


def _fixed_base_index(gr: FreeSubmoduleSet) -> int:
    """Index of the coordinate submodule spanned by the first m basis vectors."""
    target = _row_reduce([[1 if j == i else 0 for j in range(gr.n)]
                          for i in range(gr.m)], gr.p, gr.k)
    return gr.matrices.index(target)


def orbit_measure(n: int, m: int, p: int, k: int,
                  budget: int = DEFAULT_BUDGET) -> dict:
    """Push-forward of Haar measure to intersection types.

    By transitivity of the group action this is the distribution of
    type(y cap z) over uniform z with y fixed.
    """
    gr = grassmannian(n, m, p, k, budget)
    y = _fixed_base_index(gr)
    tally = {}
    for z in range(len(gr)):
        t = intersection_type(gr, y, z)
        tally[t] = tally.get(t, 0) + 1
    total = len(gr)
    return {t: Fraction(c, total) for t, c in sorted(tally.items(), key=lambda kv: (weight(kv[0]), kv[0]))}


def structure_constants(n: int, m: int, p: int, k: int,
                        budget: int = DEFAULT_BUDGET) -> dict:
    """Counted structure constants of the level-k Hecke algebra.

    N[(lam, mu, nu)] = #{x : type(x cap y) = lam, type(x cap z) = mu} for a
    fixed pair (y, z) with type(y cap z) = nu.
    """
    gr = grassmannian(n, m, p, k, budget)
    y = _fixed_base_index(gr)
    reps = {}
    for z in range(len(gr)):
        t = intersection_type(gr, y, z)
        reps.setdefault(t, z)
    out = {}
    for nu, z in reps.items():
        for x in range(len(gr)):
            lam = intersection_type(gr, x, y)
            mu = intersection_type(gr, x, z)
            key = (lam, mu, nu)
            out[key] = out.get(key, 0) + 1
    return out
