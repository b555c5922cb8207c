"""Symmetric polynomials in m variables, stored in the monomial basis."""

from __future__ import annotations

from typing import Sequence

from .partitions import Partition, as_partition, distinct_permutations, weight


def monomial_value(nu: Partition, point: Sequence):
    """M_nu(point) = sum over distinct rearrangements eta of prod x_i^eta_i."""
    m = len(point)
    total = 0
    for eta in distinct_permutations(nu, m):
        term = 1
        for xi, e in zip(point, eta):
            if e:
                term = term * xi ** e
        total = total + term
    return total


class SymPolynomial:
    """A symmetric polynomial: map from partitions to monomial coefficients."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs: dict | None = None):
        self.m = m
        self.coeffs = {}
        for nu, c in (coeffs or {}).items():
            nu = as_partition(nu)
            if len(nu) > m:
                raise ValueError(f"{nu} has more than {m} parts")
            if c != 0:
                self.coeffs[nu] = c

    def constant(self):
        """Value at the zero vector."""
        return self.coeffs.get((), 0)

    def degree(self) -> int:
        return max((weight(nu) for nu in self.coeffs), default=0)

    def evaluate(self, point: Sequence):
        if len(point) != self.m:
            raise ValueError(f"expected {self.m} coordinates, got {len(point)}")
        total = 0
        for nu, c in self.coeffs.items():
            total = total + c * monomial_value(nu, point)
        return total

    def scaled(self, c) -> "SymPolynomial":
        return SymPolynomial(self.m, {nu: v * c for nu, v in self.coeffs.items()})

    def minus(self, other: "SymPolynomial") -> "SymPolynomial":
        keys = set(self.coeffs) | set(other.coeffs)
        return SymPolynomial(self.m, {k: self.coeffs.get(k, 0) - other.coeffs.get(k, 0)
                                      for k in keys})

    def coefficient(self, nu: Partition):
        return self.coeffs.get(as_partition(nu), 0)

    def __repr__(self):
        inner = ", ".join(f"{nu}: {c}" for nu, c in sorted(self.coeffs.items(),
                                                           key=lambda kv: (weight(kv[0]), kv[0])))
        return f"SymPolynomial(m={self.m}, {{{inner}}})"
