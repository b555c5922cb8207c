"""Scalar domains and shared special-function kernels.

Three scalar domains cover every computation in the package:

* exact rationals (``fractions.Fraction``) for fixed-parameter runs,
* :class:`RationalFunction` -- univariate rational functions in the
  indeterminate q over exact rationals, for exact q -> 0 limits,
* :class:`FloatScalar` -- arbitrary-precision binary floats (mpmath)
  carrying their working precision in bits.

On top of these live the q-Pochhammer symbols, bracket binomials and the
terminating hypergeometric sums used by every other module.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _int_gcd
from typing import Sequence

import mpmath

from .errors import (
    DivergentParameter,
    DivisionByZero,
    InvalidRange,
    PoleAtZero,
    PoleInDenominator,
)

DEFAULT_PRECISION = 128


# ---------------------------------------------------------------------------
# Integer polynomial core (dense, low-to-high coefficient lists).
# Used by RationalFunction reduction and by the interpolation solver.
# ---------------------------------------------------------------------------

def pnorm(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def padd(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    out = [0] * n
    for i, x in enumerate(a):
        out[i] = x
    for i, x in enumerate(b):
        out[i] += x
    return pnorm(out)


def psub(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    out = [0] * n
    for i, x in enumerate(a):
        out[i] = x
    for i, x in enumerate(b):
        out[i] -= x
    return pnorm(out)


def pmul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return pnorm(out)


def pscale(a: Sequence, s) -> list:
    if s == 0:
        return []
    return [s * x for x in a]


def pdiv_exact(a: Sequence, b: Sequence) -> list:
    """Exact polynomial division in Z[q] (or Q[q]); raises if not exact."""
    if not b:
        raise DivisionByZero("polynomial division by zero")
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    out = [0] * (max(len(a) - db, 1))
    for i in range(len(a) - 1, db - 1, -1):
        if a[i] == 0:
            continue
        q, r = divmod(a[i], lb) if isinstance(a[i], int) and isinstance(lb, int) else (a[i] / lb, 0)
        if r != 0:
            raise DivisionByZero("inexact polynomial division")
        out[i - db] = q
        for j in range(db + 1):
            a[i - db + j] -= q * b[j]
    if any(x != 0 for x in a):
        raise DivisionByZero("inexact polynomial division (nonzero remainder)")
    return pnorm(out)


def pcontent(a: Sequence) -> int:
    g = 0
    for x in a:
        g = _int_gcd(g, abs(x))
        if g == 1:
            return 1
    return g


def pprimitive(a: Sequence) -> list:
    g = pcontent(a)
    if g in (0, 1):
        return list(a)
    return [x // g for x in a]


def pgcd_int(a: Sequence, b: Sequence) -> list:
    """GCD of two integer polynomials via the primitive Euclidean scheme."""
    a, b = pprimitive(pnorm(list(a))), pprimitive(pnorm(list(b)))
    while b:
        # pseudo-remainder keeps everything integral
        da, db = len(a) - 1, len(b) - 1
        if da < db:
            a, b = b, a
            continue
        r = pscale(a, b[-1] ** (da - db + 1))
        _, r = _pdivmod_field([Fraction(x) for x in r], [Fraction(x) for x in b])
        r = pnorm([int(x) for x in r])
        a, b = b, pprimitive(r)
    if a and a[-1] < 0:
        a = [-x for x in a]
    return a


def _pdivmod_field(a: list, b: list):
    """Quotient/remainder over a field (Fraction coefficients)."""
    if not b:
        raise DivisionByZero("polynomial division by zero")
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    q = [Fraction(0)] * max(len(a) - db, 1)
    for i in range(len(a) - 1, db - 1, -1):
        if a[i] == 0:
            continue
        c = a[i] / lb
        q[i - db] = c
        for j in range(db + 1):
            a[i - db + j] -= c * b[j]
    return pnorm(q), pnorm(a)


def peval(a: Sequence, x):
    """Horner evaluation."""
    acc = 0
    for c in reversed(list(a)):
        acc = acc * x + c
    return acc


def strip_q_power(num: list, den: list):
    """Remove the common q^v factor of two coefficient lists."""
    if not num or not den:
        return num, den
    v = 0
    while v < len(num) and v < len(den) and num[v] == 0 and den[v] == 0:
        v += 1
    return num[v:], den[v:]


# ---------------------------------------------------------------------------
# Rational functions in q
# ---------------------------------------------------------------------------

class RationalFunction:
    """Reduced rational function of q with Fraction coefficients.

    Invariants: numerator and denominator share no nonconstant factor and
    the denominator's leading coefficient is 1.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=(Fraction(1),), *, _reduced=False):
        num = [Fraction(x) for x in num]
        den = [Fraction(x) for x in den]
        pnorm(num)
        pnorm(den)
        if not den:
            raise DivisionByZero("zero denominator")
        if not _reduced:
            num, den = self._reduce(num, den)
        lead = den[-1]
        if lead != 1:
            num = [x / lead for x in num]
            den = [x / lead for x in den]
        self.num = tuple(num)
        self.den = tuple(den)

    @staticmethod
    def _reduce(num: list, den: list):
        if not num:
            return [], [Fraction(1)]
        # scale to integer polynomials, cancel the integer-poly gcd
        from math import lcm
        dn = lcm(*[f.denominator for f in num]) if num else 1
        dd = lcm(*[f.denominator for f in den])
        inum = [int(f * dn) for f in num]
        iden = [int(f * dd) for f in den]
        g = pgcd_int(inum, iden)
        if len(g) > 1:
            inum = pdiv_exact(inum, g)
            iden = pdiv_exact(iden, g)
        return ([Fraction(x, dn) for x in inum], [Fraction(x, dd) for x in iden])

    @classmethod
    def const(cls, c) -> "RationalFunction":
        return cls([Fraction(c)], [Fraction(1)], _reduced=True)

    @classmethod
    def q(cls) -> "RationalFunction":
        return cls([Fraction(0), Fraction(1)], [Fraction(1)], _reduced=True)

    def is_zero(self) -> bool:
        return not self.num

    def degree(self):
        return (len(self.num) - 1 if self.num else -1, len(self.den) - 1)

    # -- arithmetic -----------------------------------------------------
    @staticmethod
    def _coerce(x):
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, (int, Fraction)):
            return RationalFunction.const(x)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        num = padd(pmul(self.num, other.den), pmul(other.num, self.den))
        return RationalFunction(num, pmul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction([-x for x in self.num], self.den, _reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(pmul(self.num, other.num), pmul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise DivisionByZero("division by zero rational function")
        return RationalFunction(pmul(self.num, other.den), pmul(self.den, other.num))

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if n < 0:
            return RationalFunction.const(1) / self ** (-n)
        out = RationalFunction.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __call__(self, x):
        return self.evaluate(x)

    def evaluate(self, x):
        """Value at a rational (or float) point of q."""
        d = peval(self.den, x)
        if d == 0:
            raise DivisionByZero(f"denominator vanishes at q={x}")
        return peval(self.num, x) / d

    def value_at_zero(self) -> Fraction:
        """Exact value at q = 0; raises PoleAtZero on a genuine pole."""
        if not self.num:
            return Fraction(0)
        if self.den[0] == 0:
            raise PoleAtZero(f"pole at q=0 (denominator {self.den})")
        return self.num[0] / self.den[0]

    def __repr__(self):
        def fmt(c):
            if not c:
                return "0"
            terms = []
            for i, x in enumerate(c):
                if x == 0:
                    continue
                if i == 0:
                    terms.append(str(x))
                elif i == 1:
                    terms.append(f"{x}*q" if x != 1 else "q")
                else:
                    terms.append(f"{x}*q^{i}" if x != 1 else f"q^{i}")
            return " + ".join(terms)

        if self.den == (Fraction(1),):
            return f"RF({fmt(self.num)})"
        return f"RF(({fmt(self.num)}) / ({fmt(self.den)}))"


# ---------------------------------------------------------------------------
# Precision-tagged floats
# ---------------------------------------------------------------------------

class FloatScalar:
    """An mpmath float together with its working precision in bits.

    Mixed-precision arithmetic runs at the minimum of the operand
    precisions; exact operands (ints, Fractions) adopt the float's.
    """

    __slots__ = ("value", "prec")

    def __init__(self, value, prec: int = DEFAULT_PRECISION):
        self.prec = int(prec)
        if isinstance(value, FloatScalar):
            value = value.value
        with mpmath.workprec(self.prec):
            if isinstance(value, Fraction):
                self.value = mpmath.mpf(value.numerator) / value.denominator
            else:
                self.value = mpmath.mpf(value)

    def _pair(self, other):
        if isinstance(other, FloatScalar):
            return other.value, min(self.prec, other.prec)
        if isinstance(other, (int, float, Fraction, mpmath.mpf)):
            if isinstance(other, Fraction):
                with mpmath.workprec(self.prec):
                    return mpmath.mpf(other.numerator) / other.denominator, self.prec
            return other, self.prec
        return None, None

    def _binop(self, other, op, swap=False):
        val, prec = self._pair(other)
        if val is None:
            return NotImplemented
        a, b = (val, self.value) if swap else (self.value, val)
        with mpmath.workprec(prec):
            return FloatScalar(op(a, b), prec)

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binop(other, lambda a, b: a - b, swap=True)

    def __mul__(self, other):
        return self._binop(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binop(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._binop(other, lambda a, b: a / b, swap=True)

    def __pow__(self, n):
        with mpmath.workprec(self.prec):
            return FloatScalar(self.value ** n, self.prec)

    def __neg__(self):
        return FloatScalar(-self.value, self.prec)

    def __abs__(self):
        return FloatScalar(abs(self.value), self.prec)

    def _cmp_value(self, other):
        if isinstance(other, FloatScalar):
            return other.value
        if isinstance(other, Fraction):
            return mpmath.mpf(other.numerator) / other.denominator
        return other

    def __eq__(self, other):
        return self.value == self._cmp_value(other)

    def __lt__(self, other):
        return self.value < self._cmp_value(other)

    def __le__(self, other):
        return self.value <= self._cmp_value(other)

    def __gt__(self, other):
        return self.value > self._cmp_value(other)

    def __ge__(self, other):
        return self.value >= self._cmp_value(other)

    def __float__(self):
        return float(self.value)

    def __repr__(self):
        return f"FloatScalar({mpmath.nstr(self.value, 12)}, prec={self.prec})"


def to_mpf(x, prec: int) -> mpmath.mpf:
    """Coerce any scalar to a raw mpf at the given precision."""
    with mpmath.workprec(prec):
        if isinstance(x, FloatScalar):
            return +x.value
        if isinstance(x, Fraction):
            return mpmath.mpf(x.numerator) / x.denominator
        return mpmath.mpf(x)


# ---------------------------------------------------------------------------
# q-Pochhammer symbols and bracket binomials
# ---------------------------------------------------------------------------

def qpoch_finite(x, q, n: int):
    """Finite q-shifted factorial (x; q)_n = prod_{i<n} (1 - q^i x).

    Exact in exact domains; works in any scalar domain.
    """
    if n < 0:
        raise InvalidRange(f"n must be >= 0, got {n}")
    out = 1
    qp = 1
    for _ in range(n):
        out = out * (1 - qp * x)
        qp = qp * q
    return out


def _qpoch_inf_raw(x, q, tol):
    """(x; q)_infty for raw mpf arguments under the caller's precision."""
    out = mpmath.mpf(1)
    qp = mpmath.mpf(1)
    one_minus_q = 1 - abs(q)
    while True:
        term = qp * x
        if abs(term) / one_minus_q < tol:
            break
        out *= 1 - term
        qp *= q
    return out


def qpoch_infinite(x, q, tol=None, prec: int = DEFAULT_PRECISION):
    """Infinite product (x; q)_infty, truncated under a geometric tail bound.

    Truncation stops once |q^i x| / (1 - |q|) < tol, which bounds the
    relative error of the dropped tail.  Requires |q| < 1.
    """
    if isinstance(x, FloatScalar) and isinstance(q, FloatScalar):
        prec = min(x.prec, q.prec)
    elif isinstance(x, FloatScalar):
        prec = x.prec
    elif isinstance(q, FloatScalar):
        prec = q.prec
    with mpmath.workprec(prec):
        xv, qv = to_mpf(x, prec), to_mpf(q, prec)
        if abs(qv) >= 1:
            raise DivergentParameter(f"|q| must be < 1, got q={qv}")
        if tol is None:
            tol = mpmath.mpf(2) ** (2 - prec)
        return FloatScalar(_qpoch_inf_raw(xv, qv, mpmath.mpf(tol)), prec)


def bracket(i: int, q):
    """[i]_q = 1 - q^i."""
    if i < 0:
        raise InvalidRange(f"bracket index must be >= 0, got {i}")
    return 1 - q ** i


def bracket_factorial(i: int, q):
    """[i]_q! = [i]_q [i-1]_q ... [1]_q."""
    if i < 0:
        raise InvalidRange(f"factorial index must be >= 0, got {i}")
    out = q ** 0  # exact 1 in the scalar's own domain
    for j in range(1, i + 1):
        out = out * (1 - q ** j)
    return out


def gauss_binomial(i: int, ip: int, q):
    """Bracket binomial [i over ip]_q = [i]! / ([ip]! [i-ip]!)."""
    if not 0 <= ip <= i:
        raise InvalidRange(f"need 0 <= {ip} <= {i}")
    if ip == 0:
        return q ** 0  # exact 1 in the scalar's own domain
    num = 1
    den = 1
    for j in range(ip):
        num = num * (1 - q ** (i - j))
        den = den * (1 - q ** (j + 1))
    if den == 0:
        raise DivisionByZero(f"denominator bracket vanished at q={q}")
    return num / den


def gauss_multinomial(i: int, parts: Sequence[int], q):
    """[i over parts]_q with sum(parts) = i."""
    if any(p < 0 for p in parts) or sum(parts) != i:
        raise InvalidRange(f"parts {parts} do not sum to {i}")
    out = bracket_factorial(i, q)
    for p in parts:
        d = bracket_factorial(p, q)
        if d == 0:
            raise DivisionByZero(f"denominator bracket vanished at q={q}")
        out = out / d
    return out


# ---------------------------------------------------------------------------
# Terminating hypergeometric sums
# ---------------------------------------------------------------------------

def _exactify(x):
    """Ints become Fractions so division stays exact; other scalars pass through."""
    return Fraction(x) if isinstance(x, int) else x


def hyper_2f1_terminating(lam: int, a2, a3, u):
    """2F1[-lam, a2; a3; u] summed exactly over its lam + 1 terms."""
    if lam < 0:
        raise InvalidRange(f"lam must be >= 0, got {lam}")
    a2, a3, u = _exactify(a2), _exactify(a3), _exactify(u)
    total = 1
    term = 1
    for j in range(lam):
        d = a3 + j
        if d == 0:
            raise PoleInDenominator(f"2F1 lower parameter pole at term {j + 1}")
        term = term * (-(lam - j)) * (a2 + j) / (d * (j + 1)) * u
        total = total + term
    return total


def hyper_2phi1_terminating(lam: int, a2, a3, q, u):
    """2phi1[q^-lam, a2; a3; q, u] summed over its lam + 1 terms.

    The leading numerator parameter is q^-lam, so (q^-lam; q)_j kills
    every term past j = lam.
    """
    if lam < 0:
        raise InvalidRange(f"lam must be >= 0, got {lam}")
    a2, a3, q, u = _exactify(a2), _exactify(a3), _exactify(q), _exactify(u)
    total = 1
    term = 1
    qj = 1  # q^j
    q_lam = q ** lam
    for j in range(lam):
        # (1 - q^{-lam} q^j) = (q^lam - q^j) / q^lam
        num1 = (q_lam - qj) / q_lam
        num2 = 1 - a2 * qj
        den1 = 1 - a3 * qj
        den2 = 1 - q * qj
        if den1 == 0:
            raise PoleInDenominator(f"2phi1 lower parameter pole at term {j + 1}")
        if den2 == 0:
            raise PoleInDenominator(f"2phi1 q-factorial pole at term {j + 1}")
        term = term * num1 * num2 / (den1 * den2) * u
        total = total + term
        qj = qj * q
    return total
