"""Exact matrix identities for multiplication by ``alpha*a + 1`` in a simple
field extension.

With ``f = X^n - b_{n-1} X^{n-1} - ... - b_0`` the minimal polynomial of a
generator ``a`` and basis ``(1, a, ..., a^{n-1})``, multiplication by
``alpha*a + 1`` is the identity plus ``alpha`` times the companion matrix of
``f``.  Its inverse has a closed form driven by the partial Horner sums

    q_j = sum_{i<=j} (-alpha)^(j-i) * b_i,      h = 1 / (1 + alpha*q_m),

and the (m-1, m) entry of ``(alpha*a+1)^-1 (beta*a+1)`` has a closed form of
its own.  Everything here is exact: scalars are rationals and the symbolic
mode works with bivariate polynomials over the rationals, with the single
division by ``1 + alpha*q_m`` handled by clearing denominators.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction


class SingularDenominator(ZeroDivisionError):
    """``1 + alpha*q_m`` vanished; the inverse formula needs another alpha."""


Scalar = Fraction  # base scalar type; polynomials below duck-type the same ops


@dataclass(frozen=True)
class BivariatePoly:
    """Polynomial in two indeterminates over the rationals; no zero terms."""

    coeffs: tuple[tuple[tuple[int, int], Fraction], ...] = ()

    @staticmethod
    def _normalize(items) -> "BivariatePoly":
        acc: dict[tuple[int, int], Fraction] = {}
        for key, val in items:
            acc[key] = acc.get(key, Fraction(0)) + val
        return BivariatePoly(tuple(sorted((k, v) for k, v in acc.items() if v)))

    @classmethod
    def const(cls, value) -> "BivariatePoly":
        value = Fraction(value)
        return cls(((( 0, 0), value),) if value else ())

    @classmethod
    def alpha(cls) -> "BivariatePoly":
        return cls((((1, 0), Fraction(1)),))

    @classmethod
    def beta(cls) -> "BivariatePoly":
        return cls((((0, 1), Fraction(1)),))

    def _coerce(self, other) -> "BivariatePoly | None":
        if isinstance(other, BivariatePoly):
            return other
        if isinstance(other, (int, Fraction)):
            return BivariatePoly.const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._normalize(list(self.coeffs) + list(other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return BivariatePoly(tuple((k, -v) for k, v in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        items = []
        for (i, j), u in self.coeffs:
            for (k, l), v in other.coeffs:
                items.append(((i + k, j + l), u * v))
        return self._normalize(items)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BivariatePoly":
        out = BivariatePoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def evaluate(self, alpha, beta) -> Fraction:
        alpha, beta = Fraction(alpha), Fraction(beta)
        return sum((v * alpha**i * beta**j for (i, j), v in self.coeffs), Fraction(0))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for (i, j), v in self.coeffs:
            part = [] if v == 1 and (i or j) else [str(v)]
            if i:
                part.append("a" if i == 1 else f"a^{i}")
            if j:
                part.append("b" if j == 1 else f"b^{j}")
            terms.append("*".join(part))
        return " + ".join(terms)


@dataclass(frozen=True)
class ExtFieldSpec:
    """Degree-n extension data: ``f = X^n - b_{n-1} X^{n-1} - ... - b_0``."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) < 2:
            raise ValueError("extension degree must be at least 2")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @property
    def n(self) -> int:
        return len(self.coeffs)

    @property
    def m(self) -> int:
        return self.n - 1


@dataclass(frozen=True)
class SquareMatrix:
    rows: tuple[tuple, ...]

    def __post_init__(self) -> None:
        n = len(self.rows)
        if any(len(r) != n for r in self.rows):
            raise ValueError("matrix must be square")

    @property
    def n(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int):
        return self.rows[i][j]

    def __matmul__(self, other: "SquareMatrix") -> "SquareMatrix":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        rng = range(self.n)
        rows = []
        for i in rng:
            row = []
            for j in rng:
                acc = self.rows[i][0] * other.rows[0][j]
                for k in rng:
                    if k:
                        acc = acc + self.rows[i][k] * other.rows[k][j]
                row.append(acc)
            rows.append(tuple(row))
        return SquareMatrix(tuple(rows))

    @classmethod
    def identity(cls, n: int, one=Fraction(1), zero=Fraction(0)) -> "SquareMatrix":
        return cls(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))

    def format_rows(self) -> str:
        return "\n".join(" ".join(str(e) for e in row) for row in self.rows)


def companion(spec: ExtFieldSpec) -> SquareMatrix:
    """Multiplication-by-a matrix: subdiagonal ones, last column the b's."""
    n = spec.n
    rows = []
    for i in range(n):
        row = [Fraction(0)] * n
        if i:
            row[i - 1] = Fraction(1)
        row[n - 1] = spec.coeffs[i]
        rows.append(tuple(row))
    return SquareMatrix(tuple(rows))


def mul_matrix(alpha, spec: ExtFieldSpec) -> SquareMatrix:
    """Matrix of ``x -> (alpha*a + 1) * x`` in the power basis."""
    comp = companion(spec)
    n = spec.n
    one = alpha * Fraction(0) + 1  # stays in alpha's ring
    rows = []
    for i in range(n):
        rows.append(tuple((one if i == j else 0 * one) + alpha * comp.rows[i][j] for j in range(n)))
    return SquareMatrix(tuple(rows))


def q_values(alpha, spec: ExtFieldSpec):
    """The sums ``q_j = sum_{i<=j} (-alpha)^(j-i) b_i``, via the recurrence
    ``q_j = (-alpha) q_{j-1} + b_j``."""
    out = [alpha * 0 + spec.coeffs[0]]
    for j in range(1, spec.n):
        out.append((-alpha) * out[-1] + spec.coeffs[j])
    return tuple(out)


def explicit_inverse(alpha: Fraction, spec: ExtFieldSpec) -> SquareMatrix:
    """Closed-form ``(alpha*a + 1)^-1``.

    Entry (i, j) is ``(-alpha)^(i-j)`` on and below the diagonal plus
    ``(-alpha)^(m+1-j) q_i h`` everywhere.
    """
    alpha = Fraction(alpha)
    q = q_values(alpha, spec)
    m = spec.m
    denom = 1 + alpha * q[m]
    if denom == 0:
        raise SingularDenominator(f"1 + alpha*q_m vanishes at alpha={alpha}")
    h = 1 / denom
    rows = []
    for i in range(spec.n):
        row = []
        for j in range(spec.n):
            val = (-alpha) ** (m + 1 - j) * q[i] * h
            if i >= j:
                val += (-alpha) ** (i - j)
            row.append(val)
        rows.append(tuple(row))
    return SquareMatrix(tuple(rows))


def inverse_numerator(spec: ExtFieldSpec) -> SquareMatrix:
    """``(1 + alpha*q_m) * (alpha*a+1)^-1`` with alpha symbolic: polynomial
    entries, so the inverse identity can be checked without division."""
    alpha = BivariatePoly.alpha()
    q = q_values(alpha, spec)
    m = spec.m
    denom = BivariatePoly.const(1) + alpha * q[m]
    rows = []
    for i in range(spec.n):
        row = []
        for j in range(spec.n):
            val = (-alpha) ** (m + 1 - j) * q[i]
            if i >= j:
                val = val + (-alpha) ** (i - j) * denom
            row.append(val)
        rows.append(tuple(row))
    return SquareMatrix(tuple(rows))


def m_matrix(alpha: Fraction, beta: Fraction, spec: ExtFieldSpec) -> SquareMatrix:
    """``(alpha*a + 1)^-1 (beta*a + 1)``, exactly."""
    return explicit_inverse(alpha, spec) @ mul_matrix(Fraction(beta), spec)


def m_entry_formula(alpha, beta, spec: ExtFieldSpec):
    """Closed form of the (m-1, m) entry of :func:`m_matrix`."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    q = q_values(alpha, spec)
    m = spec.m
    denom = 1 + alpha * q[m]
    if denom == 0:
        raise SingularDenominator(f"1 + alpha*q_m vanishes at alpha={alpha}")
    h = 1 / denom
    b = spec.coeffs
    total = Fraction(0)
    for i in range(m):
        total += beta * b[i] * ((-alpha) ** (m - 1 - i) + (-alpha) ** (m + 1 - i) * q[m - 1] * h)
    total -= (1 + beta * b[m]) * (alpha * q[m - 1] * h)
    return total


def m_entry_numerator_symbolic(spec: ExtFieldSpec) -> BivariatePoly:
    """``(1 + alpha*q_m) * M_{m-1,m}`` with alpha, beta symbolic.

    The entry itself is this polynomial over ``1 + alpha*q_m``; since the
    denominator is a nonzero polynomial, the entry vanishes identically only
    if this numerator is the zero polynomial.
    """
    alpha, beta = BivariatePoly.alpha(), BivariatePoly.beta()
    q = q_values(alpha, spec)
    m = spec.m
    denom = BivariatePoly.const(1) + alpha * q[m]
    b = spec.coeffs
    total = BivariatePoly.const(0)
    for i in range(m):
        total = total + beta * b[i] * ((-alpha) ** (m - 1 - i) * denom + (-alpha) ** (m + 1 - i) * q[m - 1])
    total = total - (BivariatePoly.const(1) + beta * b[m]) * (alpha * q[m - 1])
    return total


def symbolic_denominator(spec: ExtFieldSpec) -> BivariatePoly:
    alpha = BivariatePoly.alpha()
    return BivariatePoly.const(1) + alpha * q_values(alpha, spec)[spec.m]


def random_instance(rng: random.Random, n: int) -> tuple[ExtFieldSpec, Fraction, Fraction]:
    """Small exact instance; retries until the inverse denominator is regular."""
    while True:
        coeffs = [Fraction(rng.choice([c for c in range(-5, 6) if c != 0]))]
        coeffs += [Fraction(rng.randint(-5, 5)) for _ in range(n - 1)]
        spec = ExtFieldSpec(tuple(coeffs))
        alpha = Fraction(rng.choice([c for c in range(-9, 10) if c != 0]))
        beta = Fraction(rng.choice([c for c in range(-9, 10) if c != 0]))
        q = q_values(alpha, spec)
        if 1 + alpha * q[spec.m] != 0:
            return spec, alpha, beta
