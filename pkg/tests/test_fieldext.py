import random
from fractions import Fraction

import pytest

from grouptower.fieldext import (
    BivariatePoly,
    ExtFieldSpec,
    SingularDenominator,
    SquareMatrix,
    companion,
    explicit_inverse,
    inverse_numerator,
    m_entry_formula,
    m_entry_numerator_symbolic,
    m_matrix,
    mul_matrix,
    q_values,
    random_instance,
    symbolic_denominator,
)

F = Fraction
QUAD = ExtFieldSpec((F(1), F(1)))  # f = X^2 - X - 1


def frac_matrix(rows):
    return SquareMatrix(tuple(tuple(F(x) for x in row) for row in rows))


# oracle: direct Gaussian elimination over Fraction
def gauss_inverse(mat: SquareMatrix) -> SquareMatrix:
    n = mat.n
    a = [list(row) for row in mat.rows]
    b = [[F(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[pivot] = a[pivot], a[col]
        b[col], b[pivot] = b[pivot], b[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        b[col] = [x * inv for x in b[col]]
        for r in range(n):
            if r != col and a[r][col]:
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
                b[r] = [x - factor * y for x, y in zip(b[r], b[col])]
    return SquareMatrix(tuple(tuple(row) for row in b))


class TestMulMatrix:
    def test_worked_quadratic(self):
        # cross-check by multiplying basis vectors with a^2 = a + 1
        assert mul_matrix(F(1), QUAD).rows == frac_matrix([[1, 1], [1, 2]]).rows

    def test_alpha_zero_is_identity(self):
        assert mul_matrix(F(0), QUAD).rows == SquareMatrix.identity(2).rows

    def test_last_column_pattern(self):
        spec = ExtFieldSpec((F(2), F(-3), F(5), F(7)))
        alpha = F(3, 2)
        mat = mul_matrix(alpha, spec)
        m = spec.m
        for i in range(m):
            assert mat.entry(i, m) == alpha * spec.coeffs[i]
        assert mat.entry(m, m) == 1 + alpha * spec.coeffs[m]


class TestQValues:
    def test_worked_quadratic(self):
        assert q_values(F(1), QUAD) == (F(1), F(0))

    def test_alpha_zero_gives_coefficients(self):
        spec = ExtFieldSpec((F(4), F(-1), F(2)))
        assert q_values(F(0), spec) == spec.coeffs

    def test_recurrence(self):
        rng = random.Random(5)
        for _ in range(50):
            spec, alpha, _ = random_instance(rng, rng.randint(2, 6))
            q = q_values(alpha, spec)
            # direct evaluation of the defining sum
            for j in range(spec.n):
                total = sum(((-alpha) ** (j - i)) * spec.coeffs[i] for i in range(j + 1))
                assert q[j] == total
            for j in range(1, spec.n):
                assert q[j] == (-alpha) * q[j - 1] + spec.coeffs[j]


class TestExplicitInverse:
    def test_worked_quadratic(self):
        # oracle: direct 2x2 inversion of [[1,1],[1,2]]
        assert gauss_inverse(mul_matrix(F(1), QUAD)).rows == frac_matrix([[2, -1], [-1, 1]]).rows
        assert explicit_inverse(F(1), QUAD).rows == frac_matrix([[2, -1], [-1, 1]]).rows

    def test_alpha_zero_is_identity(self):
        assert explicit_inverse(F(0), QUAD).rows == SquareMatrix.identity(2).rows

    def test_inverse_identity_random(self):
        rng = random.Random(11)
        for n in range(2, 7):
            for _ in range(25):
                spec, alpha, _ = random_instance(rng, n)
                prod = explicit_inverse(alpha, spec) @ mul_matrix(alpha, spec)
                assert prod.rows == SquareMatrix.identity(n).rows

    def test_matches_gaussian_elimination(self):
        rng = random.Random(13)
        for _ in range(20):
            spec, alpha, _ = random_instance(rng, rng.randint(2, 5))
            assert explicit_inverse(alpha, spec).rows == gauss_inverse(mul_matrix(alpha, spec)).rows

    def test_singular_denominator(self):
        # alpha = -1 makes 1 + alpha*q_m vanish for f = X^2 - X
        spec = ExtFieldSpec((F(0), F(1)))
        with pytest.raises(SingularDenominator):
            explicit_inverse(F(-1), spec)

    def test_symbolic_cleared_inverse_identity(self):
        rng = random.Random(17)
        for n in range(2, 6):
            spec, _, _ = random_instance(rng, n)
            numerator = inverse_numerator(spec)
            product = numerator @ mul_matrix(BivariatePoly.alpha(), spec)
            denom = symbolic_denominator(spec)
            for i in range(n):
                for j in range(n):
                    expected = denom if i == j else BivariatePoly.const(0)
                    assert (product.entry(i, j) - expected).is_zero


class TestMMatrix:
    def test_beta_equal_alpha_is_identity(self):
        assert m_matrix(F(2), F(2), QUAD).rows == SquareMatrix.identity(2).rows

    def test_worked_entry_nonzero(self):
        m = m_matrix(F(1), F(2), QUAD)
        assert m.entry(0, 1) == m_entry_formula(F(1), F(2), QUAD) != 0

    def test_entry_formula_matches_product(self):
        rng = random.Random(19)
        for n in range(2, 7):
            for _ in range(25):
                spec, alpha, beta = random_instance(rng, n)
                assert m_matrix(alpha, beta, spec).entry(n - 2, n - 1) == m_entry_formula(
                    alpha, beta, spec
                )

    def test_beta_zero_reduces_to_last_term(self):
        q = q_values(F(1), QUAD)
        h = 1 / (1 + F(1) * q[QUAD.m])
        assert m_entry_formula(F(1), F(0), QUAD) == -F(1) * q[QUAD.m - 1] * h

    def test_alpha_zero_reduces_to_coefficient(self):
        spec = ExtFieldSpec((F(3), F(2), F(5)))
        assert m_entry_formula(F(0), F(7), spec) == 7 * spec.coeffs[spec.m - 1]


class TestSymbolicMode:
    def test_polynomials_have_no_zero_terms(self):
        p = BivariatePoly.alpha() - BivariatePoly.alpha()
        assert p.is_zero and p.coeffs == ()

    def test_arithmetic(self):
        a, b = BivariatePoly.alpha(), BivariatePoly.beta()
        p = (a + b) * (a - b)
        assert p == a * a - b * b
        assert p.evaluate(3, 2) == 5

    def test_nonvanishing_for_small_degrees(self):
        rng = random.Random(23)
        for n in (2, 3, 4):
            spec, _, _ = random_instance(rng, n)
            numerator = m_entry_numerator_symbolic(spec)
            assert not numerator.is_zero
            assert not symbolic_denominator(spec).is_zero

    def test_numerator_matches_scalar_formula(self):
        rng = random.Random(29)
        for n in (2, 3, 4):
            spec, alpha, beta = random_instance(rng, n)
            numerator = m_entry_numerator_symbolic(spec)
            denom = 1 + alpha * q_values(alpha, spec)[spec.m]
            assert numerator.evaluate(alpha, beta) == m_entry_formula(alpha, beta, spec) * denom


class TestCompanion:
    def test_minimal_polynomial_annihilates(self):
        rng = random.Random(31)
        for _ in range(20):
            spec, _, _ = random_instance(rng, rng.randint(2, 6))
            a = companion(spec)
            power = SquareMatrix.identity(spec.n)
            for _ in range(spec.n):
                power = power @ a
            acc = [[F(0)] * spec.n for _ in range(spec.n)]
            basis = SquareMatrix.identity(spec.n)
            for k in range(spec.n):
                for i in range(spec.n):
                    for j in range(spec.n):
                        acc[i][j] += spec.coeffs[k] * basis.rows[i][j]
                basis = basis @ a
            assert power.rows == tuple(tuple(row) for row in acc)

    def test_degree_guard(self):
        with pytest.raises(ValueError):
            ExtFieldSpec((F(1),))
