from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from latticecft.exact import PhaseSum, cyclotomic_poly, det_int

from oracles import laplace_det


class TestDet:
    @given(st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-5, 5), min_size=n, max_size=n),
                           min_size=n, max_size=n)))
    @settings(max_examples=80, deadline=None)
    def test_matches_laplace(self, rows):
        assert det_int(rows) == laplace_det(rows)


class TestCyclotomic:
    def test_small_values(self):
        assert cyclotomic_poly(1) == (-1, 1)
        assert cyclotomic_poly(2) == (1, 1)
        assert cyclotomic_poly(3) == (1, 1, 1)
        assert cyclotomic_poly(4) == (1, 0, 1)
        assert cyclotomic_poly(6) == (1, -1, 1)
        assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)

    def test_degree_is_totient(self):
        from math import gcd
        for n in range(1, 30):
            phi = sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)
            assert len(cyclotomic_poly(n)) - 1 == phi


class TestPhaseSum:
    def test_full_cycle_is_zero(self):
        for n in (2, 3, 5, 6, 12):
            s = PhaseSum()
            for k in range(n):
                s.add(Fraction(k, n))
            assert s.is_zero()

    def test_partial_cycle_not_zero(self):
        s = PhaseSum()
        s.add(Fraction(0))
        s.add(Fraction(1, 3))
        assert not s.is_zero()

    def test_mixed_representations_equal(self):
        # 1 + w + w^2 = 0 for the cube root w, so 1 = -w - w^2
        lhs = PhaseSum()
        lhs.add(Fraction(0))
        rhs = PhaseSum()
        rhs.add(Fraction(1, 3), -1)
        rhs.add(Fraction(2, 3), -1)
        assert lhs == rhs

    def test_numeric_consistency(self):
        s = PhaseSum()
        s.add(Fraction(1, 8), 2)
        s.add(Fraction(3, 4), -1)
        val = s.to_complex()
        assert abs(val - (2 * complex(2 ** -0.5, 2 ** -0.5) - (-1j))) < 1e-12

    @given(st.lists(st.tuples(st.integers(0, 11), st.integers(-3, 3)),
                    max_size=8))
    @settings(max_examples=100, deadline=None)
    def test_zero_test_matches_numerics(self, pairs):
        s = PhaseSum()
        for num, mult in pairs:
            s.add(Fraction(num, 12), mult)
        assert s.is_zero() == (abs(s.to_complex()) < 1e-9)

    def test_scaled(self):
        s = PhaseSum()
        s.add(Fraction(1, 2), 3)
        assert s.scaled(2).terms[Fraction(1, 2)] == 6
