import math
from fractions import Fraction

import numpy as np
import pytest

from latticecft.errors import NotContractive
from latticecft.fock import (
    FockState,
    ModeTruncation,
    SectorCharacter,
    TrigLoop,
    annulus_sewing_check,
    bogoliubov_overlap,
    enumerate_sector_states,
    gaussian_overlap_quadrature,
    loop_cocycle,
    minimal_norm_lift,
    mode_operators,
    occupation_energy,
    oscillator_basis,
    partition_counts,
    positive_energy_check,
    sector_character,
)
from latticecft.lattices import discriminant_group, validate_even_lattice

from oracles import brute_force_sector_counts, quadrature_loop_pairing


def lattice_pair(gram):
    lat = validate_even_lattice(gram)
    return lat, discriminant_group(lat)


class TestLoopCocycle:
    def test_self_pairing_vanishes(self):
        xi = TrigLoop.from_cos_sin(cos={1: [1.0], 3: [0.5]}, sin={2: [2.0]})
        assert abs(loop_cocycle(xi, xi)) < 1e-12

    def test_constant_loop(self):
        const = TrigLoop.from_cos_sin(const=[3.0])
        eta = TrigLoop.from_cos_sin(cos={1: [1.0]}, sin={2: [0.3]})
        assert abs(loop_cocycle(const, eta)) < 1e-12

    def test_cos_sin_gives_pi(self):
        xi = TrigLoop.from_cos_sin(cos={1: [1.0]})
        eta = TrigLoop.from_cos_sin(sin={1: [1.0]})
        assert abs(loop_cocycle(xi, eta) - math.pi) < 1e-12

    def test_against_quadrature(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            xi = TrigLoop.from_cos_sin(
                const=rng.standard_normal(2),
                cos={k: rng.standard_normal(2) for k in (1, 2)},
                sin={k: rng.standard_normal(2) for k in (1, 3)})
            eta = TrigLoop.from_cos_sin(
                const=rng.standard_normal(2),
                cos={k: rng.standard_normal(2) for k in (1, 3)},
                sin={k: rng.standard_normal(2) for k in (2,)})
            deta = eta.derivative()
            want = quadrature_loop_pairing(lambda t: xi(t).real,
                                           lambda t: deta(t).real)
            assert abs(loop_cocycle(xi, eta) - want) < 1e-9

    def test_antisymmetry(self):
        rng = np.random.default_rng(4)
        xi = TrigLoop.from_cos_sin(cos={1: rng.standard_normal(1)},
                                   sin={2: rng.standard_normal(1)})
        eta = TrigLoop.from_cos_sin(cos={2: rng.standard_normal(1)},
                                    sin={1: rng.standard_normal(1)})
        assert abs(loop_cocycle(xi, eta) + loop_cocycle(eta, xi)) < 1e-12


class TestModeOperators:
    def test_annihilate_vacuum(self):
        tr = ModeTruncation(rank=1, max_mode=4, max_energy=4)
        ops = mode_operators(tr)
        basis = oscillator_basis(tr)
        vac = basis.index(())
        for (n, c), (a, _) in ops.items():
            assert np.all(a[:, vac] == 0)

    def test_commutators_on_interior(self):
        tr = ModeTruncation(rank=2, max_mode=5, max_energy=5)
        ops = mode_operators(tr)
        basis = oscillator_basis(tr)
        for (n, c), (a, adag) in ops.items():
            comm = a @ adag - adag @ a
            for i, occ in enumerate(basis):
                if occupation_energy(occ) + n <= tr.max_energy:
                    col = comm[:, i]
                    want = np.zeros_like(col)
                    want[i] = n
                    assert np.allclose(col, want), (n, c, occ)

    def test_double_raise_energy(self):
        tr = ModeTruncation(rank=1, max_mode=3, max_energy=4)
        ops = mode_operators(tr)
        basis = oscillator_basis(tr)
        vac = basis.index(())
        _, adag = ops[(1, 0)]
        state = adag @ adag @ np.eye(len(basis))[:, vac]
        (idx,) = np.nonzero(state)
        assert occupation_energy(basis[idx[0]]) == 2

    def test_cross_color_commute(self):
        tr = ModeTruncation(rank=2, max_mode=3, max_energy=3)
        ops = mode_operators(tr)
        a1, _ = ops[(1, 0)]
        _, adag2 = ops[(1, 1)]
        comm = a1 @ adag2 - adag2 @ a1
        basis = oscillator_basis(tr)
        for i, occ in enumerate(basis):
            if occupation_energy(occ) + 1 <= tr.max_energy:
                assert np.allclose(comm[:, i], 0)

    def test_interior_coverage_grows_with_truncation(self):
        # the share of states excluded from the commutator check shrinks as
        # the energy cutoff grows, for each fixed mode
        for n in (1, 2):
            fractions = []
            for e_max in (4, 6, 8, 10):
                tr = ModeTruncation(rank=1, max_mode=3, max_energy=e_max)
                basis = oscillator_basis(tr)
                interior = sum(1 for occ in basis
                               if occupation_energy(occ) + n <= e_max)
                fractions.append(interior / len(basis))
            assert all(a <= b for a, b in zip(fractions, fractions[1:])), n
            assert fractions[-1] > fractions[0]


class TestSectorCharacter:
    def test_a1_vacuum_first_coefficients(self):
        lat, disc = lattice_pair([[2]])
        ch = sector_character(lat, disc, disc.zero, 3)
        assert ch.ground_energy == 0
        assert ch.coefficients == (1, 3, 4, 7)

    def test_vacuum_unique_at_zero(self):
        for gram in ([[2]], [[2, 1], [1, 2]], [[4]]):
            lat, disc = lattice_pair(gram)
            ch = sector_character(lat, disc, disc.zero, 0)
            assert ch.coefficients == (1,)

    def test_a1_twisted_sector(self):
        lat, disc = lattice_pair([[2]])
        phi = disc.element((1,))
        ch = sector_character(lat, disc, phi, 2)
        assert ch.ground_energy == Fraction(1, 4)
        oracle = brute_force_sector_counts(lat.gram, ch.lift, 2, lat.rank)
        assert list(ch.coefficients) == oracle == [2, 2, 6]

    @pytest.mark.parametrize("gram", [[[2]], [[4]], [[6]], [[2, 1], [1, 2]],
                                      [[2, 0], [0, 2]], [[2, 0], [0, 4]],
                                      [[8]]])
    def test_generating_function_equals_enumeration(self, gram):
        lat, disc = lattice_pair(gram)
        for phi in disc.elements():
            ch = sector_character(lat, disc, phi, 10)
            oracle = brute_force_sector_counts(lat.gram, ch.lift, 10, lat.rank)
            assert list(ch.coefficients) == oracle, (gram, phi)

    def test_minimal_norm_lift_deterministic(self):
        lat, disc = lattice_pair([[2]])
        lift = minimal_norm_lift(lat, disc, disc.element((1,)))
        # the two minimal vectors are +-1/2; the tie breaks lexicographically
        assert lift == (Fraction(-1, 2),)

    def test_state_enumeration_counts(self):
        lat, disc = lattice_pair([[2]])
        states = enumerate_sector_states(lat, disc, disc.zero, 3)
        by_offset = [0, 0, 0, 0]
        for st in states:
            by_offset[int(st.energy(lat))] += 1
        assert by_offset == [1, 3, 4, 7]


class TestAnnulusSewing:
    def test_order_zero(self):
        lat, disc = lattice_pair([[2]])
        rep = annulus_sewing_check(lat, disc, 0)
        assert rep.equal
        assert rep.lhs_table == ((("0", "0"), 1),)

    def test_a1_depth_four(self):
        lat, disc = lattice_pair([[2]])
        rep = annulus_sewing_check(lat, disc, 4)
        assert rep.equal

    def test_rank_two_depth_three(self):
        lat, disc = lattice_pair([[2, 0], [0, 2]])
        rep = annulus_sewing_check(lat, disc, 3)
        assert rep.equal

    def test_a2_depth_three(self):
        lat, disc = lattice_pair([[2, 1], [1, 2]])
        rep = annulus_sewing_check(lat, disc, 3)
        assert rep.equal


class TestBogoliubov:
    def test_zero_gives_one(self):
        assert bogoliubov_overlap([[0.0]]) == 1.0

    def test_half(self):
        got = bogoliubov_overlap([[0.5]])
        assert abs(got - 0.75 ** 0.25) < 1e-12

    def test_not_contractive(self):
        with pytest.raises(NotContractive):
            bogoliubov_overlap([[1.0]])

    def test_monotone_to_zero(self):
        vals = [bogoliubov_overlap([[t]]) for t in (0.0, 0.3, 0.6, 0.9, 0.99)]
        assert all(a > b for a, b in zip(vals, vals[1:]))
        assert vals[-1] < 0.4

    def test_quadrature_dim1(self):
        for t in (0.0, 0.25, 0.5 + 0.3j, -0.7, 0.2 - 0.6j):
            got = gaussian_overlap_quadrature([[t]])
            want = bogoliubov_overlap([[t]])
            assert abs(got - want) < 1e-8, t

    def test_quadrature_dim2(self):
        mats = [
            [[0.3, 0.1], [0.1, -0.2]],
            [[0.2 + 0.1j, 0.05j], [0.05j, 0.4 - 0.2j]],
            [[0.0, 0.45], [0.45, 0.0]],
        ]
        for t in mats:
            got = gaussian_overlap_quadrature(t, points_per_dim=801)
            want = bogoliubov_overlap(t)
            assert abs(got - want) < 1e-8, t

    def test_conjugate_symmetry(self):
        rng = np.random.default_rng(8)
        for _ in range(10):
            raw = 0.3 * (rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
            t = (raw + raw.T) / 2
            if np.linalg.norm(t, 2) >= 1:
                continue
            assert abs(bogoliubov_overlap(t) - bogoliubov_overlap(t.conj())) < 1e-12


class TestPositiveEnergy:
    def test_vacuum_sector(self):
        lat, disc = lattice_pair([[2]])
        states = enumerate_sector_states(lat, disc, disc.zero, 4)
        rep = positive_energy_check(st.energy(lat) for st in states)
        assert rep.ok and rep.ground_energy == 0

    def test_twisted_sector_ground(self):
        lat, disc = lattice_pair([[2]])
        states = enumerate_sector_states(lat, disc, disc.element((1,)), 4)
        rep = positive_energy_check(st.energy(lat) for st in states)
        assert rep.ok and rep.ground_energy == Fraction(1, 4)

    def test_negated_grading_fails(self):
        rep = positive_energy_check([Fraction(0), Fraction(-1), Fraction(-2)])
        assert not rep.ok
