"""One test per acceptance criterion, each printing its pass/fail line.

Run with `pytest -s tests/test_acceptance.py` to see the lines; the CLI
equivalent is `latticecft accept`.
"""

import pytest

from latticecft.acceptance import (
    ALL_CRITERIA,
    DEFAULT_SEED,
    Tolerances,
    criterion_01_normalization,
    criterion_02_factorization,
    criterion_03_stone_von_neumann,
    criterion_04_induced_decomposition,
    criterion_05_modular,
    criterion_06_verlinde,
    criterion_07_theta,
    criterion_08_characters,
    criterion_09_bogoliubov,
    criterion_10_determinism,
    run_all,
)

TOL = Tolerances()


def _report(result):
    status = "PASS" if result.passed else "FAIL"
    print(f"criterion {result.cid:02d} [{status}] {result.name}")
    assert result.passed, result.details


def test_criterion_01_normalization():
    _report(criterion_01_normalization(TOL, DEFAULT_SEED))


def test_criterion_02_factorization():
    _report(criterion_02_factorization(TOL, DEFAULT_SEED))


def test_criterion_03_stone_von_neumann():
    _report(criterion_03_stone_von_neumann(TOL, DEFAULT_SEED))


def test_criterion_04_induced_decomposition():
    _report(criterion_04_induced_decomposition(TOL, DEFAULT_SEED))


def test_criterion_05_modular():
    _report(criterion_05_modular(TOL, DEFAULT_SEED))


def test_criterion_06_verlinde():
    _report(criterion_06_verlinde(TOL, DEFAULT_SEED))


def test_criterion_07_theta():
    _report(criterion_07_theta(TOL, DEFAULT_SEED))


def test_criterion_08_characters():
    _report(criterion_08_characters(TOL, DEFAULT_SEED))


def test_criterion_09_bogoliubov():
    _report(criterion_09_bogoliubov(TOL, DEFAULT_SEED))


def test_criterion_10_determinism():
    _report(criterion_10_determinism(TOL, DEFAULT_SEED))


class TestSuiteSemantics:
    def test_injected_defect_fails_modular_criterion(self):
        result = criterion_05_modular(TOL, DEFAULT_SEED,
                                      defects=frozenset({"s_sign_flip"}))
        assert not result.passed

    def test_zero_tolerance_fails_numerical_passes_exact(self):
        results = run_all(seed=DEFAULT_SEED, tolerance=0.0)
        by_id = {r.cid: r.passed for r in results}
        # exact integer identities are tolerance-free
        for cid in (1, 2, 4, 8, 10):
            assert by_id[cid], cid
        # every numerical criterion compares against the zero tolerance
        for cid in (3, 5, 6, 7, 9):
            assert not by_id[cid], cid

    def test_criteria_cover_ten_ids(self):
        assert len(ALL_CRITERIA) == 10
