"""Acceptance criteria, one test per criterion, each printing a
pass/fail line.  Run with `pytest tests/test_acceptance.py -s` to see
the lines, or via `mwtate check --suite all`.

Criterion 10's literal reading (all four matrix entries reduce to zero
under exactly the quoted identity set) is unattainable: the (2,2)
entry composes Sq3 Sq1 past tau, which no quoted identity touches; see
the strict xfail below and tests/test_steenrod.py for the Cartan-slide
closure of the full square.
"""

import pytest

from mwtate import checks
from mwtate.bockstein.steenrod import steenrod_dsquare_check


def record(result):
    status = "PASS" if result.passed else "FAIL"
    line = f"criterion[{result.name}] {status} ({result.cases} cases)"
    if result.detail:
        line += f" :: {result.detail}"
    print(line)
    assert result.passed, line


class TestAcceptance:
    def test_criterion_01_block_page_tables(self):
        record(checks.suite_block_pages(j_range=(1, 2, 3), q_lo=-2, q_hi=10))

    def test_criterion_02_torsion_profile_formula(self):
        record(checks.suite_torsion_profile(seed=7, samples=300, max_blocks=12))

    def test_criterion_03_degeneration(self):
        record(checks.suite_degeneracy(seed=7, samples=300, max_blocks=12))

    def test_criterion_04_decomposition_soundness(self):
        record(
            checks.suite_decompose(seed=11, samples=500, autos_per_complex=100)
        )

    def test_criterion_05_projective_bundle_reproduction(self):
        record(checks.suite_pbundle(n_range=(1, 2, 3, 4, 5, 6)))

    def test_criterion_06_kunneth_second_page(self):
        record(checks.suite_kunneth(seed=5, samples=100, max_blocks=8, t_max=4))

    def test_criterion_07_tensor_witt_consistency(self):
        record(checks.suite_tensor_witt(seed=3, samples=200, max_blocks=8))

    def test_criterion_08_second_page_is_mod2_witt(self):
        record(checks.suite_bounded(seed=9, samples=100, max_blocks=8, window=20))

    def test_criterion_09_exact_couple_engine(self):
        record(checks.suite_couple(seed=13, samples=100, max_cells=8, bound=9))

    def test_criterion_10_steenrod_check(self):
        # the attainable content: the three entries the proof reduces,
        # the mutation sanity, and the extended closure of the square
        record(checks.suite_steenrod())

    @pytest.mark.xfail(
        strict=True,
        reason="spec defect: the (2,2) entry of the squared differential "
        "composes Sq3 Sq1 past tau and is irreducible under exactly the "
        "quoted identity set (the source never expands that entry); the "
        "Cartan slides close it, see steenrod_dsquare_check(extended=True)",
    )
    def test_criterion_10_literal_all_four_entries(self):
        rep = steenrod_dsquare_check()  # exactly the quoted set
        line = f"criterion[steenrod-all-four-literal] {'PASS' if rep.all_zero else 'FAIL'}"
        print(line)
        assert rep.all_zero, line

    def test_criterion_11_truncated_sequences(self):
        record(checks.suite_truncated(seed=17, samples=50, max_blocks=6, j_max=3))

    def test_criterion_12_hom_cone_values(self):
        record(checks.suite_hom_cone(l_max=24, pq_max=6))

    def test_criterion_13_hp1_classification(self):
        record(checks.suite_hp1(grid=5))
