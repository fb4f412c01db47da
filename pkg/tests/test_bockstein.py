import random

import pytest

from mwtate.bockstein import (
    PageTooSmall,
    WittProfile,
    block_pages,
    degeneracy_page,
    kunneth_e2,
    leibniz_check,
    pages,
    pages_from_witt,
    tower,
    truncated_check,
    v_group,
)
from mwtate.checks import _page_content, random_normal_form
from mwtate.cohomology import witt_cohomology
from mwtate.exactalg import FormalGroup, GradedGroup
from mwtate.motives import DyadicEta, Free, NormalForm, OddTorsion, tensor


class TestBlockPages:
    def test_early_page_of_dyadic(self):
        pg = block_pages(DyadicEta(2, 0), 2)
        assert sorted(pg.towers) == [tower(0, 0, None, "u"), tower(2, 1, None, "v")]
        assert not pg.arrows

    def test_late_page_truncates(self):
        pg = block_pages(DyadicEta(2, 0), 4)
        assert pg.towers == (tower(2, 1, 2, "v"),)

    def test_free_block_everywhere(self):
        assert block_pages(Free(3), 7).towers == (tower(6, 3),)

    def test_differential_only_at_jump(self):
        for i in (2, 4, 5):
            assert not block_pages(DyadicEta(2, 0), i).arrows
        jump = block_pages(DyadicEta(2, 0), 3)
        assert len(jump.arrows) == 1
        (src, dst, power), = jump.arrows
        assert (src.label, dst.label, power) == ("u", "v", 2)

    def test_plain_eta_cone_and_odd_empty(self):
        assert not block_pages(DyadicEta(0, 1), 2).towers
        assert not block_pages(OddTorsion(3, 1, 0), 2).towers

    def test_page_floor(self):
        with pytest.raises(PageTooSmall):
            block_pages(Free(0), 1)


class TestPagesFromWitt:
    def test_free_profile(self):
        h = GradedGroup({0: FormalGroup.free(1)})
        assert len(pages_from_witt(h, 5).towers) == 1

    def test_mixed_profile_matches_blocks(self):
        a = NormalForm([Free(0), DyadicEta(2, 1), Free(3)])
        h = witt_cohomology(a, 0)
        for i in range(2, 8):
            assert pages_from_witt(h, i) == pages(a, i)

    def test_odd_torsion_ignored(self):
        a = NormalForm([OddTorsion(3, 1, 0), Free(0)])
        h = witt_cohomology(a, 0)
        for i in range(2, 5):
            assert pages_from_witt(h, i) == pages(a, i)

    @pytest.mark.parametrize("seed", range(25))
    def test_random_profile_formula(self, seed):
        rng = random.Random(seed)
        a = random_normal_form(rng, 10)
        h = witt_cohomology(a, 0)
        for i in range(2, degeneracy_page(a) + 3):
            assert pages_from_witt(h, i) == pages(a, i)

    def test_profile_multiplicities(self):
        h = GradedGroup({2: FormalGroup.from_invariants([4, 4, 8, 0])})
        prof = dict(WittProfile.of(h).x)
        assert prof[(2, 2)] == 2 and prof[(2, 3)] == 1 and prof[(2, 0)] == 1


class TestDegeneracy:
    def test_examples(self):
        assert degeneracy_page(NormalForm([Free(0)])) == 2
        assert degeneracy_page(NormalForm([Free(0), DyadicEta(2, 1), Free(3)])) == 4
        assert degeneracy_page(NormalForm([OddTorsion(3, 1, 0), Free(0)])) == 2

    @pytest.mark.parametrize("seed", range(20))
    def test_exact_stabilization(self, seed):
        rng = random.Random(50 + seed)
        a = random_normal_form(rng, 8)
        d = degeneracy_page(a)
        stable = _page_content(pages(a, d))
        assert _page_content(pages(a, d + 1)) == stable
        assert _page_content(pages(a, d + 3)) == stable
        if d > 2:
            assert _page_content(pages(a, d - 1)) != stable


class TestKunneth:
    def test_unit_block(self):
        a = NormalForm([Free(0)])
        b = NormalForm([DyadicEta(3, 1), OddTorsion(3, 1, 0)])
        assert kunneth_e2(a, b).equal

    def test_equal_exponents(self):
        d1 = NormalForm([DyadicEta(1, 0)])
        assert kunneth_e2(d1, d1).equal

    def test_mixed_exponents(self):
        assert kunneth_e2(
            NormalForm([DyadicEta(1, 0)]), NormalForm([DyadicEta(2, 0)])
        ).equal

    def test_exhaustive_small_pairs(self):
        for t1 in range(0, 5):
            for t2 in range(0, 5):
                rep = kunneth_e2(
                    NormalForm([DyadicEta(t1, 0)]), NormalForm([DyadicEta(t2, 1)])
                )
                assert rep.equal, (t1, t2, rep.first_discrepancy)

    @pytest.mark.parametrize("seed", range(20))
    def test_random_pairs(self, seed):
        rng = random.Random(700 + seed)
        a = random_normal_form(rng, 6)
        b = random_normal_form(rng, 6)
        assert kunneth_e2(a, b).equal


class TestTruncated:
    def test_examples(self):
        assert truncated_check(NormalForm([Free(0)]), 2).holds
        assert truncated_check(NormalForm([DyadicEta(1, 1)]), 3).holds
        assert truncated_check(NormalForm([]), 2).holds

    @pytest.mark.parametrize("seed", range(10))
    def test_random(self, seed):
        rng = random.Random(800 + seed)
        a = random_normal_form(rng, 5)
        for j in (1, 2, 3):
            assert truncated_check(a, j).holds


class TestLeibniz:
    @pytest.mark.parametrize("jk", [(1, 1), (1, 2), (2, 1), (3, 3), (2, 4)])
    def test_pairs(self, jk):
        assert leibniz_check(*jk).holds

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            leibniz_check(0, 1)


class TestVGroup:
    def test_free_block(self):
        res = v_group(NormalForm([Free(0)]), 1, 0)
        assert res.dim_V == 1

    def test_empty(self):
        res = v_group(NormalForm([]), 1, 0)
        assert res.dim_V == 0 and res.fiber_product.is_zero()

    def test_linked_cone(self):
        res = v_group(NormalForm([DyadicEta(1, 0)]), 1, 0)
        assert res.dim_V == 1

    @pytest.mark.parametrize("seed", range(12))
    def test_monotone_in_j(self, seed):
        rng = random.Random(900 + seed)
        a = random_normal_form(rng, 4, allow_odd=False)
        n = rng.randrange(-1, 2)
        dims = [v_group(a, j, n).dim_V for j in range(1, 5)]
        assert all(dims[i] >= dims[i + 1] for i in range(len(dims) - 1))


class TestProp2Restated:
    @pytest.mark.parametrize("seed", range(15))
    def test_second_page_is_mod2_witt(self, seed):
        rng = random.Random(600 + seed)
        a = random_normal_form(rng, 6)
        pg = pages(a, 2)
        h2 = witt_cohomology(a, 2)
        for q in range(-6, 10):
            for p in range(q - 2, 2 * q + 3):
                dim = pg.dim(p, q)
                if p > 2 * q:
                    assert dim == 0
                else:
                    grp = h2[p - q]
                    assert dim == len(grp.torsion) + grp.free_rank
