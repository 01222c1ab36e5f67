"""Explicit family generators against enumeration oracles and bounds."""

import random

import pytest

from freegrowth import (
    SL2ZGroup,
    WordSet,
    ball_words,
    bs_family,
    bs_window_collapse,
    f2xz_family,
    make_bs_group,
    make_f2xz_group,
    make_psl2_group,
    power_set,
    prop41_family,
    psl2_word_matrix,
    quotient_check,
    sl2_to_psl2_word,
)
from freegrowth.groups import sl2_mul

S = ((0, -1), (1, 0))
T = ((1, 1), (0, 1))
NEG_ID = ((-1, 0), (0, -1))


class TestProp41:
    def test_size_and_bounds_spread_x(self, zz):
        gens = [zz.parse("a"), zz.parse("b")]
        family, report = prop41_family(zz, gens, zz.parse("a b"), 3)
        assert report.size == 5
        # exact counts, frozen from the enumeration oracle
        assert report.sq == 21 and report.cube == 84
        assert report.cube <= 2 * 3 * 3 * 5 + 4 * 5
        # the quick pair bound 2(l+1)N-2+l^2 = 20 undercounts by one
        assert report.ok and "quick-count" in report.notes

    def test_closed_forms_match_enumeration(self, zz):
        gens = [zz.parse("a"), zz.parse("b")]
        for n in range(1, 9):
            _, spread = prop41_family(zz, gens, zz.parse("a b"), n)
            assert (spread.sq, spread.cube) == (6 * n + 3, 2 * n * n + 21 * n + 3)
            _, inner = prop41_family(zz, gens, zz.parse("a"), n)
            assert (inner.sq, inner.cube) == (4 * n, n * n + 10 * n - 3)
            assert inner.notes == "" and inner.ok

    def test_n_equals_one(self, zz):
        gens = [zz.parse("a"), zz.parse("b")]
        _, report = prop41_family(zz, gens, zz.parse("a b"), 1)
        assert report.size == 3 and report.cube <= report.bound

    def test_overlap_component_count(self, zz):
        # the x^i g x^j block alone has size N^2 for g = b, x = a
        n = 6
        words = {zz.parse(f"a^{i} b a^{j}") for i in range(1, n + 1) for j in range(1, n + 1)}
        assert len(words) == n * n

    def test_finite_order_x_rejected(self, c2c3):
        with pytest.raises(ValueError, match="infinite order"):
            prop41_family(c2c3, [c2c3.parse("s")], c2c3.parse("t"), 3)


class TestF2xZ:
    def test_small_counts(self):
        _, report = f2xz_family(2)
        assert (report.size, report.sq, report.cube) == (4, 12, 32)
        assert report.ok
        _, report = f2xz_family(1)
        assert (report.size, report.cube) == (2, 8)
        assert report.notes == ""

    def test_pair_bound_and_cube_count(self):
        for n in (1, 2, 3, 5, 9, 16):
            _, report = f2xz_family(n)
            assert report.sq < 4 * report.size
            assert report.cube == 8 * (3 * n - 2)
            assert (report.notes != "") == (n >= 2)

    def test_central_coordinate(self):
        group = make_f2xz_group()
        a = group.parse("x z^3")
        b = group.parse("y z^-1")
        assert group.mul(a, b) == group.parse("x y z^2")
        # the central letter commutes with everything
        z = group.parse("z")
        assert group.mul(z, a) == group.mul(a, z)


class TestBSFamily:
    def test_matches_naive_enumeration(self):
        for m, n in ((1, 2), (1, 4), (2, 3), (2, -3)):
            group = make_bs_group(m, n)
            for d in range(1, 6):
                family, report = bs_family(m, n, d, group)
                assert report.cube == len(power_set(family, 3)), (m, n, d)
                assert report.sq == len(power_set(family, 2)), (m, n, d)

    def test_small_example(self):
        _, report = bs_family(1, 2, 1)
        assert report.size == 2 and report.cube == 8
        assert report.cube < 13 * 2

    def test_bound_sweep(self):
        for m, n in ((1, 2), (1, 4), (2, 3)):
            for d in (1, 5, 12, 30):
                _, report = bs_family(m, n, d)
                assert report.ok, (m, n, d)
                assert report.cube < (10 + abs(m) + abs(n)) * (d + 1)

    def test_pair_linear_growth(self):
        for d in (4, 8, 16, 32):
            _, report = bs_family(1, 2, d)
            assert report.sq <= 4 * (d + 1)

    def test_window_collapse(self):
        # {x^i y x^j} collapses below (m + |n|) |A_d|
        for m, n in ((1, 2), (2, 3), (1, 4)):
            for d in (6, 20):
                assert bs_window_collapse(m, n, d) < (m + abs(n)) * (d + 1)

    def test_virtually_abelian_rejected(self):
        for m, n in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
            with pytest.raises(ValueError):
                bs_family(m, n, 3)


class TestProjectiveWords:
    def test_generator_images(self, c2c3):
        assert sl2_to_psl2_word(c2c3, S) == c2c3.parse("s")
        assert sl2_to_psl2_word(c2c3, T) == c2c3.parse("s t")
        assert sl2_to_psl2_word(c2c3, ((1, 0), (0, 1))) == ()
        assert sl2_to_psl2_word(c2c3, NEG_ID) == ()

    def test_roundtrip_random_ball(self, c2c3):
        sl = SL2ZGroup()
        rng = random.Random(77)
        ball = ball_words(sl, 6)
        for matrix in rng.sample(ball, 150):
            word = sl2_to_psl2_word(c2c3, matrix)
            value = psl2_word_matrix(word)
            assert value == matrix or value == sl2_mul(NEG_ID, matrix)

    def test_bad_determinant(self, c2c3):
        with pytest.raises(ValueError):
            sl2_to_psl2_word(c2c3, ((2, 0), (0, 1)))


class TestQuotientCheck:
    def test_center_only(self, c2c3):
        sl = SL2ZGroup()
        report = quotient_check(WordSet(sl, [((1, 0), (0, 1)), NEG_ID]), c2c3)
        assert report.proj_size == 1
        assert report.center_identity_ok and report.pairing_ok
        assert report.exemption is not None

    def test_generating_pair(self, c2c3):
        sl = SL2ZGroup()
        report = quotient_check(WordSet(sl, [S, T]), c2c3)
        assert report.center_identity_ok and report.pairing_ok
        assert report.growth_ok
        assert report.proj_size == 2

    def test_unipotent_progression_exempt(self, c2c3):
        sl = SL2ZGroup()
        mats = [sl.pow(T, k) for k in range(1, 21)]
        report = quotient_check(WordSet(sl, mats), c2c3)
        assert report.exemption is not None
        assert report.exemption.kind == "infinite-cyclic"
        assert report.ok

    def test_projection_size_bound(self, c2c3):
        sl = SL2ZGroup()
        rng = random.Random(3)
        ball = ball_words(sl, 5)
        for _ in range(10):
            mats = WordSet(sl, rng.sample(ball, rng.randint(1, 30)))
            report = quotient_check(mats, c2c3)
            assert 2 * report.proj_size >= report.size
            assert report.center_identity_ok and report.pairing_ok
