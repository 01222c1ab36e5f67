"""Factor backend arithmetic: axioms, normal forms, orders, loading."""

import itertools
import random
from fractions import Fraction

import pytest

from freegrowth import (
    BaumslagSolitarGroup,
    CayleyTableGroup,
    CyclicGroup,
    DirectProductWithIntegers,
    GroupLoadError,
    IntegerGroup,
    SL2ZGroup,
    WordParseError,
    load_group,
)
from freegrowth.groups import sl2_det, sl2_mul


def s3_table():
    """Multiplication table of S3 from permutation composition."""
    perms = [(0, 1, 2)] + sorted(
        p for p in itertools.permutations(range(3)) if p != (0, 1, 2)
    )
    index = {p: i for i, p in enumerate(perms)}
    compose = lambda p, q: tuple(p[q[k]] for k in range(3))
    return [[index[compose(p, q)] for q in perms] for p in perms]


class TestCyclic:
    def test_order_three_relation(self):
        c3 = CyclicGroup(3)
        t = c3.generators["t"]
        assert c3.mul(t, c3.mul(t, t)) == c3.identity
        assert c3.mul(t, c3.pow(t, 2)) == c3.identity

    def test_inverse(self):
        c3 = CyclicGroup(3)
        assert c3.inv(1) == 2

    def test_orders(self):
        c2 = CyclicGroup(2, ({"name": "s", "element": 1},))
        assert c2.order(1) == 2
        assert c2.order(0) == 1
        c12 = CyclicGroup(12)
        assert c12.order(4) == 3

    def test_power_index_solves_congruence(self):
        c12 = CyclicGroup(12)
        assert c12.power_index(5, 7) is not None
        assert c12.pow(5, c12.power_index(5, 7)) == 7
        assert c12.power_index(4, 7) is None


class TestIntegers:
    def test_addition(self):
        z = IntegerGroup()
        assert z.mul(3, -1) == 2

    def test_order(self):
        z = IntegerGroup()
        assert z.order(1) is None
        assert z.order(0) == 1

    def test_power_index(self):
        z = IntegerGroup()
        assert z.power_index(3, -12) == -4
        assert z.power_index(3, 7) is None


class TestCayleyTable:
    def test_s3_valid(self):
        group = CayleyTableGroup(s3_table(), ({"name": "r", "element": 1}, {"name": "f", "element": 3}))
        assert group.n == 6
        orders = sorted(group.order(i) for i in range(6))
        assert orders == [1, 2, 2, 2, 3, 3]

    def test_axioms_exhaustive(self):
        group = CayleyTableGroup(s3_table())
        for a in range(6):
            assert group.mul(a, group.inv(a)) == 0
            assert group.mul(a, 0) == a == group.mul(0, a)
            for b in range(6):
                for c in range(6):
                    assert group.mul(group.mul(a, b), c) == group.mul(a, group.mul(b, c))

    def test_repeated_row_entry_rejected(self):
        table = s3_table()
        table[2][3] = table[2][4]
        with pytest.raises(GroupLoadError, match="Latin square"):
            CayleyTableGroup(table)

    def test_bad_identity_rejected(self):
        table = [[1, 0], [0, 1]]
        with pytest.raises(GroupLoadError, match="identity"):
            CayleyTableGroup(table)

    def test_associativity_violation_names_triple(self):
        # a Latin square with identity row/column that is not a group
        table = [
            [0, 1, 2, 3, 4],
            [1, 0, 3, 4, 2],
            [2, 4, 0, 1, 3],
            [3, 2, 4, 0, 1],
            [4, 3, 1, 2, 0],
        ]
        with pytest.raises(GroupLoadError, match=r"associativity fails at triple \(\d+,\d+,\d+\)"):
            CayleyTableGroup(table)


class TestSL2Z:
    def test_unipotent_inverse(self):
        sl = SL2ZGroup()
        assert sl.inv(((1, 1), (0, 1))) == ((1, -1), (0, 1))

    def test_orders(self):
        sl = SL2ZGroup()
        s, t = sl.generators["S"], sl.generators["T"]
        assert sl.order(s) == 4
        assert sl.order(t) is None
        assert sl.order(sl.mul(s, t)) == 6
        assert sl.order(((-1, 0), (0, -1))) == 2
        assert sl.order(((2, 1), (1, 1))) is None

    def test_determinant_preserved(self):
        sl = SL2ZGroup()
        rng = random.Random(3)
        m = sl.identity
        for _ in range(200):
            step = rng.choice([sl.generators["S"], sl.generators["T"], sl.inv(sl.generators["T"])])
            m = sl.mul(m, step)
            assert sl2_det(m) == 1

    def test_big_entries_exact(self):
        sl = SL2ZGroup()
        t = sl.generators["T"]
        m = sl.pow(t, 10**20)
        assert m[0][1] == 10**20

    def test_format_roundtrip(self):
        sl = SL2ZGroup()
        rng = random.Random(9)
        m = sl.identity
        for _ in range(50):
            m = sl.mul(m, rng.choice([sl.generators["S"], sl.generators["T"]]))
            assert sl.parse(sl.format(m)) == m

    def test_bad_determinant_rejected(self):
        with pytest.raises(GroupLoadError, match="determinant"):
            SL2ZGroup().parse_element([[1, 0], [0, 2]])


def bs_matrix_oracle(n):
    """Faithful 2x2 rational representation of BS(1,n)."""
    x = ((Fraction(1), Fraction(1)), (Fraction(0), Fraction(1)))
    y = ((Fraction(n), Fraction(0)), (Fraction(0), Fraction(1)))
    return x, y


class TestBaumslagSolitar:
    def test_defining_relation(self):
        bs = BaumslagSolitarGroup(1, 2)
        assert bs.mul(bs.parse("y x y^-1"), bs.parse("x^-2")) == bs.identity

    def test_inverse_normal_form(self):
        bs = BaumslagSolitarGroup(2, 3)
        assert bs.inv(bs.parse("y x^2 y^-1")) == bs.parse("x^-3")

    def test_normalization_idempotent_and_relation(self):
        rng = random.Random(17)
        for m, n in [(1, 2), (2, 3), (3, 2), (2, -3), (-2, 3), (1, -2)]:
            bs = BaumslagSolitarGroup(m, n)
            for _ in range(150):
                tokens = " ".join(
                    rng.choice(["x", "x^-1", "x^2", "y", "y^-1"])
                    for _ in range(rng.randint(0, 8))
                )
                w = bs.parse(tokens)
                assert bs.parse(bs.format(w)) == w
                assert bs.mul(w, bs.identity) == w
                assert bs.mul(w, bs.inv(w)) == bs.identity
                u = bs.parse(" ".join(rng.choice(["x", "y", "y^-1"]) for _ in range(4)))
                lhs = bs.mul(bs.mul(w, bs.parse(f"y x^{m} y^-1")), u)
                rhs = bs.mul(bs.mul(w, bs.parse(f"x^{n}")), u)
                assert lhs == rhs

    def test_against_matrix_oracle(self):
        # BS(1,n) embeds in the rational upper triangular matrices
        def mat_mul(a, b):
            return (
                (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
                (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
            )

        def mat_inv(a):
            det = a[0][0] * a[1][1] - a[0][1] * a[1][0]
            return (
                (a[1][1] / det, -a[0][1] / det),
                (-a[1][0] / det, a[0][0] / det),
            )

        rng = random.Random(23)
        for n in (2, 4, -2):
            bs = BaumslagSolitarGroup(1, n)
            x, y = bs_matrix_oracle(n)
            steps = {
                "x": (bs.parse("x"), x),
                "x^-1": (bs.parse("x^-1"), mat_inv(x)),
                "y": (bs.parse("y"), y),
                "y^-1": (bs.parse("y^-1"), mat_inv(y)),
            }
            seen = {}
            for _ in range(400):
                w = bs.identity
                m = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
                for _ in range(rng.randint(0, 10)):
                    ww, mm = steps[rng.choice(list(steps))]
                    w = bs.mul(w, ww)
                    m = mat_mul(m, mm)
                # equal matrices <=> equal Britton forms (faithful representation)
                if m in seen:
                    assert seen[m] == w
                else:
                    seen[m] = w

    def test_order(self):
        bs = BaumslagSolitarGroup(2, 3)
        assert bs.order(bs.identity) == 1
        assert bs.order(bs.parse("x")) is None
        assert bs.order(bs.parse("y x y^-1 x")) is None

    def test_zero_parameters_rejected(self):
        with pytest.raises(GroupLoadError):
            BaumslagSolitarGroup(0, 2)
        with pytest.raises(GroupLoadError):
            BaumslagSolitarGroup(2, 0)


class TestDirectProductWithIntegers:
    def test_componentwise(self):
        group = DirectProductWithIntegers(CyclicGroup(3), z_name="z")
        a = group.parse("t z^2")
        b = group.parse("t^2 z^-1")
        assert group.mul(a, b) == (0, 1)
        assert group.order(group.parse("z")) is None
        assert group.order(group.parse("t")) == 3

    def test_format_roundtrip(self):
        group = DirectProductWithIntegers(CyclicGroup(3), z_name="z")
        for text in ("e", "t", "z^-4", "t^2 z^3"):
            w = group.parse(text)
            assert group.parse(group.format(w)) == w


class TestLoadGroup:
    def test_cyclic_doc(self):
        group = load_group(
            {"kind": "cyclic", "params": {"n": 3}, "generators": [{"name": "t", "element": 1}]}
        )
        assert isinstance(group, CyclicGroup) and group.n == 3
        assert group.mul(group.generators["t"], 2) == 0

    def test_s3_doc(self):
        group = load_group({"kind": "cayley-table", "params": {"table": s3_table()}})
        assert group.n == 6

    def test_free_product_doc(self):
        doc = {
            "kind": "free-product",
            "params": {
                "factors": [
                    {"kind": "integers", "generators": [{"name": "a", "element": 1}]},
                    {"kind": "cyclic", "params": {"n": 2}, "generators": [{"name": "s", "element": 1}]},
                ]
            },
        }
        group = load_group(doc)
        assert group.kind == "free-product"
        assert group.format(group.parse("a s a^-1")) == "a s a^-1"

    def test_nary_free_product_nests(self):
        doc = {
            "kind": "free-product",
            "params": {
                "factors": [
                    {"kind": "integers", "generators": [{"name": "a", "element": 1}]},
                    {"kind": "integers", "generators": [{"name": "b", "element": 1}]},
                    {"kind": "cyclic", "params": {"n": 2}, "generators": [{"name": "c", "element": 1}]},
                ]
            },
        }
        group = load_group(doc)
        w = group.parse("a b c a")
        assert len(w) == 3  # (a b) is one letter of the inner factor
        assert group.format(w) == "a b c a"

    def test_duplicate_generator_names_rejected(self):
        doc = {
            "kind": "free-product",
            "params": {
                "factors": [
                    {"kind": "integers", "generators": [{"name": "a", "element": 1}]},
                    {"kind": "integers", "generators": [{"name": "a", "element": 1}]},
                ]
            },
        }
        with pytest.raises(GroupLoadError, match="more than one factor"):
            load_group(doc)

    def test_bs_doc_and_element_syntax(self):
        doc = {"kind": "baumslag-solitar", "params": {"m": 1, "n": 2}}
        group = load_group(doc)
        assert group.parse("y x y^-1") == group.parse("x^2")
        assert group.parse_element("x^3 y^-1 x") == group.parse("x^3 y^-1 x")

    def test_unknown_generator_errors(self):
        group = load_group({"kind": "integers"})
        with pytest.raises(WordParseError, match="unknown generator"):
            group.parse("q^2")

    def test_unknown_kind(self):
        with pytest.raises(GroupLoadError, match="unknown group kind"):
            load_group({"kind": "braid"})
