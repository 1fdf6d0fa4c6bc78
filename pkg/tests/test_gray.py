"""Gray products: orientation formula, boundary identities, opposites."""

from ogpkit.gray import (
    flatten_triple_left,
    gray,
    gray_boundary_decomposition,
    gray_inclusion,
    gray_poset,
    op_swap_iso,
    twist,
)
from ogpkit.molecule import arrow, globe, identity_inclusion, is_round, op, point
from ogpkit.poset import MINUS, PLUS, find_iso


def square():
    return gray(arrow(), arrow())


class TestProduct:
    def test_unit_left(self):
        p = gray(point(), arrow())
        assert find_iso(p.poset, arrow().poset) is not None

    def test_unit_right(self):
        p = gray(arrow(), point())
        assert find_iso(p.poset, arrow().poset) is not None

    def test_square_shape(self):
        sq = square()
        assert len(sq) == 9 and sq.dim == 2
        top = ("1", "1")
        assert sq.poset.faces(top, MINUS) == {("0-", "1"), ("1", "0+")}
        assert sq.poset.faces(top, PLUS) == {("0+", "1"), ("1", "0-")}

    def test_square_is_atom_and_round(self):
        sq = square()
        assert sq.is_atom()
        assert is_round(sq)

    def test_globe_times_arrow(self):
        p = gray(globe(2), arrow())
        assert len(p) == 15 and p.dim == 3

    def test_closure_in_square(self):
        sq = square().poset
        assert sq.closure({("0-", "1")}) == {("0-", "1"), ("0-", "0-"), ("0-", "0+")}

    def test_cofaces_in_square(self):
        sq = square().poset
        assert sq.cofaces(("0-", "1"), PLUS) == frozenset()
        assert sq.cofaces(("0-", "1"), MINUS) == {("1", "1")}

    def test_associativity_after_flattening(self):
        a = arrow()
        left = gray_poset(gray_poset(a.poset, a.poset), a.poset)
        right = gray_poset(a.poset, gray_poset(a.poset, a.poset))
        relabeled_dims = {flatten_triple_left(x): d for x, d in left.dim_of.items()}
        assert relabeled_dims == dict(right.dim_of)
        for x in left.dim_of:
            for s in (MINUS, PLUS):
                mapped = {flatten_triple_left(f) for f in left.faces(x, s)}
                assert mapped == set(right.faces(flatten_triple_left(x), s))

    def test_product_of_inclusions_is_tracked(self):
        a = arrow()
        inc = a.boundary(0, MINUS)
        prod = gray_inclusion(inc, identity_inclusion(a))
        assert prod.image == {("0-", x) for x in a.poset.dim_of}


class TestBoundaryFormula:
    def test_square_input_boundary(self):
        # bd_1^- (I (x) I) = {0-} x I  u  I x {0+}: the left-then-top path
        sq = square()
        dec = gray_boundary_decomposition(arrow(), arrow(), 1, MINUS)
        expected = {("0-", x) for x in ("0-", "0+", "1")} | {(x, "0+") for x in ("0-", "0+", "1")}
        assert dec.direct == expected
        assert dec.union == expected
        assert sq.poset.boundary_set(1, MINUS) == expected

    def test_saturation(self):
        dec = gray_boundary_decomposition(arrow(), arrow(), 2, MINUS)
        assert dec.direct == dec.union == frozenset(square().poset.dim_of)

    def test_globe_product_all_levels(self):
        u, v = globe(2), arrow()
        for n in range(u.dim + v.dim + 1):
            for s in (MINUS, PLUS):
                dec = gray_boundary_decomposition(u, v, n, s)
                assert dec.direct == dec.union, (n, s)

    def test_item1_splits_cover_boundary(self):
        u, v = globe(2), arrow()
        for n in range(1, u.dim + v.dim + 1):
            for s in (MINUS, PLUS):
                dec = gray_boundary_decomposition(u, v, n, s)
                for j, left, right in dec.splits:
                    assert left | right == dec.direct, (n, s, j)


class TestOpSwap:
    def test_square(self):
        mapping = op_swap_iso(arrow().poset, arrow().poset)
        assert len(mapping) == 9

    def test_point_factor(self):
        mapping = op_swap_iso(point().poset, arrow().poset)
        assert all(k == (v[1], v[0]) for k, v in mapping.items())

    def test_globe_times_arrow(self):
        assert len(op_swap_iso(globe(2).poset, arrow().poset)) == 15

    def test_double_swap_is_identity(self):
        p, q = globe(2).poset, arrow().poset
        fwd = op_swap_iso(p, q)
        back = op_swap_iso(q.op().op(), p.op().op())  # = op_swap_iso(q, p)
        assert all(back[v] == k for k, v in fwd.items())

    def test_op_of_product_vs_swapped_product(self):
        # op(gray(I, I)) evaluates to gray(op I, op I) after the swap
        sq_op = op(gray(arrow(), arrow()))
        swapped = gray(op(arrow()), op(arrow()))
        iso = find_iso(sq_op.poset, swapped.poset)
        assert iso is not None


class TestTwist:
    def test_even_keeps_sign(self):
        assert twist(MINUS, 0) == MINUS and twist(PLUS, 2) == PLUS

    def test_odd_flips(self):
        assert twist(MINUS, 1) == PLUS and twist(PLUS, 3) == MINUS
