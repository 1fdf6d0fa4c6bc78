"""Gray products of shapes, opposites, and the boundary identities that
relate them.

The product carrier is the set of pairs (x, y) with additive dimension;
faces of (x, y) combine the left factor's faces with the right factor's
faces at a sign twisted by the parity of dim x.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ids import sid
from .molecule import GeneralisedPasting, Inclusion, Molecule
from .poset import MINUS, PLUS, SIGNS, OgPoset, build, flip


def twist(sign: str, parity: int) -> str:
    """(-)^parity . sign"""
    return sign if parity % 2 == 0 else flip(sign)


def gray_poset(p: OgPoset, q: OgPoset) -> OgPoset:
    elements, faces = {}, {}
    for x, dx in p.dim_of.items():
        for y, dy in q.dim_of.items():
            e = (x, y)
            elements[e] = dx + dy
            if dx + dy == 0:
                continue
            fin, fout = set(), set()
            for s, acc in ((MINUS, fin), (PLUS, fout)):
                acc.update((f, y) for f in p.faces(x, s))
                acc.update((x, g) for g in q.faces(y, twist(s, dx)))
            faces[e] = (fin, fout)
    return build(elements, faces)


def gray(m1: Molecule, m2: Molecule) -> Molecule:
    """Gray product of molecules; molecule-hood is theorem-backed."""
    poset = gray_poset(m1.poset, m2.poset)
    cert = {"kind": "gray", "left": m1.certificate, "right": m2.certificate}
    result = Molecule(poset, cert)
    result.provenance["factors"] = (m1, m2)
    return result


def gray_inclusion(i: Inclusion, j: Inclusion) -> Inclusion:
    """Product of tracked inclusions: U (x) V into U' (x) V'."""
    src = gray(i.source, j.source)
    tgt = gray(i.target, j.target)
    mapping = {
        (x, y): (i.mapping[x], j.mapping[y])
        for x in i.source.poset.dim_of
        for y in j.source.poset.dim_of
    }
    return Inclusion(src, tgt, mapping, kind="gray-product")


@dataclass
class BoundaryDecomposition:
    """Both sides of the boundary formulas for a Gray product, as element
    sets of the product; the caller compares."""

    direct: frozenset                 # boundary rule applied to the product
    union_terms: dict                 # k -> bd_k^a U x bd_(n-k)^b V
    union: frozenset                  # union of the terms
    splits: list                      # per j: (j, left set, right set)


def gray_boundary_decomposition(u: Molecule, v: Molecule, n: int, sign: str) -> BoundaryDecomposition:
    """Evaluate the union formula and the two-term splits for bd_n of U (x) V.

    The union formula sums bd_k U (x) bd_(n-k) V over k with the right
    factor's sign twisted by (-1)^k.  Each split presents the boundary as a
    generalised pasting of two pieces, one per factor, indexed by a cut
    position j; pieces are returned as element sets computed on the
    corresponding subproducts, independently of the direct side.
    """
    prod = gray_poset(u.poset, v.poset)
    direct = prod.boundary_set(n, sign)

    terms = {}
    for k in range(n + 1):
        left = u.poset.boundary_set(k, sign)
        right = v.poset.boundary_set(n - k, twist(sign, k))
        terms[k] = frozenset((x, y) for x in left for y in right)
    union = frozenset().union(*terms.values()) if terms else frozenset()

    splits = []
    for j in range(n):
        # the V-boundary sign here is literally (-1)^j for the input case
        # and (-1)^(j+1) for the output case
        if sign == MINUS:
            uu = u.poset.restrict(u.poset.boundary_set(j, MINUS))
            left_piece = _sub_gray_boundary(uu, v.poset, n, MINUS)
            vv = v.poset.restrict(v.poset.boundary_set(n - j - 1, twist(PLUS, j)))
            right_piece = _sub_gray_boundary(u.poset, vv, n, MINUS)
        else:
            vv = v.poset.restrict(v.poset.boundary_set(n - j - 1, twist(MINUS, j)))
            left_piece = _sub_gray_boundary(u.poset, vv, n, PLUS)
            uu = u.poset.restrict(u.poset.boundary_set(j, PLUS))
            right_piece = _sub_gray_boundary(uu, v.poset, n, PLUS)
        splits.append((j, left_piece, right_piece))
    return BoundaryDecomposition(direct, terms, union, splits)


def _sub_gray_boundary(p: OgPoset, q: OgPoset, n: int, sign: str) -> frozenset:
    """bd_n of the product of two (restrictions of) factors, as a subset of
    the ambient product carrier."""
    return gray_poset(p, q).boundary_set(n, sign)


def gray_split_of_generalised_pasting(g: GeneralisedPasting, other: Molecule,
                                      side: str) -> tuple:
    """Transport a generalised pasting through a Gray product.

    side "left": the pasting lives in the left factor; the product splits as
    (W (x) V, W' (x) V) at level k + dim V.  side "right": the pasting lives
    in the right factor; the product splits at level k + dim U, with the
    two pieces swapped when dim U is odd.
    Returns (left ids, right ids, level) in the product of g.ambient and
    the other factor (in the order dictated by side).
    """
    if side == "left":
        pieces = (
            frozenset((x, y) for x in g.left for y in other.poset.dim_of),
            frozenset((x, y) for x in g.right for y in other.poset.dim_of),
        )
        return pieces[0], pieces[1], g.level + other.dim
    first = frozenset((y, x) for x in g.left for y in other.poset.dim_of)
    second = frozenset((y, x) for x in g.right for y in other.poset.dim_of)
    if other.dim % 2 == 1:
        first, second = second, first
    return first, second, g.level + other.dim


# -- opposites ---------------------------------------------------------------


def op_swap_iso(p: OgPoset, q: OgPoset) -> dict:
    """The orientation-preserving bijection op(P (x) Q) -> op(Q) (x) op(P),
    (x, y) -> (y, x).  Raises AssertionError with the offending element if
    a face set fails to correspond."""
    lhs = gray_poset(p, q).op()
    rhs = gray_poset(q.op(), p.op())
    mapping = {(x, y): (y, x) for x in p.dim_of for y in q.dim_of}
    assert set(mapping.values()) == set(rhs.dim_of)
    for e, image in mapping.items():
        assert lhs.dim_of[e] == rhs.dim_of[image]
        for s in SIGNS:
            got = {mapping[f] for f in lhs.faces(e, s)}
            want = set(rhs.faces(image, s))
            assert got == want, (
                f"op-swap failed at {sid(e)} sign {s}: {sorted(map(sid, got))} "
                f"!= {sorted(map(sid, want))}"
            )
    return mapping


def flatten_triple_left(x):
    """((a, b), c) -> (a, (b, c)) on ids, for associativity comparisons."""
    (a, b), c = x
    return (a, (b, c))
