"""Marked regular directed complexes, entire monomorphisms and residuals,
Gray products of marked shapes, and pushout-products of marked inclusions.

At shape level there are no degenerate cells, so a marking is simply a set
of positive-dimensional elements; the degeneracy clause of the presheaf
definition is vacuous here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NotEntire, ShapeError
from .gray import gray_poset
from .ids import sid
from .molecule import Molecule
from .poset import SIGNS, OgPoset


def _poset(shape) -> OgPoset:
    return shape.poset if isinstance(shape, Molecule) else shape


@dataclass(eq=False)
class MarkedShape:
    """A shape (molecule or plain poset) with marked positive-dimensional
    elements."""

    shape: object
    marking: frozenset

    def __post_init__(self):
        p = self.poset
        self.marking = frozenset(self.marking)
        for x in self.marking:
            p._check(x)
            if p.dim_of[x] <= 0:
                raise ShapeError(f"marked element {sid(x)} must have positive dimension")

    @property
    def poset(self) -> OgPoset:
        return _poset(self.shape)

    def op(self) -> "MarkedShape":
        return MarkedShape(self.poset.op(), self.marking)


@dataclass(eq=False)
class MarkedMap:
    """Injective, marking-preserving map of marked shapes."""

    source: MarkedShape
    target: MarkedShape
    mapping: dict
    meta: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        src, tgt = self.source.poset, self.target.poset
        assert set(self.mapping) == set(src.dim_of)
        assert len(set(self.mapping.values())) == len(self.mapping)
        for x, y in self.mapping.items():
            assert src.dim_of[x] == tgt.dim_of[y]
            for s in SIGNS:
                assert {self.mapping[f] for f in src.faces(x, s)} == set(tgt.faces(y, s))
        assert self.apply(self.source.marking) <= self.target.marking, \
            "marking must be preserved forward"

    def apply(self, subset) -> frozenset:
        return frozenset(self.mapping[x] for x in subset)

    @property
    def image(self) -> frozenset:
        return frozenset(self.mapping.values())

    @property
    def entire(self) -> bool:
        return len(self.mapping) == len(self.target.poset)

    def op(self) -> "MarkedMap":
        return MarkedMap(self.source.op(), self.target.op(), dict(self.mapping),
                         meta=dict(self.meta))


def residual(i: MarkedMap) -> frozenset:
    """Newly marked elements of an entire map."""
    if not i.entire:
        raise NotEntire("residual is only defined for entire monomorphisms")
    return i.target.marking - i.apply(i.source.marking)


def subset_marked_map(target: MarkedShape, subset, marking, meta=None) -> MarkedMap:
    src = MarkedShape(target.poset.restrict(subset), frozenset(marking))
    return MarkedMap(src, target, {x: x for x in subset}, meta=meta or {})


# -- Gray product of marked shapes -------------------------------------------


def gray_marked(a: MarkedShape, b: MarkedShape) -> MarkedShape:
    """Product shape with marking A (x) cells  u  cells (x) B."""
    poset = gray_poset(a.poset, b.poset)
    marking = frozenset(
        (x, y)
        for x in a.poset.dim_of
        for y in b.poset.dim_of
        if x in a.marking or y in b.marking
    )
    return MarkedShape(poset, marking)


def pushout_product(i: MarkedMap, j: MarkedMap) -> MarkedMap:
    """The induced inclusion (X (x) Y') u (X' (x) Y) -> X (x) Y.

    The union subobject is computed by images inside the product; its
    marking is the union of the two image markings, per the colimit marking
    rule of the ambient quasitopos.
    """
    target = gray_marked(i.target, j.target)
    img_i, img_j = i.image, j.image
    x_all = i.target.poset.dim_of
    y_all = j.target.poset.dim_of
    elements = frozenset(
        (x, y) for x in x_all for y in y_all if x in img_i or y in img_j
    )
    mark_left = frozenset(
        (x, y)
        for x in x_all
        for y in img_j
        if x in i.target.marking or y in j.apply(j.source.marking)
    )
    mark_right = frozenset(
        (x, y)
        for x in img_i
        for y in y_all
        if x in i.apply(i.source.marking) or y in j.target.marking
    )
    domain = MarkedShape(target.poset.restrict(elements), mark_left | mark_right)
    return MarkedMap(domain, target, {e: e for e in elements},
                     meta={"kind": "pushout-product"})


def residual_formula(i: MarkedMap, j: MarkedMap) -> frozenset:
    """Closed form for the residual of i pp j with i entire.

    The residual consists of the pairs (a, v) with a newly marked by i and
    v outside the image of j; pairs whose v is itself marked in j's target
    are already marked in the domain through the cells (x) B term, so they
    are excluded.  The published statement omits that exclusion and is an
    upper bound; see residual_upper_bound.
    """
    if not i.entire:
        raise NotEntire("formula applies to entire first argument")
    new = residual(i)
    outside = frozenset(j.target.poset.dim_of) - j.image - j.target.marking
    return frozenset((a, v) for a in new for v in outside)


def residual_upper_bound(i: MarkedMap, j: MarkedMap) -> frozenset:
    """The published residual bound: (A minus A') (x) (cells minus image)."""
    if not i.entire:
        raise NotEntire("formula applies to entire first argument")
    new = residual(i)
    outside = frozenset(j.target.poset.dim_of) - j.image
    return frozenset((a, v) for a in new for v in outside)


def residual_formula_swapped(j: MarkedMap, i: MarkedMap) -> frozenset:
    """Closed form for j pp i with i entire (the mirrored order)."""
    if not i.entire:
        raise NotEntire("formula applies to entire second argument")
    new = residual(i)
    outside = frozenset(j.target.poset.dim_of) - j.image - j.target.marking
    return frozenset((v, a) for v in outside for a in new)


# -- generator families -------------------------------------------------------


def markmol(u: Molecule) -> MarkedShape:
    """Marking every maximal positive-dimensional element; {top} for atoms."""
    marking = frozenset(x for x in u.poset.maximal_elements() if u.poset.dim_of[x] > 0)
    return MarkedShape(u, marking)


def boundary_inclusion_min(u: Molecule) -> MarkedMap:
    """(bd U, empty) -> (U, empty)."""
    bd = u.poset.full_boundary_set()
    return MarkedMap(
        MarkedShape(u.poset.restrict(bd), frozenset()),
        MarkedShape(u, frozenset()),
        {x: x for x in bd},
        meta={"family": "minbd", "atom": u},
    )


def marking_inclusion(u: Molecule) -> MarkedMap:
    """t_U : (U, empty) -> (U, top marked); entire."""
    return MarkedMap(
        MarkedShape(u, frozenset()),
        markmol(u),
        {x: x for x in u.poset.dim_of},
        meta={"family": "t", "atom": u},
    )


def boundary_inclusion_marked(u: Molecule) -> MarkedMap:
    """(bd U, empty) -> (U, top marked); the second M' family."""
    bd = u.poset.full_boundary_set()
    return MarkedMap(
        MarkedShape(u.poset.restrict(bd), frozenset()),
        markmol(u),
        {x: x for x in bd},
        meta={"family": "markbd", "atom": u},
    )


@dataclass
class GeneratorFamilies:
    """The two cellular-model generator sets over a family of atoms, plus
    the dimension-filtered marking family."""

    minbd: list
    t: list
    markbd: list

    @property
    def M(self):
        return self.minbd + self.t

    @property
    def Mprime(self):
        return self.minbd + self.markbd

    def J(self, n: int):
        return [g for g in self.t if g.meta["atom"].dim > n]


def generators(atoms, max_dim=None) -> GeneratorFamilies:
    """Generator families over the given atoms, optionally dimension-capped."""
    selected = [u for u in atoms if max_dim is None or u.dim <= max_dim]
    return GeneratorFamilies(
        minbd=[boundary_inclusion_min(u) for u in selected],
        t=[marking_inclusion(u) for u in selected],
        markbd=[boundary_inclusion_marked(u) for u in selected],
    )
