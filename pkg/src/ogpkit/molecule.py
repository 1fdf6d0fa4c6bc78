"""Inductive molecules over oriented graded posets.

A Molecule is a validated poset together with a construction certificate:
point, paste, atom, or a theorem-backed rule tag for constructions whose
molecule-hood is guaranteed by a cited result (boundaries, Gray products,
duals, cylinders).  Molecule-hood of an arbitrary poset is never decided;
the bounded `reconstruct` search below produces certificates for small
instances and is used by the verification harness as a spot check.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    BoundaryMismatch,
    BoundExceeded,
    DimMismatch,
    LevelOutOfRange,
    NotRewritable,
    NotRound,
    RecognitionFailed,
    ZeroDimensional,
)
from .ids import inl, inr, sid
from .poset import MINUS, PLUS, SIGNS, OgPoset, all_isos, build, find_iso

POINT_ID = "*"
TOP_ID = "top"


@dataclass(eq=False)
class Molecule:
    """Shape with a construction certificate and cached boundaries."""

    poset: OgPoset
    certificate: dict
    provenance: dict = field(default_factory=dict, repr=False)
    _boundaries: dict = field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return self.poset.dim

    def __len__(self):
        return len(self.poset)

    @property
    def elements(self):
        return self.poset.elements

    def grade(self, n):
        return self.poset.grade(n)

    def maximal_elements(self):
        return self.poset.maximal_elements()

    def top(self):
        """The unique maximal element of an atom."""
        ms = self.poset.maximal_elements()
        if len(ms) != 1:
            raise NotRound(f"shape with {len(ms)} maximal elements is not an atom")
        return next(iter(ms))

    def is_atom(self) -> bool:
        return len(self.poset.maximal_elements()) == 1 and len(self.poset) > 0

    def boundary(self, n: int | None = None, sign: str = MINUS) -> "Inclusion":
        """Inclusion of the n-dimensional boundary of the given sign.

        Defaults to the top boundary (n = dim - 1).  For n >= dim this is
        the identity inclusion.
        """
        if n is None:
            n = self.dim - 1
        key = (n, sign)
        if key not in self._boundaries:
            subset = self.poset.boundary_set(n, sign)
            if len(subset) == len(self.poset):
                self._boundaries[key] = identity_inclusion(self)
            else:
                src = submolecule(self, subset, {"kind": "boundary", "n": n, "sign": sign,
                                                 "of": self.certificate})
                self._boundaries[key] = Inclusion(src, self, {x: x for x in subset},
                                                  kind="boundary")
        return self._boundaries[key]

    def boundary_molecule(self, n=None, sign=MINUS) -> "Molecule":
        return self.boundary(n, sign).source


@dataclass(eq=False)
class Inclusion:
    """Tracked injective map of shapes, tagged with how it arose."""

    source: Molecule
    target: Molecule
    mapping: dict
    kind: str = "inclusion"

    def __post_init__(self):
        src = self.source.poset
        tgt = self.target.poset
        assert set(self.mapping) == set(src.dim_of), "inclusion must be total"
        image = set(self.mapping.values())
        assert len(image) == len(self.mapping), "inclusion must be injective"
        for x, y in self.mapping.items():
            assert src.dim_of[x] == tgt.dim_of[y], "inclusion must preserve dimension"
            for s in SIGNS:
                assert {self.mapping[f] for f in src.faces(x, s)} == set(tgt.faces(y, s)), \
                    f"inclusion must preserve faces at {sid(x)}"

    @property
    def image(self) -> frozenset:
        return frozenset(self.mapping.values())

    @property
    def is_iso(self) -> bool:
        return len(self.mapping) == len(self.target.poset)

    @property
    def rewritable(self) -> bool:
        return self.source.dim == self.target.dim and is_round(self.source)

    def compose(self, other: "Inclusion") -> "Inclusion":
        """other after self: self source includes into other's target."""
        assert self.target is other.source or self.target.poset == other.source.poset
        return Inclusion(
            self.source,
            other.target,
            {x: other.mapping[y] for x, y in self.mapping.items()},
            kind="compose",
        )

    def apply(self, subset) -> frozenset:
        return frozenset(self.mapping[x] for x in subset)


def identity_inclusion(m: Molecule) -> Inclusion:
    return Inclusion(m, m, {x: x for x in m.poset.dim_of}, kind="iso")


def submolecule(m: Molecule, subset, certificate) -> Molecule:
    """Molecule structure on a closed subset, ids preserved."""
    return Molecule(m.poset.restrict(subset), certificate)


def subset_inclusion(m: Molecule, subset, certificate, kind="inclusion") -> Inclusion:
    src = submolecule(m, subset, certificate)
    return Inclusion(src, m, {x: x for x in subset}, kind=kind)


# -- base shapes -----------------------------------------------------------


def point() -> Molecule:
    return Molecule(build({POINT_ID: 0}, {}), {"kind": "point"})


def arrow() -> Molecule:
    p = build(
        {"0-": 0, "0+": 0, "1": 1},
        {"1": ({"0-"}, {"0+"})},
    )
    return Molecule(p, {"kind": "arrow"})


def globe(n: int) -> Molecule:
    """The n-globe with canonical ids "k-", "k+" and top str(n).

    Uniquely isomorphic to the iterated atom construction; built directly
    so facet names stay readable.
    """
    if n < 0:
        raise ZeroDimensional("globe dimension must be >= 0")
    if n == 0:
        return point()
    elements = {str(n): n}
    faces = {}
    for k in range(n):
        elements[f"{k}-"] = k
        elements[f"{k}+"] = k
    for k in range(1, n):
        for s in SIGNS:
            faces[f"{k}{s}"] = ({f"{k - 1}-"}, {f"{k - 1}+"})
    faces[str(n)] = ({f"{n - 1}-"}, {f"{n - 1}+"})
    return Molecule(build(elements, faces), {"kind": "globe", "n": n})


# -- roundness -------------------------------------------------------------


def is_round(shape) -> bool:
    """Lower boundaries intersect minimally: bd_k- meets bd_k+ in bd_(k-1)."""
    p = shape.poset if isinstance(shape, Molecule) else shape
    n = p.dim
    for k in range(n):
        meet = p.boundary_set(k, MINUS) & p.boundary_set(k, PLUS)
        lower = p.boundary_set(k - 1, MINUS) | p.boundary_set(k - 1, PLUS)
        if meet != lower:
            return False
    return True


# -- pushout gluing --------------------------------------------------------


def paste_along(a: OgPoset, b: OgPoset, glue: dict):
    """Pushout of a <- dom(glue) -> b in oriented graded posets.

    glue maps a closed subset of a isomorphically onto a closed subset of b.
    Left elements keep their ids under the in0 tag, unshared right elements
    under in1, and the shared part keeps the left ids.
    """
    image = {}
    for x, y in glue.items():
        assert a.dim_of[x] == b.dim_of[y], "glue must preserve dimension"
        image[y] = x
    for x in glue:
        for s in SIGNS:
            fx = {glue[f] for f in a.faces(x, s)}
            assert fx == set(b.faces(glue[x], s)), "glue must preserve faces"

    def map_a(x):
        return inl(x)

    def map_b(y):
        return inl(image[y]) if y in image else inr(y)

    elements, faces = {}, {}
    for x, d in a.dim_of.items():
        elements[map_a(x)] = d
        if d > 0:
            faces[map_a(x)] = (
                {map_a(f) for f in a.faces(x, MINUS)},
                {map_a(f) for f in a.faces(x, PLUS)},
            )
    for y, d in b.dim_of.items():
        if y in image:
            continue
        elements[map_b(y)] = d
        if d > 0:
            faces[map_b(y)] = (
                {map_b(f) for f in b.faces(y, MINUS)},
                {map_b(f) for f in b.faces(y, PLUS)},
            )
    poset = build(elements, faces)
    inj_a = {x: map_a(x) for x in a.dim_of}
    inj_b = {y: map_b(y) for y in b.dim_of}
    return poset, inj_a, inj_b


# -- pastings --------------------------------------------------------------


def paste(m1: Molecule, m2: Molecule, k: int) -> Molecule:
    """Pasting m1 #_k m2 along the unique iso bd_k+ m1 = bd_k- m2."""
    if k < 0:
        raise LevelOutOfRange(f"pasting level {k} is negative")
    b1 = m1.poset.restrict(m1.poset.boundary_set(k, PLUS))
    b2 = m2.poset.restrict(m2.poset.boundary_set(k, MINUS))
    iso = find_iso(b1, b2)
    if iso is None:
        raise BoundaryMismatch(
            f"bd_{k}+ of the left shape is not isomorphic to bd_{k}- of the right shape"
        )
    poset, inj1, inj2 = paste_along(m1.poset, m2.poset, dict(iso.mapping))
    cert = {
        "kind": "paste",
        "k": k,
        "left": m1.certificate,
        "right": m2.certificate,
        "glue": {sid(x): sid(y) for x, y in sorted(iso.mapping.items(), key=lambda i: sid(i[0]))},
    }
    result = Molecule(poset, cert)
    result.provenance["left"] = Inclusion(m1, result, inj1, kind="paste-left")
    result.provenance["right"] = Inclusion(m2, result, inj2, kind="paste-right")
    result.provenance["gencp"] = GeneralisedPasting(
        ambient=result,
        left=frozenset(inj1.values()),
        right=frozenset(inj2.values()),
        level=k,
        checked=False,
    )
    return result


def paste_at(m1: Molecule, iota: Inclusion, m2: Molecule, side: str, k: int) -> Molecule:
    """Pasting at a submolecule.

    side "left": iota : bd_k+ m1 -> bd_k- m2 rewritable; m1 is glued onto
    the input side of m2.  side "right": iota : bd_k- m2 -> bd_k+ m1; m2 is
    glued onto the output side of m1.  Either way the left argument keeps
    its ids in the pushout.
    """
    if k < 0:
        raise LevelOutOfRange(f"pasting level {k} is negative")
    if side not in ("left", "right"):
        raise LevelOutOfRange(f"unknown side {side!r}")
    if side == "left":
        expected_src = m1.poset.boundary_set(k, PLUS)
        expected_tgt = m2.poset.boundary_set(k, MINUS)
        tgt_poset = m2.poset
    else:
        expected_src = m2.poset.boundary_set(k, MINUS)
        expected_tgt = m1.poset.boundary_set(k, PLUS)
        tgt_poset = m1.poset
    if frozenset(iota.mapping) != expected_src:
        raise NotRewritable("inclusion source does not match the required boundary")
    if not iota.image <= expected_tgt:
        raise NotRewritable("inclusion image does not land in the required boundary")
    # rewritability is against the boundary the inclusion lands in, not the
    # whole molecule: round source of the same dimension
    if not is_round(iota.source):
        raise NotRewritable("inclusion source must be round")
    if iota.source.dim != tgt_poset.restrict(expected_tgt).dim:
        raise NotRewritable("inclusion must not drop dimension into its boundary")

    if side == "left":
        glue = dict(iota.mapping)  # m1 boundary ids -> m2 ids
        poset, inj1, inj2 = paste_along(m1.poset, m2.poset, glue)
    else:
        glue = {y: x for x, y in iota.mapping.items()}  # m1 ids -> m2 boundary ids
        poset, inj1, inj2 = paste_along(m1.poset, m2.poset, glue)
    cert = {
        "kind": "paste_at",
        "side": side,
        "k": k,
        "left": m1.certificate,
        "right": m2.certificate,
        "glue": {sid(x): sid(y) for x, y in sorted(glue.items(), key=lambda i: sid(i[0]))},
    }
    result = Molecule(poset, cert)
    result.provenance["left"] = Inclusion(m1, result, inj1, kind="paste-left")
    result.provenance["right"] = Inclusion(m2, result, inj2, kind="paste-right")
    result.provenance["gencp"] = GeneralisedPasting(
        ambient=result,
        left=frozenset(inj1.values()),
        right=frozenset(inj2.values()),
        level=k,
        checked=False,
    )
    return result


def atom(m1: Molecule, m2: Molecule) -> Molecule:
    """The atom m1 => m2: one fresh top element over the glued boundaries."""
    n = m1.dim
    if n != m2.dim:
        raise DimMismatch(f"atom inputs have dimensions {m1.dim} and {m2.dim}")
    if not is_round(m1) or not is_round(m2):
        raise NotRound("atom inputs must be round")
    glue = {}
    for s in SIGNS:
        b1 = m1.poset.restrict(m1.poset.boundary_set(n - 1, s))
        b2 = m2.poset.restrict(m2.poset.boundary_set(n - 1, s))
        iso = find_iso(b1, b2)
        if iso is None:
            raise BoundaryMismatch(f"bd{s} of the two inputs are not isomorphic")
        for x, y in iso.mapping.items():
            if x in glue and glue[x] != y:
                raise BoundaryMismatch("input and output boundary isos disagree on the overlap")
            glue[x] = y
    poset, inj1, inj2 = paste_along(m1.poset, m2.poset, glue)
    elements = dict(poset.dim_of)
    faces = {x: (set(poset.faces_in[x]), set(poset.faces_out[x]))
             for x in poset.dim_of if poset.dim_of[x] > 0}
    elements[TOP_ID] = n + 1
    faces[TOP_ID] = (
        {inj1[x] for x in m1.poset.grade(n)},
        {inj2[y] for y in m2.poset.grade(n)},
    )
    cert = {
        "kind": "atom",
        "left": m1.certificate,
        "right": m2.certificate,
        "glue": {sid(x): sid(y) for x, y in sorted(glue.items(), key=lambda i: sid(i[0]))},
    }
    result = Molecule(build(elements, faces), cert)
    result.provenance["left"] = Inclusion(m1, result, inj1, kind="atom-input")
    result.provenance["right"] = Inclusion(m2, result, inj2, kind="atom-output")
    return result


def merger(m: Molecule) -> Molecule:
    """The atom bd- m => bd+ m compressing a round molecule to one cell."""
    if m.dim < 1:
        raise ZeroDimensional("merger needs dimension >= 1")
    if not is_round(m):
        raise NotRound("merger input must be round")
    return atom(m.boundary_molecule(sign=MINUS), m.boundary_molecule(sign=PLUS))


# -- duals at molecule level -------------------------------------------------


def dual(m: Molecule, dims) -> Molecule:
    dims = frozenset(dims)
    cert = m.certificate
    if cert.get("kind") == "dual" and cert.get("dims") == tuple(sorted(dims)):
        return m.provenance["dual_of"]
    result = Molecule(m.poset.dual(dims), {"kind": "dual", "dims": tuple(sorted(dims)),
                                           "of": m.certificate})
    result.provenance["dual_of"] = m
    return result


def op(m: Molecule) -> Molecule:
    return dual(m, range(1, m.dim + 1, 2)) if m.dim >= 1 else dual(m, ())


# -- generalised pastings ----------------------------------------------------


@dataclass(eq=False)
class GeneralisedPasting:
    """A decomposition ambient = left u right recognised (or recorded) as a
    generalised pasting at the level-k boundary."""

    ambient: Molecule
    left: frozenset
    right: frozenset
    level: int
    checked: bool = False

    @property
    def shared(self) -> frozenset:
        return self.left & self.right

    def left_poset(self) -> OgPoset:
        return self.ambient.poset.restrict(self.left)

    def right_poset(self) -> OgPoset:
        return self.ambient.poset.restrict(self.right)


def recognise_generalised_pasting(
    ambient: Molecule,
    left,
    right,
    k: int,
    *,
    shared=None,
    reconstruct_cap: int = 120,
):
    """Check the three generalised-pasting conditions for a decomposition.

    left and right are closed element subsets of the ambient covering it.
    On success the two pasting factorisations through the k-boundaries are
    materialised (as unions inside the ambient, with every intermediate
    pasting precondition checked) and the ambient is asserted rigid, which
    together witness the unique isomorphism of the factorisations with the
    ambient.  Condition failures return None; a factorisation failure on a
    decomposition that passed the conditions raises, since it contradicts a
    cited lemma.
    """
    w = ambient.poset
    left, right = frozenset(left), frozenset(right)
    if left | right != frozenset(w.dim_of):
        return None
    if not (w.is_closed(left) and w.is_closed(right)):
        return None
    meet = left & right
    if shared is not None and frozenset(shared) != meet:
        return None
    u, v = w.restrict(left), w.restrict(right)
    # condition 1: the shared part lies in bd_k+ of the left and bd_k- of
    # the right piece
    if not (meet <= u.boundary_set(k, PLUS) and meet <= v.boundary_set(k, MINUS)):
        return None
    bdm = w.boundary_set(k, MINUS)
    bdp = w.boundary_set(k, PLUS)
    # condition 2: both k-boundaries of the union are molecules
    for subset in (bdm, bdp):
        if reconstruct(w.restrict(subset), cap=reconstruct_cap) is None:
            return None
    # condition 3
    if not (u.boundary_set(k, MINUS) <= bdm and v.boundary_set(k, PLUS) <= bdp):
        return None

    def stage(base: frozenset, piece_bd: frozenset, target_sign: str, piece: frozenset):
        """One pasting stage: glue piece onto base along piece_bd, which must
        land in the target_sign k-boundary of base."""
        base_poset = w.restrict(base)
        if not piece_bd <= base_poset.boundary_set(k, target_sign):
            raise RecognitionFailed(
                "generalised pasting factorisation stage failed",
                {
                    "level": k,
                    "stage_boundary": sorted(map(sid, piece_bd)),
                    "target": sorted(map(sid, base_poset.boundary_set(k, target_sign))),
                },
            )
        return base | piece

    # (bd_k- W subcp U) subcp V
    g1 = stage(bdm, u.boundary_set(k, MINUS), PLUS, left)
    g2 = stage(g1, v.boundary_set(k, MINUS), PLUS, right)
    # U cpsub (V cpsub bd_k+ W)
    h1 = stage(bdp, v.boundary_set(k, PLUS), MINUS, right)
    h2 = stage(h1, u.boundary_set(k, PLUS), MINUS, left)
    if g2 != frozenset(w.dim_of) or h2 != frozenset(w.dim_of):
        raise RecognitionFailed("factorisation does not cover the ambient", {})
    if len(all_isos(w, w)) != 1:
        raise RecognitionFailed("ambient is not rigid", {})
    return GeneralisedPasting(ambient, left, right, k, checked=True)


# -- bounded decomposition search --------------------------------------------


def _peel_candidates(p: OgPoset, carrier: frozenset, protected: frozenset):
    """Pasting peels of one maximal element's closure off a carrier subset.

    Yields dicts describing carrier = rest (subcp / cpsub) cl{top} at level
    dim(top) - 1, with the set-level pasting preconditions checked.
    """
    sub = p.restrict(carrier)
    out = []
    for top in sorted(sub.maximal_elements(), key=lambda x: (-p.dim_of[x], sid(x))):
        d = p.dim_of[top]
        if d < 1 or top in protected:
            continue
        piece = p.closure({top})
        piece_poset = p.restrict(piece)
        k = d - 1
        for side, keep_sign, attach_sign in (("right", MINUS, PLUS), ("left", PLUS, MINUS)):
            shared = piece_poset.boundary_set(k, keep_sign)
            removed = piece - shared
            if removed & protected:
                continue
            rest = carrier - removed
            if not rest:
                continue
            rest_sub = p.restrict(rest) if p.is_closed(rest) else None
            if rest_sub is None:
                continue
            target_bd = rest_sub.boundary_set(k, attach_sign)
            if not shared <= target_bd:
                continue
            if rest_sub.dim < k:
                continue
            out.append({
                "side": side,
                "k": k,
                "top": top,
                "piece": piece,
                "removed": removed,
                "shared": shared,
                "rest": rest,
            })
    return out


def find_derivation(p: OgPoset, carrier: frozenset, hole: frozenset,
                    allowed=None, max_states: int = 500_000):
    """Exhaustive peel search: decompose carrier onto hole by extended
    pastings of single atoms.

    allowed, when given, restricts the tops of pasted atoms (the shape-level
    A-context condition).  Returns the steps ordered from the hole outward,
    or None.  Complete at the sizes this package targets: all peel orders
    are explored with memoisation on the remaining carrier.
    """
    hole = frozenset(hole)
    failed = set()
    states = 0

    def dfs(current: frozenset):
        nonlocal states
        if current == hole:
            return []
        if current in failed:
            return None
        states += 1
        if states > max_states:
            raise BoundExceeded("derivation search exceeded its state budget")
        for cand in _peel_candidates(p, current, hole):
            if allowed is not None and cand["top"] not in allowed:
                continue
            inner = dfs(cand["rest"])
            if inner is not None:
                return inner + [cand]
        failed.add(current)
        return None

    return dfs(frozenset(carrier))


def replay_derivation(p: OgPoset, hole: frozenset, steps, expect: frozenset) -> bool:
    """Re-evaluate a derivation from the hole outward and check it lands on
    the expected carrier, re-validating every pasting precondition."""
    carrier = frozenset(hole)
    for step in steps:
        rest_sub = p.restrict(carrier)
        attach_sign = PLUS if step["side"] == "right" else MINUS
        if not step["shared"] <= rest_sub.boundary_set(step["k"], attach_sign):
            return False
        if step["removed"] & carrier:
            return False
        carrier |= step["piece"]
        if not p.is_closed(carrier):
            return False
    return carrier == frozenset(expect)


def reconstruct(p: OgPoset, cap: int = 120, _memo=None) -> Molecule | None:
    """Bounded certifier: rebuild a paste/atom certificate for a poset.

    Returns a Molecule carrying p itself (ids preserved) on success, None
    if no decomposition is found within the search.  Only used on instances
    the theory guarantees to be molecules; a None on such an instance is a
    harness failure.
    """
    if len(p) > cap:
        raise BoundExceeded(f"reconstruct called on {len(p)} elements (cap {cap})")
    if _memo is None:
        _memo = {}
    key = frozenset(p.dim_of)

    def rec(carrier: frozenset):
        ck = frozenset(carrier)
        if ck in _memo:
            return _memo[ck]
        sub = p.restrict(carrier)
        result = None
        if len(sub) == 1 and sub.dim == 0:
            result = {"kind": "point"}
        elif len(sub) > 0:
            maxima = sub.maximal_elements()
            if len(maxima) == 1:
                n = sub.dim
                minus = sub.boundary_set(n - 1, MINUS)
                plus = sub.boundary_set(n - 1, PLUS)
                cm = rec(minus)
                cp = rec(plus)
                if cm is not None and cp is not None:
                    try:
                        built = atom(
                            Molecule(p.restrict(minus), cm),
                            Molecule(p.restrict(plus), cp),
                        )
                    except Exception:
                        built = None
                    if built is not None and find_iso(built.poset, sub) is not None:
                        result = {"kind": "atom", "left": cm, "right": cp}
            else:
                for cand in _peel_candidates(p, carrier, frozenset()):
                    inner = rec(cand["rest"])
                    if inner is None:
                        continue
                    piece_cert = rec(cand["piece"])
                    if piece_cert is None:
                        continue
                    result = {
                        "kind": "paste_at",
                        "side": cand["side"],
                        "k": cand["k"],
                        "base": inner,
                        "piece": piece_cert,
                        "shared": sorted(map(sid, cand["shared"])),
                    }
                    break
        _memo[ck] = result
        return result

    cert = rec(key)
    if cert is None:
        return None
    return Molecule(p, cert)
