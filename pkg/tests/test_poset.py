"""Poset storage, validation, order queries, duals, and iso search."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ogpkit.errors import BadGrading, DanglingFace, EmptySide, Overlap, UnknownElement
from ogpkit.poset import MINUS, PLUS, all_isos, build, find_iso


def the_arrow():
    return build({"0-": 0, "0+": 0, "1": 1}, {"1": ({"0-"}, {"0+"})})


def brute_force_isos(p, q):
    """Oracle: enumerate every dimension-preserving bijection and filter."""
    if len(p) != len(q):
        return []
    dims = sorted({d for d in p.dim_of.values()} | {d for d in q.dim_of.values()})
    per_dim = []
    for d in dims:
        xs = sorted(p.grade(d), key=str)
        ys = sorted(q.grade(d), key=str)
        if len(xs) != len(ys):
            return []
        per_dim.append((xs, ys))
    found = []
    pools = [itertools.permutations(ys) for _, ys in per_dim]
    for combo in itertools.product(*pools):
        mapping = {}
        for (xs, _), perm in zip(per_dim, combo):
            mapping.update(zip(xs, perm))
        ok = True
        for x in p.dim_of:
            for s in (MINUS, PLUS):
                if {mapping[f] for f in p.faces(x, s)} != set(q.faces(mapping[x], s)):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            found.append(mapping)
    return found


class TestBuild:
    def test_arrow_is_valid(self):
        p = the_arrow()
        assert len(p) == 3
        assert p.dim == 1
        assert p.faces("1", MINUS) == {"0-"}
        assert p.faces("1", PLUS) == {"0+"}

    def test_point(self):
        p = build({"x": 0}, {})
        assert p.dim == 0
        assert p.maximal_elements() == {"x"}

    def test_empty_input_side_rejected(self):
        with pytest.raises(EmptySide):
            build({"a": 0, "e": 1}, {"e": (set(), {"a"})})

    def test_missing_faces_rejected(self):
        with pytest.raises(EmptySide):
            build({"a": 0, "e": 1}, {})

    def test_dangling_face(self):
        with pytest.raises(DanglingFace):
            build({"a": 0, "e": 1}, {"e": ({"a"}, {"ghost"})})

    def test_bad_grading(self):
        with pytest.raises(BadGrading):
            build({"a": 0, "b": 0, "e": 2}, {"e": ({"a"}, {"b"})})

    def test_overlap(self):
        with pytest.raises(Overlap):
            build({"a": 0, "e": 1}, {"e": ({"a"}, {"a"})})


class TestQueries:
    def test_closure_of_top(self):
        p = the_arrow()
        assert p.closure({"1"}) == {"1", "0-", "0+"}

    def test_closure_of_minimal(self):
        assert the_arrow().closure({"0-"}) == {"0-"}

    def test_closure_unknown(self):
        with pytest.raises(UnknownElement):
            the_arrow().closure({"nope"})

    def test_cofaces(self):
        p = the_arrow()
        assert p.cofaces("0-", MINUS) == {"1"}
        assert p.cofaces("0-", PLUS) == frozenset()

    def test_maximal(self):
        assert the_arrow().maximal_elements() == {"1"}

    def test_face_closure_invariant(self):
        # closure({x}) minus {x} is the union of the face closures
        p = the_arrow()
        for x in p.dim_of:
            if p.dim_of[x] > 0:
                assert p.closure({x}) - {x} == p.closure(p.all_faces(x))


class TestBoundary:
    def test_arrow_boundaries(self):
        p = the_arrow()
        assert p.boundary_set(0, MINUS) == {"0-"}
        assert p.boundary_set(0, PLUS) == {"0+"}

    def test_saturation(self):
        p = the_arrow()
        assert p.boundary_set(1, MINUS) == frozenset(p.dim_of)
        assert p.boundary_set(5, PLUS) == frozenset(p.dim_of)

    def test_negative_is_empty(self):
        assert the_arrow().boundary_set(-1, MINUS) == frozenset()


class TestDual:
    def test_op_arrow(self):
        p = the_arrow().op()
        assert p.faces("1", MINUS) == {"0+"}
        assert p.faces("1", PLUS) == {"0-"}

    def test_empty_dual_is_identity(self):
        p = the_arrow()
        assert p.dual(()) == p

    def test_involution(self):
        p = the_arrow()
        assert p.dual({1}).dual({1}) == p


class TestIso:
    def test_arrow_to_op_arrow(self):
        p = the_arrow()
        iso = find_iso(p, p.op())
        assert iso is not None
        assert iso.mapping == {"0-": "0+", "0+": "0-", "1": "1"}

    def test_profile_mismatch(self):
        p = the_arrow()
        q = build({"x": 0}, {})
        assert find_iso(p, q) is None

    def test_symmetry_and_inverse(self):
        p = the_arrow()
        fwd = find_iso(p, p.op())
        back = find_iso(p.op(), p)
        assert back is not None
        assert back.mapping == fwd.inverse().mapping

    def test_agrees_with_brute_force(self):
        p = the_arrow()
        for q in (p, p.op()):
            ours = {tuple(sorted(i.mapping.items())) for i in all_isos(p, q)}
            oracle = {tuple(sorted(m.items())) for m in brute_force_isos(p, q)}
            assert ours == oracle


# -- randomised properties ---------------------------------------------------


@st.composite
def small_posets(draw):
    """Random layered posets with up to three dimensions, honoring the
    invariants (nonempty disjoint face sides one dimension below)."""
    n0 = draw(st.integers(min_value=1, max_value=4))
    elements = {f"p{i}": 0 for i in range(n0)}
    faces = {}
    prev = list(elements)
    for dim in (1, 2):
        count = draw(st.integers(min_value=0, max_value=3))
        layer = []
        for i in range(count):
            if len(prev) < 2:
                break
            lo = draw(st.sampled_from(prev))
            hi = draw(st.sampled_from([x for x in prev if x != lo]))
            extra = draw(st.sets(st.sampled_from(prev), max_size=2))
            name = f"c{dim}_{i}"
            fin = {lo} | {e for e in extra if e != hi}
            fout = {hi}
            elements[name] = dim
            faces[name] = (fin, fout)
            layer.append(name)
        if not layer:
            break
        prev = layer
    return build(elements, faces)


@given(small_posets())
@settings(max_examples=60, deadline=None)
def test_dual_involution_random(p):
    for dims in ({1}, {2}, {1, 2}):
        assert p.dual(dims).dual(dims) == p


@given(small_posets())
@settings(max_examples=60, deadline=None)
def test_closure_idempotent_random(p):
    xs = sorted(p.dim_of, key=str)[: max(1, len(p) // 2)]
    c = p.closure(xs)
    assert p.closure(c) == c
    assert p.is_closed(c)


@given(small_posets())
@settings(max_examples=40, deadline=None)
def test_iso_search_matches_brute_force_random(p):
    q = p.op()
    ours = {tuple(sorted((str(k), str(v)) for k, v in i.mapping.items()))
            for i in all_isos(p, q)}
    oracle = {tuple(sorted((str(k), str(v)) for k, v in m.items()))
              for m in brute_force_isos(p, q)}
    assert ours == oracle
