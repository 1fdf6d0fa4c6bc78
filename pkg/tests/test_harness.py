"""Catalog enumeration and harness plumbing."""

import json

import pytest

from ogpkit.errors import UnknownLemma
from ogpkit.harness import (
    Bounds,
    SuiteConfig,
    brute_force_isos,
    check,
    check_gray_boundary_sides,
    enumerate_catalog,
    mutate_one_face,
    run_suite,
)
from ogpkit.exprlang import eval_text
from ogpkit.gray import gray_poset
from ogpkit.molecule import arrow, globe, paste
from ogpkit.poset import SIGNS, all_isos, find_iso


def small_config(**kw):
    defaults = dict(bounds=Bounds(depth=1, max_dim=2, max_elements=9),
                    lemmas=("ISO_UNIQUE",))
    defaults.update(kw)
    return SuiteConfig(**defaults)


class TestCatalog:
    def test_depth_zero(self):
        cat = enumerate_catalog(Bounds(depth=0, max_dim=0, max_elements=9))
        assert [e.expr for e in cat.entries] == ["point"]

    def test_depth_one_contains_basics(self):
        cat = enumerate_catalog(Bounds(depth=1, max_dim=2, max_elements=9))
        for expr in ("paste(arrow,arrow,0)", "gray(arrow,arrow)"):
            target = eval_text(expr)
            assert any(find_iso(e.molecule.poset, target.poset) for e in cat.entries), expr
        # the 2-globe is present up to isomorphism
        assert any(find_iso(e.molecule.poset, globe(2).poset) for e in cat.entries)

    def test_deduplication(self):
        cat = enumerate_catalog(Bounds(depth=1, max_dim=2, max_elements=9))
        mols = cat.molecules()
        for i, a in enumerate(mols):
            for b in mols[i + 1:]:
                assert find_iso(a.poset, b.poset) is None

    def test_deterministic(self):
        b = Bounds(depth=2, max_dim=3, max_elements=11)
        c1 = enumerate_catalog(b)
        c2 = enumerate_catalog(b)
        assert [e.expr for e in c1.entries] == [e.expr for e in c2.entries]

    def test_expressions_rebuild_entries(self):
        cat = enumerate_catalog(Bounds(depth=1, max_dim=2, max_elements=9))
        for e in cat.entries:
            assert eval_text(e.expr).poset == e.molecule.poset


class TestCheck:
    def test_unknown_lemma(self):
        cat = enumerate_catalog(Bounds(depth=0, max_dim=1, max_elements=3))
        with pytest.raises(UnknownLemma):
            check("NOPE", cat, small_config())

    def test_single_report(self):
        cat = enumerate_catalog(Bounds(depth=1, max_dim=2, max_elements=9))
        rep = check("ISO_UNIQUE", cat, small_config())
        assert rep.status == "pass"
        assert rep.instances > 0

    def test_empty_catalog_vacuous(self):
        reports = run_suite(small_config(
            bounds=Bounds(depth=0, max_dim=-1, max_elements=0)))
        assert all(r.status == "pass" for r in reports)
        assert all("vacuous" in r.warning for r in reports)

    def test_report_json_deterministic(self):
        cfg = small_config(lemmas=("ISO_UNIQUE", "OP_SWAP"))
        r1 = [r.to_dict() for r in run_suite(cfg)]
        r2 = [r.to_dict() for r in run_suite(cfg)]
        assert json.dumps(r1, sort_keys=True) == json.dumps(r2, sort_keys=True)

    def test_jobs_flag_gives_same_reports(self):
        cfg1 = small_config(lemmas=("ISO_UNIQUE", "OP_SWAP"))
        cfg2 = small_config(lemmas=("ISO_UNIQUE", "OP_SWAP"), jobs=2)
        r1 = [r.to_dict() for r in run_suite(cfg1)]
        r2 = [r.to_dict() for r in run_suite(cfg2)]
        assert r1 == r2


class TestMutation:
    def test_flip_detected(self):
        # a corrupted square must trip the boundary comparator somewhere
        u = v = arrow()
        product = gray_poset(u.poset, v.poset)
        mutated, info = mutate_one_face(product, seed=0)
        bad = []
        for n in range(3):
            for sign in SIGNS:
                direct, union = check_gray_boundary_sides(mutated, u, v, n, sign)
                if direct != union:
                    bad.append((n, sign))
        assert bad, info

    def test_mutation_report(self):
        cat = enumerate_catalog(Bounds(depth=0, max_dim=1, max_elements=3))
        rep = check("MUTATION", cat, small_config(seed=1))
        assert rep.status == "pass"

    def test_seed_changes_mutation(self):
        product = gray_poset(arrow().poset, arrow().poset)
        infos = {json.dumps(mutate_one_face(product, seed)[1], sort_keys=True)
                 for seed in range(8)}
        assert len(infos) > 1


class TestBruteForce:
    def test_matches_backtracking_on_catalog(self):
        cat = enumerate_catalog(Bounds(depth=1, max_dim=2, max_elements=9))
        for e in cat.entries:
            if len(e.molecule) > 9:
                continue
            ours = all_isos(e.molecule.poset, e.molecule.poset)
            oracle = brute_force_isos(e.molecule.poset, e.molecule.poset)
            assert len(ours) == len(oracle), e.expr


class TestGlobularity:
    def test_catalog_molecules_are_globular(self):
        from ogpkit.harness import globularity_holds

        cat = enumerate_catalog(Bounds(depth=1, max_dim=3, max_elements=11))
        for e in cat.entries:
            assert globularity_holds(e.molecule.poset), e.expr
