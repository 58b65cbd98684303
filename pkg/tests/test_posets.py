import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orderlevel import (
    BOTTOM,
    TOP,
    CycleDetected,
    IdentifierCollision,
    NotComparable,
    PosetStats,
    RedundantCover,
    UnknownElement,
    add_bounds,
    antichain,
    chain,
    disjoint_union,
    from_covers,
    ordinal_sum,
    poset_from_json,
    poset_to_json,
)
from orderlevel.catalog import all_posets, random_poset


def test_basic_queries():
    p = from_covers(["a", "b", "c", "d"], [("a", "b"), ("a", "c"), ("b", "d")])
    assert len(p) == 4
    assert p.leq("a", "d") and p.less("a", "d")
    assert p.leq("a", "a") and not p.less("a", "a")
    assert not p.leq("c", "d") and not p.leq("d", "c")
    assert p.upper_covers("a") == ("b", "c")
    assert p.lower_covers("d") == ("b",)
    assert p.minimal_elements() == ("a",)
    assert set(p.maximal_elements()) == {"c", "d"}


def test_topological_order_respects_covers():
    p = from_covers(["x", "y", "z"], [("z", "y"), ("y", "x")])
    order = p.topological_order()
    assert order.index("z") < order.index("y") < order.index("x")


def test_validation_errors():
    with pytest.raises(UnknownElement):
        from_covers(["a"], [("a", "b")])
    with pytest.raises(IdentifierCollision):
        from_covers(["a", "a"], [])
    with pytest.raises(IdentifierCollision):
        from_covers(["a", BOTTOM], [])
    with pytest.raises(CycleDetected):
        from_covers(["a", "b"], [("a", "b"), ("b", "a")])
    with pytest.raises(CycleDetected):
        from_covers(["a"], [("a", "a")])
    with pytest.raises(RedundantCover):
        from_covers(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")])
    with pytest.raises(RedundantCover):
        from_covers(["a", "b"], [("a", "b"), ("a", "b")])
    with pytest.raises(UnknownElement):
        from_covers([""], [])


def test_rank_interval():
    c4 = chain(4)
    assert c4.rank_interval("1", "4") == 3
    assert c4.rank_interval("2", "2") == 0
    with pytest.raises(NotComparable):
        c4.rank_interval("4", "1")
    p = from_covers(["a", "b", "c"], [("a", "b"), ("b", "c"), ])
    assert p.rank_interval("a", "c") == 2


def test_filters_and_antichains_biject():
    # filters of a finite poset correspond to antichains (minimal elements)
    for p in [chain(3), antichain(3), from_covers("abcd", [("a", "c"), ("b", "c")])]:
        filters = p.filters()
        antichains = p.antichains()
        assert len(filters) == len(antichains)
        mins = {
            frozenset(
                e
                for e in f
                if not any(x in f and p.less(x, e) for x in p.elements)
            )
            for f, _ in filters
        }
        assert mins == {a for a, _ in antichains}


def test_filter_indicators_are_monotone():
    p = from_covers("abcd", [("a", "b"), ("b", "c"), ("a", "d")])
    for f, ind in p.filters():
        by_elem = dict(zip(p.elements, ind))
        for u, v in p.covers:
            assert by_elem[u] <= by_elem[v]
        assert {e for e, bit in by_elem.items() if bit} == set(f)


def test_chain_antichain_counts():
    assert len(chain(4).filters()) == 5
    assert len(antichain(3).filters()) == 8
    assert len(chain(4).antichains()) == 5
    assert len(antichain(3).antichains()) == 8


def test_ordinal_sum_structure():
    s = ordinal_sum(antichain(2), chain(2), rename_on_collision=True)
    assert len(s) == 4
    # every element of the first part is below every element of the second
    renamed = [e for e in s.elements if "~" in e]
    assert len(renamed) == 2
    for a in ("1", "2"):
        for b in renamed:
            assert s.less(a, b)


def test_ordinal_sum_collision_rejected():
    with pytest.raises(IdentifierCollision):
        ordinal_sum(chain(2), chain(3))


def test_disjoint_union():
    u = disjoint_union(chain(2), antichain(2), rename_on_collision=True)
    assert len(u) == 4
    comps = u.connected_components()
    assert sorted(len(c) for c in comps) == [1, 1, 2]
    with pytest.raises(IdentifierCollision):
        disjoint_union(chain(2), chain(2))


def test_connected_components_roundtrip():
    p = from_covers(["a", "b", "c", "d"], [("a", "b"), ("c", "d")])
    comps = p.connected_components()
    assert {frozenset(c.elements) for c in comps} == {
        frozenset("ab"),
        frozenset("cd"),
    }
    for c in comps:
        for u, v in c.covers:
            assert p.leq(u, v)


def test_add_bounds():
    p = from_covers(["a", "b"], [("a", "b")])
    b = add_bounds(p)
    assert b.elements[0] == BOTTOM and b.elements[-1] == TOP
    assert b.rank() == 3
    assert b.height("a") == 1 and b.depth("a") == 2
    assert b.height(BOTTOM) == 0 and b.depth(BOTTOM) == b.rank()
    assert add_bounds(b) is b
    assert b.base is p


def test_add_bounds_empty_poset():
    b = add_bounds(from_covers([], []))
    assert b.covers == ((BOTTOM, TOP),)
    assert b.rank() == 1


def test_longest_chain_edges():
    # element d reaches c by a shorter route than the a-b-c spine
    p = from_covers(["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("d", "c")])
    b = add_bounds(p)
    long_edges = set(b.longest_chain_edges())
    assert ((BOTTOM, "a") in long_edges and ("c", TOP) in long_edges)
    assert (BOTTOM, "d") not in long_edges
    for u, v in long_edges:
        assert b.height(u) + 1 + b.depth(v) == b.rank()


def test_leq_matrix_readonly():
    p = chain(3)
    m = p.leq_matrix()
    assert m.dtype == bool and m[0, 2]
    with pytest.raises(ValueError):
        m[0, 0] = False


def test_strict_pairs():
    p = chain(3)
    assert set(p.strict_pairs()) == {("1", "2"), ("1", "3"), ("2", "3")}


def test_json_roundtrip():
    p = from_covers(["a", "b", "c"], [("a", "b"), ("a", "c")])
    doc = poset_to_json(p)
    q = poset_from_json(doc)
    assert q == p
    with pytest.raises(UnknownElement):
        poset_from_json({"elements": ["a"]})


def test_poset_stats():
    s = PosetStats.of(chain(3))
    assert (s.size, s.cover_count, s.rank) == (3, 2, 4)


def test_equality_and_hash():
    assert chain(3) == chain(3)
    assert hash(chain(3)) == hash(chain(3))
    assert chain(3) != antichain(3)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 4000), st.integers(2, 7))
def test_random_poset_is_valid(seed, size):
    p = random_poset(size, seed)
    leq = p.leq_matrix()
    n = len(p)
    # transitivity and antisymmetry
    for i in range(n):
        assert leq[i, i]
        for j in range(n):
            if i != j and leq[i, j]:
                assert not leq[j, i]
                for k in range(n):
                    if leq[j, k]:
                        assert leq[i, k]
    # declared covers are exactly the transitive reduction
    for a in p.elements:
        for b in p.elements:
            is_cover = p.less(a, b) and not any(
                p.less(a, w) and p.less(w, b) for w in p.elements
            )
            assert ((a, b) in p.covers) == is_cover


def test_all_posets_small_counts():
    assert sum(1 for _ in all_posets(0)) == 1
    assert sum(1 for _ in all_posets(3)) == 7
    seen = {p.covers for p in all_posets(4)}
    assert len(seen) == 40
