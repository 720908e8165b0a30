import itertools
from fractions import Fraction

import pytest

import oracles
from typigraph.core import Alphabet, InvariantViolation, JointPmf
from typigraph.graph import (
    CapExceeded,
    GraphSpec,
    ImplicitTypicalityGraph,
    TypicalityGraph,
    build_graph,
    check_degree_bound,
    degree,
    edge_list,
    export_graph,
    import_graph,
    stats,
)
from typigraph.typicality import TypicalityParams, default_params, is_jointly_typical

BIN = Alphabet((0, 1))


def explicit(joint, n, params=None, cap=1 << 24):
    return build_graph(
        GraphSpec(joint, n, params or default_params(n), mode="explicit", cap=cap)
    )


def test_binary_example_n4(binary_joint):
    g = explicit(binary_joint, 4)
    assert g.vertex_counts() == (14, 14)
    assert g.edge_count.value == 78
    # rosters in lexicographic order
    assert [s.symbols for s in g.left] == sorted(s.symbols for s in g.left)


def test_edges_match_brute_force(binary_joint):
    for n in (3, 4, 5):
        params = default_params(n)
        g = explicit(binary_joint, n)
        l, r, e = oracles.brute_pair_count(
            binary_joint.probs, params.eps1, params.eps2, params.lam, n
        )
        assert g.vertex_counts() == (l, r)
        assert g.edge_count.value == e


def test_adjacency_matches_predicate(binary_joint):
    n = 5
    g = explicit(binary_joint, n)
    lam = g.spec.params.lam
    for i, x in enumerate(g.left):
        nbrs = {
            j
            for j, y in enumerate(g.right)
            if is_jointly_typical(x, y, binary_joint, lam)
        }
        assert set(g.adjacency[i]) == nbrs


def test_implicit_agrees_with_explicit(binary_joint):
    for n in (4, 6):
        params = default_params(n)
        ge = explicit(binary_joint, n)
        gi = build_graph(GraphSpec(binary_joint, n, params, mode="implicit"))
        assert isinstance(gi, ImplicitTypicalityGraph)
        assert gi.vertex_counts() == ge.vertex_counts()
        assert gi.edge_count.value == ge.edge_count.value
        # per-vertex degrees through exact counting
        for i in (0, len(ge.left) // 2, len(ge.left) - 1):
            assert gi.degree_of(ge.left[i], "left").value == len(ge.adjacency[i])
        rd = ge.right_degrees()
        for j in (0, len(ge.right) - 1):
            assert gi.degree_of(ge.right[j], "right").value == rd[j]


def test_degree_views(binary_joint):
    g = explicit(binary_joint, 4)
    assert degree(g, "left", 0).value == len(g.adjacency[0])
    rd = g.right_degrees()
    assert degree(g, "right", 3).value == rd[3]
    assert sum(g.left_degrees()) == g.edge_count.value == sum(rd)
    with pytest.raises(ValueError):
        g.degree("middle", 0)


def test_cap_exceeded(binary_joint):
    with pytest.raises(CapExceeded):
        explicit(binary_joint, 30, cap=1000)
    # implicit mode ignores the candidate cap
    gi = build_graph(
        GraphSpec(binary_joint, 30, default_params(30), mode="implicit", cap=1000)
    )
    assert gi.left_count.value > 1000


def test_spec_validation(binary_joint):
    with pytest.raises(ValueError):
        GraphSpec(binary_joint, 0, default_params(4))
    with pytest.raises(ValueError):
        GraphSpec(binary_joint, 4, default_params(4), mode="lazy")
    with pytest.raises(ValueError):
        GraphSpec(binary_joint, 4, default_params(4), cap=0)


def test_stats_and_isolated(binary_joint):
    g = explicit(binary_joint, 6)
    st = stats(g)
    assert st.left_size.value == len(g.left)
    assert st.isolated_left == sum(1 for d in g.left_degrees() if d == 0)
    assert st.left_degree_log2_max >= st.left_degree_log2_min
    assert st.edge_count.value == g.edge_count.value


def test_isolated_vertices_survive():
    # lopsided joint at tight slack: some typical x have no jointly typical y
    j = JointPmf(
        BIN,
        BIN,
        ((Fraction(49, 100), Fraction(1, 100)), (Fraction(1, 100), Fraction(49, 100))),
    )
    params = TypicalityParams(
        eps1=Fraction(1, 2), eps2=Fraction(1, 2), lam=Fraction(1, 100)
    )
    g = build_graph(GraphSpec(j, 4, params))
    st = stats(g)
    assert st.isolated_left > 0  # retained in the roster, not dropped
    assert st.left_size.value == 16


def test_check_degree_bound_passes(binary_joint):
    for n in (4, 6, 8):
        g = explicit(binary_joint, n)
        rep = check_degree_bound(g)
        assert rep.all_ok
        assert rep.violations == ()
        assert rep.worst_slack_bits_per_symbol >= -1e-12


def test_edge_list_order(binary_joint):
    g = explicit(binary_joint, 4)
    edges = list(edge_list(g))
    assert edges == sorted(edges)
    assert len(edges) == g.edge_count.value


def test_export_import_roundtrip(binary_joint, tmp_path):
    g = explicit(binary_joint, 4)
    jpath = tmp_path / "g.json"
    cpath = tmp_path / "g.csv"
    export_graph(g, str(jpath), str(cpath))

    g2 = import_graph(str(jpath), str(cpath))
    assert g2.adjacency == g.adjacency
    assert [s.symbols for s in g2.left] == [s.symbols for s in g.left]

    # rebuild-from-spec path (no CSV)
    g3 = import_graph(str(jpath))
    assert g3.adjacency == g.adjacency

    # byte-identical re-export
    blob = jpath.read_bytes()
    export_graph(g2, str(jpath), str(cpath))
    assert jpath.read_bytes() == blob


def test_import_rejects_tampered_header(binary_joint, tmp_path):
    import json

    g = explicit(binary_joint, 4)
    jpath = tmp_path / "g.json"
    export_graph(g, str(jpath))
    doc = json.loads(jpath.read_text())
    doc["left_size"] = 13
    jpath.write_text(json.dumps(doc))
    with pytest.raises(InvariantViolation):
        import_graph(str(jpath))

    doc["schema"] = "typigraph.graph/0"
    jpath.write_text(json.dumps(doc))
    with pytest.raises(ValueError, match="schema"):
        import_graph(str(jpath))
