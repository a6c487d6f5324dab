"""Graph building, pruning, and degree measures."""

import random
import statistics

import pytest

from letternet.extraction import PairRecord, RelationKind
from letternet.network import (
    Centrality,
    GraphBuildError,
    LexicalGraph,
    MeanSd,
    Threshold,
    build_graph,
    centrality,
    merge_graphs,
    parse_prune_rule,
    prune,
    token_frequencies,
)
from letternet.pipeline import PosClass

from conftest import mk_doc, N, V

S = RelationKind.SUBJ
O = RelationKind.OBJ
C = RelationKind.COOCCUR


def rec(src, dst, kind, letter="L1", sent=0):
    return PairRecord(src[0], src[1], dst[0], dst[1], kind, letter, sent)


FREQS = {
    ("man", N): 4,
    ("see", V): 3,
    ("truth", N): 2,
    ("god", N): 7,
}


# building


def test_token_frequencies_counts_all_tokens():
    doc = mk_doc([("man", N), ("see", V), ("man", N)])
    freqs = token_frequencies([doc])
    assert freqs[("man", N)] == 2
    assert freqs[("see", V)] == 1


def test_build_graph_accumulates_weights():
    records = [
        rec(("man", N), ("see", V), S),
        rec(("man", N), ("see", V), S),
        rec(("see", V), ("truth", N), O),
    ]
    g = build_graph(records, FREQS)
    assert g.nodes == {("man", N): 4, ("see", V): 3, ("truth", N): 2}
    assert g.edges[(("man", N), ("see", V), S)] == 2
    assert g.edges[(("see", V), ("truth", N), O)] == 1
    assert g.total_weight == 3
    g.validate()


def test_build_graph_only_endpoint_nodes():
    g = build_graph([rec(("man", N), ("see", V), S)], FREQS)
    assert ("god", N) not in g.nodes


def test_build_graph_missing_frequency():
    with pytest.raises(GraphBuildError, match="ghost"):
        build_graph([rec(("ghost", N), ("see", V), S)], FREQS)


def test_merge_graphs_sums():
    g1 = build_graph([rec(("man", N), ("see", V), S)], FREQS)
    g2 = build_graph([rec(("man", N), ("see", V), S)], {("man", N): 1, ("see", V): 1})
    merged = merge_graphs([g1, g2])
    assert merged.nodes[("man", N)] == 5
    assert merged.edges[(("man", N), ("see", V), S)] == 2
    assert merge_graphs([]).n_nodes == 0


def test_validate_rejects_bad_graphs():
    g = LexicalGraph(nodes={("a", N): 1}, edges={})
    g.validate()
    bad_weight = LexicalGraph(
        nodes={("a", N): 1}, edges={(("a", N), ("a", N), C): 0}
    )
    with pytest.raises(ValueError, match="weight"):
        bad_weight.validate()
    loose_end = LexicalGraph(
        nodes={("a", N): 1}, edges={(("a", N), ("b", N), C): 1}
    )
    with pytest.raises(ValueError, match="endpoint"):
        loose_end.validate()
    backwards = LexicalGraph(
        nodes={("a", N): 1, ("b", N): 1},
        edges={(("b", N), ("a", N), C): 1},
    )
    with pytest.raises(ValueError, match="canonical"):
        backwards.validate()


# prune rules


def test_threshold_cutoff_ignores_values():
    assert Threshold(3).cutoff([1, 100]) == 3.0
    assert Threshold(0).cutoff([]) == 0.0


def test_meansd_cutoff_matches_statistics_module():
    values = [10, 2, 2, 2]
    expected = statistics.mean(values) + 1.0 * statistics.pstdev(values)
    assert MeanSd(1.0).cutoff(values) == pytest.approx(expected)
    assert MeanSd(2.0).cutoff([]) == 0.0


def test_parse_prune_rule():
    assert parse_prune_rule("gt3") == Threshold(3)
    assert parse_prune_rule("mean2") == MeanSd(2.0)
    assert parse_prune_rule("mean1.5") == MeanSd(1.5)
    for bad in ("gt-1", "gt", "meanx", "median2", ""):
        with pytest.raises(ValueError):
            parse_prune_rule(bad)


def test_rule_describe():
    assert "3" in Threshold(3).describe()
    assert "sd" in MeanSd(2.0).describe()


# pruning semantics


def graph_abc():
    nodes = {("a", N): 5, ("b", N): 2, ("c", N): 1}
    edges = {
        (("a", N), ("b", N), C): 3,
        (("a", N), ("c", N), C): 5,
    }
    return LexicalGraph(nodes=nodes, edges=edges)


def test_prune_threshold_drops_nodes_and_orphan_edges():
    g = prune(graph_abc(), Threshold(1), Threshold(2))
    assert set(g.nodes) == {("a", N), ("b", N)}
    assert set(g.edges) == {(("a", N), ("b", N), C)}
    g.validate()


def test_prune_cutoff_is_strict():
    g = prune(graph_abc(), Threshold(5), Threshold(0))
    assert g.nodes == {}


def test_prune_drop_isolated_toggle():
    g = prune(graph_abc(), Threshold(0), Threshold(4))
    # only the a-c edge survives, so b is isolated and dropped
    assert set(g.nodes) == {("a", N), ("c", N)}
    kept = prune(graph_abc(), Threshold(0), Threshold(4), drop_isolated=False)
    assert set(kept.nodes) == {("a", N), ("b", N), ("c", N)}


def test_prune_empty_graph():
    empty = LexicalGraph()
    assert prune(empty, MeanSd(2.0), MeanSd(2.0)).n_nodes == 0


def test_prune_does_not_mutate_input():
    g = graph_abc()
    prune(g, Threshold(1), Threshold(2))
    assert g.n_nodes == 3 and g.n_edges == 2


# brute-force oracle over random graphs


def random_graph(rng, max_nodes=50):
    lemmas = [f"w{i}" for i in range(rng.randint(1, max_nodes))]
    classes = [N, V, PosClass.ADJ]
    nodes = {}
    for lemma in lemmas:
        nodes[(lemma, rng.choice(classes))] = rng.randint(1, 20)
    keys = list(nodes)
    edges = {}
    for _ in range(rng.randint(0, 3 * len(keys))):
        a, b = rng.choice(keys), rng.choice(keys)
        kind = rng.choice([S, O, C])
        if kind is C:
            a, b = sorted((a, b), key=lambda k: (k[0], k[1].name))
        edges[(a, b, kind)] = rng.randint(1, 15)
    return LexicalGraph(nodes=nodes, edges=edges)


def oracle_prune(graph, node_rule, edge_rule, drop_isolated=True):
    def cut(rule, values):
        if isinstance(rule, Threshold):
            return float(rule.minimum)
        if not values:
            return 0.0
        return statistics.mean(values) + rule.k * statistics.pstdev(values)

    node_cut = cut(node_rule, list(graph.nodes.values()))
    edge_cut = cut(edge_rule, list(graph.edges.values()))
    nodes = {k: f for k, f in graph.nodes.items() if f > node_cut}
    edges = {
        (a, b, kind): w
        for (a, b, kind), w in graph.edges.items()
        if w > edge_cut and a in nodes and b in nodes
    }
    if drop_isolated:
        touched = {n for a, b, _ in edges for n in (a, b)}
        nodes = {k: f for k, f in nodes.items() if k in touched}
    return nodes, edges


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_prune_matches_oracle_on_random_graphs(seed):
    rng = random.Random(seed)
    rules = [Threshold(0), Threshold(3), Threshold(10), MeanSd(0.0), MeanSd(1.0), MeanSd(2.0)]
    for _ in range(40):
        g = random_graph(rng)
        node_rule = rng.choice(rules)
        edge_rule = rng.choice(rules)
        drop = rng.random() < 0.5
        got = prune(g, node_rule, edge_rule, drop_isolated=drop)
        nodes, edges = oracle_prune(g, node_rule, edge_rule, drop_isolated=drop)
        assert got.nodes == nodes
        assert got.edges == edges
        got.validate()
        # subgraph property
        assert set(got.nodes) <= set(g.nodes)
        assert set(got.edges) <= set(g.edges)


def test_prune_monotone_in_threshold():
    rng = random.Random(99)
    for _ in range(20):
        g = random_graph(rng, max_nodes=20)
        low = prune(g, Threshold(2), Threshold(2))
        high = prune(g, Threshold(5), Threshold(5))
        assert set(high.nodes) <= set(low.nodes)
        assert set(high.edges) <= set(low.edges)


# centrality


def test_degree_counts_all_kinds(toy_graph):
    ranks = dict(centrality(toy_graph, Centrality.DEGREE))
    # god: cooccur edge + self loop twice = 3; truth: cooccur + obj = 2
    assert ranks[("god", N)] == 3
    assert ranks[("truth", N)] == 2
    assert ranks[("see", V)] == 2
    assert ranks[("man", N)] == 1


def test_in_out_degree_directed_only(toy_graph):
    ins = dict(centrality(toy_graph, Centrality.IN_DEGREE))
    outs = dict(centrality(toy_graph, Centrality.OUT_DEGREE))
    assert ins[("truth", N)] == 1  # see -> truth
    assert ins[("see", V)] == 1  # man -> see
    assert ins[("god", N)] == 0  # cooccur does not count
    assert outs[("see", V)] == 1
    assert outs[("man", N)] == 1
    assert outs[("truth", N)] == 0


def test_weighted_degree_sums_to_twice_total_weight(toy_graph):
    ranks = centrality(toy_graph, Centrality.WEIGHTED_DEGREE)
    assert sum(score for _, score in ranks) == 2 * toy_graph.total_weight


def test_weighted_degree_random_identity():
    rng = random.Random(7)
    for _ in range(25):
        g = random_graph(rng, max_nodes=15)
        ranks = centrality(g, Centrality.WEIGHTED_DEGREE)
        assert sum(s for _, s in ranks) == 2 * g.total_weight


def test_centrality_tie_break_is_lexicographic():
    g = LexicalGraph(
        nodes={("b", N): 1, ("a", N): 1, ("a", V): 1},
        edges={},
    )
    ranks = centrality(g, Centrality.DEGREE)
    assert [k for k, _ in ranks] == [("a", N), ("a", V), ("b", N)]
