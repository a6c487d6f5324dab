"""Weighted lexical graphs built from extraction records.

Nodes are (lemma, word class) pairs weighted by corpus frequency;
edges carry a relation kind and the number of supporting record
instances.  SUBJ and OBJ edges are directed, co-occurrence edges are
not.  Graphs from single letters merge by summing weights, and two
pruning rule families (absolute threshold, mean plus k standard
deviations) cut them down to a readable core.
"""

from __future__ import annotations

import enum
import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from letternet.extraction import DIRECTED_KINDS, PairRecord, RelationKind
from letternet.pipeline import AnnotatedDoc, PosClass

log = logging.getLogger(__name__)

NodeKey = tuple[str, PosClass]
EdgeKey = tuple[NodeKey, NodeKey, RelationKind]


class GraphBuildError(ValueError):
    """Raised when records reference lemmas without frequency data."""


def _node_order(key: NodeKey) -> tuple[str, str]:
    return (key[0], key[1].name)


def kind_is_directed(kind: RelationKind) -> bool:
    return kind in DIRECTED_KINDS


@dataclass
class LexicalGraph:
    """A typed, weighted lexical network.

    ``nodes`` maps (lemma, class) to its frequency, ``edges`` maps
    (source, target, kind) to an integer weight.  COOCCUR edges are
    stored with endpoints in canonical order, so an undirected pair has
    exactly one entry.
    """

    nodes: dict[NodeKey, int] = field(default_factory=dict)
    edges: dict[EdgeKey, int] = field(default_factory=dict)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def total_weight(self) -> int:
        return sum(self.edges.values())

    def validate(self) -> None:
        """Check the structural invariants; raises ValueError on breach."""
        for key, freq in self.nodes.items():
            if not isinstance(freq, int) or freq < 1:
                raise ValueError(f"node {key}: frequency {freq!r} not a positive int")
        for (src, dst, kind), weight in self.edges.items():
            if src not in self.nodes or dst not in self.nodes:
                raise ValueError(f"edge {src}-{dst} has unregistered endpoint")
            if not isinstance(weight, int) or weight < 1:
                raise ValueError(
                    f"edge {src}-{dst} ({kind.name}): weight {weight!r} not a positive int"
                )
            if kind is RelationKind.COOCCUR and _node_order(src) > _node_order(dst):
                raise ValueError(f"co-occurrence edge {src}-{dst} not canonical")


def token_frequencies(docs: Iterable[AnnotatedDoc]) -> Counter:
    """(lemma, class) occurrence counts over whole documents."""
    freqs: Counter = Counter()
    for doc in docs:
        for token in doc.tokens():
            freqs[(token.lemma, token.pos)] += 1
    return freqs


def build_graph(
    records: Iterable[PairRecord],
    frequencies: Mapping[NodeKey, int],
) -> LexicalGraph:
    """Aggregate records into a graph.

    Node frequencies come from ``frequencies`` (typically
    :func:`token_frequencies` over the same documents the records were
    extracted from); an endpoint without frequency data raises
    :class:`GraphBuildError` naming the lemma.  Repeated records add up
    to the edge weight.  The same lemma pair related in different ways
    yields one edge per kind.
    """
    nodes: dict[NodeKey, int] = {}
    edges: dict[EdgeKey, int] = {}
    for record in records:
        for lemma, pos in (
            (record.src_lemma, record.src_pos),
            (record.dst_lemma, record.dst_pos),
        ):
            key = (lemma, pos)
            if key not in nodes:
                freq = frequencies.get(key, 0)
                if freq < 1:
                    raise GraphBuildError(
                        f"no frequency for lemma {lemma!r} ({pos.name})"
                    )
                nodes[key] = int(freq)
        src = (record.src_lemma, record.src_pos)
        dst = (record.dst_lemma, record.dst_pos)
        if record.kind is RelationKind.COOCCUR and _node_order(src) > _node_order(dst):
            src, dst = dst, src
        edge = (src, dst, record.kind)
        edges[edge] = edges.get(edge, 0) + 1
    return LexicalGraph(nodes=nodes, edges=edges)


def merge_graphs(graphs: Sequence[LexicalGraph]) -> LexicalGraph:
    """Union of several graphs, summing node frequencies and edge weights."""
    nodes: Counter = Counter()
    edges: Counter = Counter()
    for graph in graphs:
        nodes.update(graph.nodes)
        edges.update(graph.edges)
    return LexicalGraph(nodes=dict(nodes), edges=dict(edges))


# ---------------------------------------------------------------------------
# pruning


@dataclass(frozen=True)
class Threshold:
    """Keep values strictly greater than a fixed minimum."""

    minimum: float

    def cutoff(self, values: Sequence[int]) -> float:
        return float(self.minimum)

    def describe(self) -> str:
        return f"value > {self.minimum:g}"


@dataclass(frozen=True)
class MeanSd:
    """Keep values strictly above mean + k population standard deviations."""

    k: float

    def cutoff(self, values: Sequence[int]) -> float:
        if not values:
            return 0.0
        arr = np.asarray(values, dtype=float)
        return float(arr.mean() + self.k * arr.std())

    def describe(self) -> str:
        return f"value > mean + {self.k:g} sd"


PruneRule = Union[Threshold, MeanSd]

_GT_RE = re.compile(r"^gt(\d+(?:\.\d+)?)$")
_MEAN_RE = re.compile(r"^mean(\d+(?:\.\d+)?)$")


def parse_prune_rule(text: str) -> PruneRule:
    """Parse "gtN" into a threshold rule and "meanK" into a mean+k*sd rule."""
    m = _GT_RE.match(text.strip())
    if m:
        return Threshold(minimum=float(m.group(1)))
    m = _MEAN_RE.match(text.strip())
    if m:
        return MeanSd(k=float(m.group(1)))
    raise ValueError(f"bad prune rule {text!r}; expected gtN or meanK")


def prune(
    graph: LexicalGraph,
    node_rule: PruneRule,
    edge_rule: PruneRule,
    drop_isolated: bool = True,
) -> LexicalGraph:
    """Cut a graph down to its statistically salient part.

    Both cutoffs are computed once on the input graph's node frequency
    and edge weight distributions (independently, never iteratively).
    A node survives when its frequency exceeds the node cutoff; an edge
    survives when its weight exceeds the edge cutoff and both endpoints
    survived.  With ``drop_isolated`` nodes left without any edge are
    removed as well.  The input graph is not modified.
    """
    node_cut = node_rule.cutoff(list(graph.nodes.values()))
    edge_cut = edge_rule.cutoff(list(graph.edges.values()))
    kept_nodes = {key: f for key, f in graph.nodes.items() if f > node_cut}
    kept_edges = {
        (src, dst, kind): w
        for (src, dst, kind), w in graph.edges.items()
        if w > edge_cut and src in kept_nodes and dst in kept_nodes
    }
    if drop_isolated:
        touched = set()
        for src, dst, _kind in kept_edges:
            touched.add(src)
            touched.add(dst)
        kept_nodes = {key: f for key, f in kept_nodes.items() if key in touched}
    return LexicalGraph(nodes=kept_nodes, edges=kept_edges)


# ---------------------------------------------------------------------------
# centrality


class Centrality(enum.Enum):
    DEGREE = "DEGREE"
    IN_DEGREE = "IN_DEGREE"
    OUT_DEGREE = "OUT_DEGREE"
    WEIGHTED_DEGREE = "WEIGHTED_DEGREE"


def centrality(
    graph: LexicalGraph, measure: Centrality
) -> list[tuple[NodeKey, int]]:
    """Rank all nodes by a degree-style measure.

    DEGREE counts incident edges of any kind and WEIGHTED_DEGREE sums
    their weights; both count a self-loop twice, so weighted degrees
    over the graph sum to twice the total edge weight.  IN_DEGREE and
    OUT_DEGREE only look at directed (SUBJ, OBJ) edges.  Ties are broken
    lexicographically by lemma, then class name, so rankings are stable.
    """
    scores: dict[NodeKey, int] = {key: 0 for key in graph.nodes}
    for (src, dst, kind), weight in graph.edges.items():
        if measure is Centrality.DEGREE:
            scores[src] += 1
            scores[dst] += 1
        elif measure is Centrality.WEIGHTED_DEGREE:
            scores[src] += weight
            scores[dst] += weight
        elif measure is Centrality.IN_DEGREE:
            if kind in DIRECTED_KINDS:
                scores[dst] += 1
        elif measure is Centrality.OUT_DEGREE:
            if kind in DIRECTED_KINDS:
                scores[src] += 1
    return sorted(scores.items(), key=lambda kv: (-kv[1], kv[0][0], kv[0][1].name))
