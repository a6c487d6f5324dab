"""
Build a co-occurrence network from the bundled letters
======================================================

Annotates the thirteen sample letters, links every pair of content
words that share a sentence, merges the per-letter graphs, prunes
rare nodes and thin edges, and writes the result next to this
script in GEXF and JSON form.
"""

import sys
from pathlib import Path

from letternet import (
    build_graph,
    default_annotator,
    extract_cooccurrences,
    load_manifest,
    merge_graphs,
    token_frequencies,
)
from letternet.export import export_gexf, export_json, stats_report
from letternet.network import MeanSd, prune
from letternet.pipeline import data_path

if __name__ == "__main__":
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demo_out")
    out_dir.mkdir(parents=True, exist_ok=True)

    # read the manifest and annotate every letter
    corpus = load_manifest(data_path("sample_corpus") / "manifest.tsv")
    annotator = default_annotator()
    docs = [annotator.annotate(letter) for letter in corpus]
    print(f"annotated {len(docs)} letters")

    # one graph per letter, then one merged graph for the whole corpus
    graphs = []
    for doc in docs:
        records = extract_cooccurrences(doc)
        graphs.append(build_graph(records, token_frequencies([doc])))
    merged = merge_graphs(graphs)
    print(f"merged graph: {merged.n_nodes} nodes, {merged.n_edges} edges")

    # keep only nodes and edges more than two standard deviations
    # above the mean; the survivors are the recurring themes
    pruned = prune(merged, MeanSd(2.0), MeanSd(2.0))
    print(f"pruned graph: {pruned.n_nodes} nodes, {pruned.n_edges} edges")
    print()
    print(stats_report(pruned, top_n=8), end="")

    export_gexf(pruned, out_dir / "letters_cooccur.gexf")
    export_json(pruned, out_dir / "letters_cooccur.json")
    print(f"\nwrote letters_cooccur.gexf and letters_cooccur.json to {out_dir}")
