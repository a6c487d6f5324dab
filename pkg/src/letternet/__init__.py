"""Tools for turning collections of historical letters into lexical networks.

The package is organised as a pipeline: ``corpus`` reads manifests and
cleans transcriptions, ``pipeline`` segments and annotates the text,
``extraction`` produces co-occurrence and verb-argument pair records,
``network`` aggregates records into weighted graphs, and ``export``
writes the graphs in interchange formats.  ``cli`` wires the stages
together behind a command line interface.
"""

from letternet.corpus import (
    CleaningConfig,
    Corpus,
    Letter,
    LetterMeta,
    clean_text,
    filter_corpus,
    load_letter,
    load_manifest,
)
from letternet.pipeline import (
    AnnotatedDoc,
    Annotator,
    PosClass,
    SplitConfig,
    Token,
    VariantLexicon,
    default_annotator,
    ingest_pretagged,
    split_sentences,
    tokenize,
    write_vertical,
)
from letternet.extraction import (
    AnaphoraMap,
    GoldTriple,
    PairRecord,
    RelationKind,
    apply_anaphora,
    evaluate_pairs,
    extract_cooccurrences,
    extract_window_pairs,
    load_gold,
)
from letternet.network import (
    Centrality,
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
from letternet.export import (
    StyleSpec,
    export_csv_edges,
    export_dot,
    export_gexf,
    export_json,
    import_json,
    stats_report,
    validate_gexf,
)

__version__ = "0.1.0"
