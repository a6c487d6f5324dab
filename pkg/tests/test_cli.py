"""Config resolution and the letternet command line."""

import json

import pytest

from letternet import cli
from letternet.cli import (
    CONFIG_ENV_VAR,
    ConfigError,
    RunConfig,
    build_parser,
    load_config_file,
    main,
    validate_config,
)
from letternet.export import import_json
from letternet.extraction import RelationKind

from conftest import MANIFEST, N, V


@pytest.fixture(scope="module")
def mini_corpus(tmp_path_factory):
    """Two tiny letters plus a manifest, for fast end-to-end runs."""
    root = tmp_path_factory.mktemp("mini")
    (root / "a.txt").write_text(
        "The tutor doth loue the child. The child doth see the truth.\n",
        encoding="utf-8",
    )
    (root / "b.txt").write_text(
        "God doth see the truth: and the church doth call the man.\n",
        encoding="utf-8",
    )
    rows = [
        "letter_id\tsender\taddressee\tyear\tyear_uncertain\tlanguage\tfile\tcut_marker",
        "A1\tHartlib\tDury\t1630\tfalse\ten\ta.txt\t-",
        "B1\tDury\tHartlib\t1632\tfalse\ten\tb.txt\t-",
    ]
    manifest = root / "manifest.tsv"
    manifest.write_text("\n".join(rows) + "\n", encoding="utf-8")
    return manifest


def run_main(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# config files


def test_load_config_file_resolves_paths(tmp_path):
    sub = tmp_path / "conf"
    sub.mkdir()
    path = sub / "c.json"
    path.write_text(
        json.dumps(
            {
                "manifest": "corpus/manifest.tsv",
                "out": "results",
                "formats": ["json", "csv"],
                "top": 5,
            }
        ),
        encoding="utf-8",
    )
    data = load_config_file(path)
    assert data["manifest"] == str(sub / "corpus" / "manifest.tsv")
    # out stays relative to the working directory, not the config
    assert data["out"] == "results"
    assert data["formats"] == ("json", "csv")
    assert data["top"] == 5


def test_load_config_file_keeps_absolute_paths(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"gold": "/abs/gold.tsv"}), encoding="utf-8")
    assert load_config_file(path)["gold"] == "/abs/gold.tsv"


def test_load_config_file_rejects_unknown_keys(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"mode": "pairs", "windw": 3}), encoding="utf-8")
    with pytest.raises(ConfigError, match="windw"):
        load_config_file(path)


def test_load_config_file_bad_json(tmp_path):
    path = tmp_path / "c.json"
    path.write_text("{oops", encoding="utf-8")
    with pytest.raises(ConfigError, match="invalid JSON"):
        load_config_file(path)


def test_load_config_file_non_object(tmp_path):
    path = tmp_path / "c.json"
    path.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(ConfigError, match="JSON object"):
        load_config_file(path)


def test_load_config_file_missing():
    with pytest.raises(ConfigError, match="cannot read"):
        load_config_file("/no/such/config.json")


def test_shipped_sample_config_loads():
    from letternet.pipeline import data_path

    data = load_config_file(data_path("sample_config.json"))
    assert data["mode"] == "cooccur"
    assert data["manifest"].endswith("manifest.tsv")


# flag / config / default precedence


def resolve(argv):
    return cli._resolve_config(build_parser().parse_args(argv))


def test_flags_override_config(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"mode": "pairs", "max_dist": 2}), encoding="utf-8")
    cfg = resolve(["network", "--config", str(path)])
    assert cfg.mode == "pairs" and cfg.max_dist == 2
    cfg = resolve(["network", "--config", str(path), "--mode", "cooccur"])
    assert cfg.mode == "cooccur"
    assert cfg.max_dist == 2  # untouched config value survives


def test_boolean_flags_only_flip_when_given():
    cfg = resolve(["network"])
    assert cfg.verb_blocker and not cfg.colon_boundary and not cfg.keep_isolated
    cfg = resolve(["network", "--no-blocker", "--colon-boundary", "--keep-isolated"])
    assert not cfg.verb_blocker and cfg.colon_boundary and cfg.keep_isolated


def test_format_flag_splits_commas():
    cfg = resolve(["network", "--format", "json, csv"])
    assert cfg.formats == ("json", "csv")


def test_env_var_supplies_config(tmp_path, monkeypatch):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"top": 3}), encoding="utf-8")
    monkeypatch.setenv(CONFIG_ENV_VAR, str(path))
    assert resolve(["stats"]).top == 3
    monkeypatch.delenv(CONFIG_ENV_VAR)
    assert resolve(["stats"]).top == 10


# validate_config


def test_validate_config_accepts_sample():
    validate_config(RunConfig(manifest=str(MANIFEST)))


@pytest.mark.parametrize(
    "kwargs, fragment",
    [
        ({"mode": "triples"}, "bad mode"),
        ({"scope": "everything"}, "bad scope"),
        ({"formats": ("gexf", "pdf")}, "bad format"),
        ({"context": "window:x"}, "bad context"),
        ({"context": "window:0"}, ">= 1"),
        ({"context": "paragraph"}, "bad context"),
        ({"max_dist": -1}, "max_dist"),
        ({"prune_nodes": "banana"}, "prune"),
        ({"prune_edges": "gt"}, "prune"),
        ({"manifest": None}, "no manifest"),
        ({"manifest": "/no/such.tsv"}, "not found"),
        ({"gold": "/no/gold.tsv"}, "gold file not found"),
        ({"anaphora": "/no/ana.tsv"}, "not found"),
        ({"pretagged_dir": "/no/dir"}, "not found"),
    ],
)
def test_validate_config_rejects(kwargs, fragment):
    base = {"manifest": str(MANIFEST)}
    base.update(kwargs)
    with pytest.raises(ConfigError, match=fragment):
        validate_config(RunConfig(**base))


def test_validate_config_pretagged_skips_manifest(tmp_path):
    validate_config(RunConfig(pretagged_dir=str(tmp_path)))


# subcommands end to end


def test_preprocess_writes_vertical_files(mini_corpus, tmp_path, capsys):
    out = tmp_path / "out"
    code, stdout, _ = run_main(
        ["preprocess", "--manifest", str(mini_corpus), "--out", str(out)], capsys
    )
    assert code == 0
    assert "preprocessed 2 letters" in stdout
    assert sorted(p.name for p in out.glob("*.tsv")) == ["A1.tsv", "B1.tsv"]
    lines = (out / "A1.tsv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == "# letter A1"
    assert lines[1] == "The\tthe\tthe\tDET"


def test_network_default_gexf(mini_corpus, tmp_path, capsys):
    out = tmp_path / "out"
    code, stdout, _ = run_main(
        ["network", "--manifest", str(mini_corpus), "--out", str(out)], capsys
    )
    assert code == 0
    assert (out / "network.gexf").is_file()
    assert (out / "network_stats.txt").is_file()
    assert "network:" in stdout and "nodes" in stdout


def test_network_format_selection(mini_corpus, tmp_path, capsys):
    out = tmp_path / "out"
    code, _, _ = run_main(
        [
            "network",
            "--manifest",
            str(mini_corpus),
            "--out",
            str(out),
            "--format",
            "json,csv",
        ],
        capsys,
    )
    assert code == 0
    assert not (out / "network.gexf").exists()
    graph = import_json(out / "network.json")
    assert ("truth", N) in graph.nodes
    header = (out / "network_edges.csv").read_text(encoding="utf-8").splitlines()[0]
    assert header.startswith("source_lemma")


def test_network_per_letter_scope(mini_corpus, tmp_path, capsys):
    out = tmp_path / "out"
    code, stdout, _ = run_main(
        [
            "network",
            "--manifest",
            str(mini_corpus),
            "--out",
            str(out),
            "--scope",
            "per-letter",
            "--format",
            "json",
        ],
        capsys,
    )
    assert code == 0
    assert (out / "A1.json").is_file() and (out / "B1.json").is_file()
    assert "A1:" in stdout and "B1:" in stdout


def test_network_colon_boundary_changes_cooccurrence(mini_corpus, tmp_path, capsys):
    def edges(extra):
        out = tmp_path / ("c" + str(len(extra)))
        args = [
            "network",
            "--manifest",
            str(mini_corpus),
            "--out",
            str(out),
            "--format",
            "json",
        ] + extra
        assert main(args) == 0
        capsys.readouterr()
        return import_json(out / "network.json").edges

    joined = edges([])
    split = edges(["--colon-boundary"])
    crossing = (("church", N), ("god", N), RelationKind.COOCCUR)
    assert crossing in joined
    assert crossing not in split


def test_network_pairs_mode(mini_corpus, tmp_path, capsys):
    out = tmp_path / "out"
    code, _, _ = run_main(
        [
            "network",
            "--manifest",
            str(mini_corpus),
            "--out",
            str(out),
            "--mode",
            "pairs",
            "--format",
            "json",
        ],
        capsys,
    )
    assert code == 0
    graph = import_json(out / "network.json")
    assert (("see", V), ("truth", N), RelationKind.OBJ) in graph.edges
    assert (("god", N), ("do", V), RelationKind.SUBJ) in graph.edges
    kinds = {kind for _, _, kind in graph.edges}
    assert RelationKind.COOCCUR not in kinds


def test_network_outputs_are_reproducible(mini_corpus, tmp_path, capsys):
    blobs = []
    for name in ("one", "two"):
        out = tmp_path / name
        assert (
            main(["network", "--manifest", str(mini_corpus), "--out", str(out)]) == 0
        )
        capsys.readouterr()
        blobs.append((out / "network.gexf").read_bytes())
    assert blobs[0] == blobs[1]


def test_network_from_pretagged_matches_direct(mini_corpus, tmp_path, capsys):
    vertical = tmp_path / "vertical"
    assert main(["preprocess", "--manifest", str(mini_corpus), "--out", str(vertical)]) == 0
    direct = tmp_path / "direct"
    again = tmp_path / "again"
    assert (
        main(
            [
                "network",
                "--manifest",
                str(mini_corpus),
                "--out",
                str(direct),
                "--format",
                "json",
            ]
        )
        == 0
    )
    assert (
        main(
            [
                "network",
                "--pretagged-dir",
                str(vertical),
                "--out",
                str(again),
                "--format",
                "json",
            ]
        )
        == 0
    )
    capsys.readouterr()
    assert (direct / "network.json").read_bytes() == (again / "network.json").read_bytes()


def test_run_chains_preprocess_and_network(mini_corpus, tmp_path, capsys):
    out = tmp_path / "out"
    code, stdout, _ = run_main(
        ["run", "--manifest", str(mini_corpus), "--out", str(out)], capsys
    )
    assert code == 0
    assert (out / "A1.tsv").is_file()
    assert (out / "network.gexf").is_file()
    assert "preprocessed" in stdout and "network:" in stdout


def test_eval_reports_scores(mini_corpus, tmp_path, capsys):
    gold = tmp_path / "gold.tsv"
    gold.write_text("A1\t0\tlove\ttutor\tchild\n", encoding="utf-8")
    out = tmp_path / "out"
    code, stdout, _ = run_main(
        [
            "eval",
            "--manifest",
            str(mini_corpus),
            "--gold",
            str(gold),
            "--out",
            str(out),
        ],
        capsys,
    )
    assert code == 0
    assert "overall" in stdout
    report = (out / "eval_report.txt").read_text(encoding="utf-8")
    assert report.strip() == stdout.strip()


def test_stats_prints_summary(mini_corpus, capsys):
    code, stdout, _ = run_main(["stats", "--manifest", str(mini_corpus)], capsys)
    assert code == 0
    assert "Nodes:" in stdout and "Top nouns by frequency:" in stdout


# error handling


def test_missing_manifest_is_a_user_error(capsys):
    code, _, stderr = run_main(["network", "--manifest", "/no/such.tsv"], capsys)
    assert code == 1
    assert stderr.startswith("letternet: error:")


def test_bad_prune_rule_is_a_user_error(mini_corpus, capsys):
    code, _, stderr = run_main(
        ["network", "--manifest", str(mini_corpus), "--prune-nodes", "banana"], capsys
    )
    assert code == 1
    assert "letternet: error:" in stderr


def test_eval_without_gold_is_a_user_error(mini_corpus, capsys):
    code, _, stderr = run_main(["eval", "--manifest", str(mini_corpus)], capsys)
    assert code == 1
    assert "gold" in stderr


def test_eval_gold_for_unknown_letter(mini_corpus, tmp_path, capsys):
    gold = tmp_path / "gold.tsv"
    gold.write_text("Z9\t0\tsee\tgod\t-\n", encoding="utf-8")
    code, _, stderr = run_main(
        ["eval", "--manifest", str(mini_corpus), "--gold", str(gold)], capsys
    )
    assert code == 1
    assert "Z9" in stderr


def test_unknown_subcommand_exits_with_usage():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
