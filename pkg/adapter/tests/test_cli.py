import json
import struct
import subprocess

import pytest

from xrank_adapter.cli import main_embed, main_export_colors, main_export_wordnet


def write_inputs(tmp_path):
    queries = tmp_path / "q.jsonl"
    queries.write_text(
        '{"query_id": "q1", "image_id": "i1", "text": "a zebra"}\n'
        '{"query_id": "q2", "image_id": "i2", "text": "green grass"}\n',
        encoding="utf-8",
    )
    corpora = tmp_path / "c.jsonl"
    corpora.write_text(
        '{"image_id": "i1", "sentences": ["a zebra", "stripes"]}\n'
        '{"image_id": "i2", "sentences": ["green grass"]}\n',
        encoding="utf-8",
    )
    return queries, corpora


def read_header(path):
    payload = path.read_bytes()
    assert payload[:8] == b"XRANKEMB"
    return struct.unpack("<IIQ", payload[8:24])


def test_embed_writes_all_requested_outputs(tmp_path, stub, capsys):
    queries, corpora = write_inputs(tmp_path)
    q_out = tmp_path / "q.bin"
    c_out = tmp_path / "c.bin"
    rc = main_embed(
        [
            "--model", "stub-model",
            "--queries", str(queries), "--out", str(q_out),
            "--corpora", str(corpora), "--out-corpora", str(c_out),
        ],
        encoder=stub,
    )
    assert rc == 0
    stats = json.loads(capsys.readouterr().out)
    assert stats == {"corpora": 2, "dim": 48, "model": "stub-model", "queries": 2}
    assert read_header(q_out) == (1, 48, 2)
    assert read_header(c_out) == (1, 48, 2)


def test_embed_out_flag_spellings_are_equivalent(tmp_path, stub, capsys):
    queries, _ = write_inputs(tmp_path)
    one = tmp_path / "one.bin"
    two = tmp_path / "two.bin"
    assert main_embed(
        ["--model", "m", "--queries", str(queries), "--out", str(one)], encoder=stub
    ) == 0
    assert main_embed(
        ["--model", "m", "--queries", str(queries), "--out-queries", str(two)],
        encoder=stub,
    ) == 0
    capsys.readouterr()
    assert one.read_bytes() == two.read_bytes()


def test_embed_handles_perturbed_records(tmp_path, stub, capsys):
    perturbed = tmp_path / "p.jsonl"
    perturbed.write_text(
        '{"query_id": "q1", "original_text": "a big cat", "text": "a small cat"}\n',
        encoding="utf-8",
    )
    out = tmp_path / "p.bin"
    rc = main_embed(
        ["--model", "m", "--perturbed", str(perturbed), "--out-perturbed", str(out)],
        encoder=stub,
    )
    assert rc == 0
    assert json.loads(capsys.readouterr().out)["perturbed"] == 1
    assert read_header(out) == (1, 48, 1)


def test_embed_usage_errors(tmp_path, stub):
    queries, _ = write_inputs(tmp_path)
    with pytest.raises(SystemExit) as exit_info:
        main_embed(["--model", "m"], encoder=stub)
    assert exit_info.value.code == 2
    with pytest.raises(SystemExit) as exit_info:
        main_embed(["--model", "m", "--queries", str(queries)], encoder=stub)
    assert exit_info.value.code == 2
    with pytest.raises(SystemExit) as exit_info:
        main_embed(["--model", "m", "--out", str(tmp_path / "q.bin")], encoder=stub)
    assert exit_info.value.code == 2


def test_embed_missing_input_file(tmp_path, stub, capsys):
    rc = main_embed(
        [
            "--model", "m",
            "--queries", str(tmp_path / "absent.jsonl"),
            "--out", str(tmp_path / "q.bin"),
        ],
        encoder=stub,
    )
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_embed_malformed_input(tmp_path, stub, capsys):
    bad = tmp_path / "bad.jsonl"
    bad.write_text("not json\n", encoding="utf-8")
    rc = main_embed(
        ["--model", "m", "--queries", str(bad), "--out", str(tmp_path / "q.bin")],
        encoder=stub,
    )
    assert rc == 2
    assert "not valid JSON" in capsys.readouterr().err


def test_embed_empty_input_is_a_data_error(tmp_path, stub, capsys):
    empty = tmp_path / "empty.jsonl"
    empty.write_text("", encoding="utf-8")
    rc = main_embed(
        ["--model", "m", "--queries", str(empty), "--out", str(tmp_path / "q.bin")],
        encoder=stub,
    )
    assert rc == 1
    assert "no queries" in capsys.readouterr().err


def test_embed_bogus_model_fails_with_its_name(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("HF_HUB_OFFLINE", "1")
    queries, _ = write_inputs(tmp_path)
    rc = main_embed(
        [
            "--model", "no-such-model-xyz",
            "--queries", str(queries),
            "--out", str(tmp_path / "q.bin"),
        ]
    )
    assert rc == 1
    assert "no-such-model-xyz" in capsys.readouterr().err


def test_export_wordnet_cli(dict_dir, tmp_path, capsys):
    out = tmp_path / "wn.tsv"
    rc = main_export_wordnet(["--dict", str(dict_dir), "--out", str(out)])
    assert rc == 0
    stats = json.loads(capsys.readouterr().out)
    assert stats == {"antonyms": 6, "edges": 64, "nodes": 64}
    assert out.exists()


def test_export_wordnet_missing_dict_dir(tmp_path, capsys):
    rc = main_export_wordnet(
        ["--dict", str(tmp_path / "nowhere"), "--out", str(tmp_path / "wn.tsv")]
    )
    assert rc == 2
    assert "not a directory" in capsys.readouterr().err


def test_export_colors_cli(tmp_path, capsys):
    out = tmp_path / "colors.csv"
    rc = main_export_colors(["--out", str(out)])
    assert rc == 0
    assert json.loads(capsys.readouterr().out) == {"colors": 148}
    assert "red,255,0,0" in out.read_text(encoding="utf-8").splitlines()


@pytest.mark.parametrize(
    "script", ["xrank-embed", "xrank-export-wordnet", "xrank-export-colors"]
)
def test_console_scripts_are_installed(script):
    proc = subprocess.run(
        [script, "--version"], capture_output=True, text=True, timeout=60
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == f"{script} 0.1.0"
