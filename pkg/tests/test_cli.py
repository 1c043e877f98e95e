import json

import pytest

from hileval.cli import run

from test_store import corpus_dict, write_corpus


def worked_example_corpus(tmp_path):
    """The four-token document with one K=2 annotator highlighting 'a b'."""
    data = {
        "version": "1",
        "tokenizer": {"lowercase": True, "count_punctuation": True},
        "budget_k": 2,
        "documents": [{"id": "doc1", "text": "a b c d"}],
        "summaries": [
            {"doc_id": "doc1", "system": "sys", "text": "a c"},
        ],
    }
    corpus = tmp_path / "corpus.json"
    corpus.write_text(json.dumps(data))
    highlights = tmp_path / "highlights.ndjson"
    highlights.write_text(
        json.dumps({"doc_id": "doc1", "annotator_id": "a1", "spans": [[0, 2]]}) + "\n"
    )
    return corpus, highlights


def test_hrouge_worked_example_prints_x100(tmp_path, capsys):
    corpus, highlights = worked_example_corpus(tmp_path)
    out = tmp_path / "out"
    code = run(
        [
            "hrouge",
            "--corpus", str(corpus),
            "--highlights", str(highlights),
            "--n", "1",
            "--out", str(out),
            "--format", "csv",
        ]
    )
    assert code == 0
    text = (out / "hrouge.csv").read_text()
    mean_line = next(line for line in text.splitlines() if line.startswith("mean"))
    assert ",50.00,50.00" in mean_line
    provenance = json.loads((out / "provenance.json").read_text())
    assert provenance["count_mode"] == "clipped"


def test_hrouge_raw_and_records(tmp_path):
    corpus, highlights = worked_example_corpus(tmp_path)
    out = tmp_path / "raw"
    assert run(
        [
            "hrouge", "--corpus", str(corpus), "--highlights", str(highlights),
            "--n", "1", "--out", str(out), "--format", "records",
        ]
    ) == 0
    rows = [json.loads(line) for line in (out / "hrouge.ndjson").read_text().splitlines()]
    doc_row = next(r for r in rows if r["row"] == "doc")
    assert doc_row["precision"] == 0.5 and doc_row["recall"] == 0.5


def test_rouge_doc_uniform(tmp_path):
    corpus, _ = worked_example_corpus(tmp_path)
    out = tmp_path / "rd"
    assert run(
        ["rouge-doc", "--corpus", str(corpus), "--n", "1", "--out", str(out), "--format", "records"]
    ) == 0
    rows = [json.loads(line) for line in (out / "rouge_doc.ndjson").read_text().splitlines()]
    doc_row = next(r for r in rows if r["row"] == "doc")
    assert doc_row["precision"] == 1.0 and doc_row["recall"] == 0.5
    assert doc_row["mode"] == "uniform"


def test_agreement_identical_annotators(tmp_path):
    data = corpus_dict(n_docs=1)
    corpus = write_corpus(tmp_path, data)
    highlights = tmp_path / "hl.ndjson"
    highlights.write_text(
        "\n".join(
            json.dumps({"doc_id": "d0", "annotator_id": f"a{i}", "spans": [[0, 3]]})
            for i in range(3)
        )
        + "\n"
    )
    out = tmp_path / "agree"
    assert run(
        ["agreement", "--corpus", str(corpus), "--highlights", str(highlights),
         "--out", str(out), "--format", "records"]
    ) == 0
    rows = [json.loads(line) for line in (out / "agreement.ndjson").read_text().splitlines()]
    doc_row = next(r for r in rows if r["row"] == "doc")
    assert doc_row["kappa"] == pytest.approx(1.0)


def test_unknown_flag_exits_2_and_writes_nothing(tmp_path):
    corpus, highlights = worked_example_corpus(tmp_path)
    out = tmp_path / "nothing"
    with pytest.raises(SystemExit) as excinfo:
        run(
            ["hrouge", "--corpus", str(corpus), "--highlights", str(highlights),
             "--out", str(out), "--definitely-not-a-flag"]
        )
    assert excinfo.value.code == 2
    assert not out.exists()


def test_data_error_exits_1_with_json_record(tmp_path, capsys):
    out = tmp_path / "o"
    code = run(
        ["hrouge", "--corpus", str(tmp_path / "missing.json"),
         "--highlights", str(tmp_path / "missing.ndjson"), "--out", str(out)]
    )
    assert code == 1
    record = json.loads(capsys.readouterr().err.strip())
    assert "error" in record and "message" in record
    assert not out.exists()


def test_ingest_gen_tasks_and_report_pipeline(tmp_path, capsys):
    corpus = write_corpus(tmp_path, corpus_dict(n_docs=1))
    campaign_dir = tmp_path / "campaign"
    assert run(["ingest", "--corpus", str(corpus), "--out", str(campaign_dir), "--seed", "9"]) == 0
    assert run(["gen-tasks", "--corpus", str(campaign_dir), "--annotators", "2", "--judges", "2"]) == 0
    out = capsys.readouterr().out
    assert "2 quality tasks" in out

    report_dir = tmp_path / "report"
    assert run(
        ["report", "--corpus", str(campaign_dir), "--out", str(report_dir), "--format", "csv"]
    ) == 0
    assert (report_dir / "provenance.json").exists()
    assert (report_dir / "hrouge.csv").exists()  # uniform table without highlights


def test_make_sanity_deterministic(tmp_path):
    corpus = write_corpus(tmp_path, corpus_dict(n_docs=2))
    out_a = tmp_path / "a.ndjson"
    out_b = tmp_path / "b.ndjson"
    assert run(["make-sanity", "--corpus", str(corpus), "--seed", "4", "--out", str(out_a)]) == 0
    assert run(["make-sanity", "--corpus", str(corpus), "--seed", "4", "--out", str(out_b)]) == 0
    assert out_a.read_bytes() == out_b.read_bytes()
    rows = [json.loads(line) for line in out_a.read_text().splitlines()]
    assert {row["doc_id"] for row in rows} == {"d0", "d1"}
    for row in rows:
        assert row["good"] and row["mediocre"] and row["bad"]


def test_export_round_trip(tmp_path, capsys):
    corpus = write_corpus(tmp_path, corpus_dict(n_docs=1))
    normalized = tmp_path / "norm.json"
    assert run(["export", "--corpus", str(corpus), "--out", str(normalized)]) == 0
    again = tmp_path / "norm2.json"
    assert run(["export", "--corpus", str(normalized), "--out", str(again)]) == 0
    assert normalized.read_bytes() == again.read_bytes()
