import json
import subprocess
import sys

import pytest

from conftest import DATA, read

from eojeolbank.cli import ENV_CONFIG_DIR, main
from eojeolbank.jointfmt import read_joint, read_sentence


def _run(tmp_path, argv, name="out.txt"):
    out = tmp_path / name
    status = main(argv + ["--out", str(out)])
    return status, (out.read_text(encoding="utf-8") if out.exists() else None)


def test_convert_figure1(tmp_path):
    status, text = _run(tmp_path, ["convert", "--from", "sejong", "--to", "joint",
                                   str(DATA / "fig1_sejong.txt")])
    assert status == 0 and text == read("fig5_joint.txt")


def test_validate_figure5(tmp_path):
    status, text = _run(tmp_path, ["validate", str(DATA / "fig5_joint.txt")])
    assert status == 0 and text == ""


def test_kaist_with_sidecar(tmp_path):
    status, text = _run(tmp_path, ["convert", "--from", "kaist", "--to", "joint",
                                   str(DATA / "fig3_kaist.txt"),
                                   "--raw-text", str(DATA / "fig3_raw.txt")])
    assert status == 0
    sent = read_sentence(text)
    assert sent.text == read("fig3_raw.txt").strip()
    assert sent.sent_id == "fig3_kaist.1"
    assert not any(r.surface.startswith("+") for r in sent.rows)


def test_penn_to_bracketed_and_deps(tmp_path):
    status, text = _run(tmp_path, ["normalize", "--from", "penn", str(DATA / "fig2_penn.txt")])
    assert status == 0 and "*" not in text
    status, deps = _run(tmp_path, ["convert", "--from", "penn", "--to", "deps",
                                   str(DATA / "fig2_penn.txt")], "deps.txt")
    assert status == 0
    rows = [line.split("\t") for line in deps.splitlines() if not line.startswith("#")]
    assert [r[6] for r in rows].count("0") == 1


def test_missing_config_file_is_fatal(tmp_path):
    status, _ = _run(tmp_path, ["convert", "--from", "sejong", "--to", "joint",
                                "--config", str(tmp_path / "nope.cfg"),
                                str(DATA / "fig1_sejong.txt")])
    assert status == 2


def test_bad_config_is_fatal(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("analysis = Sideways\n", encoding="utf-8")
    status, _ = _run(tmp_path, ["convert", "--from", "sejong", "--to", "joint",
                                "--config", str(cfg), str(DATA / "fig1_sejong.txt")])
    assert status == 2


def test_raw_text_count_mismatch(tmp_path):
    raw = tmp_path / "raw.txt"
    raw.write_text("one\ntwo\n", encoding="utf-8")
    status, _ = _run(tmp_path, ["convert", "--from", "kaist", "--to", "joint",
                                str(DATA / "fig3_kaist.txt"), "--raw-text", str(raw)])
    assert status == 2


def test_unparseable_brackets_are_fatal(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("(S (NP 의상/NNG)\n", encoding="utf-8")
    status, _ = _run(tmp_path, ["normalize", "--from", "sejong", str(bad)])
    assert status == 2


def _two_sentence_corpus(tmp_path):
    good = read("fig5_joint.txt")
    bad = "\n".join(good.splitlines()[:-1]) + "\n"
    corpus = tmp_path / "mixed.joint"
    corpus.write_text(bad.replace("BGAA0001-100", "BGAA0002-100") + "\n" + good,
                      encoding="utf-8")
    return corpus


def test_bad_sentence_skipped(tmp_path, caplog):
    corpus = _two_sentence_corpus(tmp_path)
    status, text = _run(tmp_path, ["convert", "--from", "joint", "--to", "joint", str(corpus)])
    assert status == 1
    assert [s.sent_id for s, _ in read_joint(text)] == ["BGAA0001-10012"]
    assert "skipped" in caplog.text


def test_strict_stops(tmp_path):
    corpus = _two_sentence_corpus(tmp_path)
    status, text = _run(tmp_path, ["convert", "--from", "joint", "--to", "joint", "--strict",
                                   str(corpus)])
    assert status == 1 and text is None


def test_validate_reports_tsv(tmp_path):
    corpus = _two_sentence_corpus(tmp_path)
    status, text = _run(tmp_path, ["validate", "--report", "tsv", str(corpus)])
    assert status == 1
    codes = {line.split("\t")[0] for line in text.splitlines()}
    assert codes == {"UnbalancedBrackets", "DetokenizeMismatch"}


def test_stats_json(tmp_path):
    status, text = _run(tmp_path, ["stats", str(DATA / "fig5_joint.txt")])
    assert status == 0
    data = json.loads(text)
    assert data["sentences"] == 1 and data["tokens"] == 12
    assert data["labels"]["NML"] == 4


def test_env_config_dir(tmp_path, monkeypatch):
    conf = tmp_path / "conf"
    conf.mkdir()
    (conf / "label_map.tsv").write_text("SBJ\tnsubj\n", encoding="utf-8")
    monkeypatch.setenv(ENV_CONFIG_DIR, str(conf))
    status, text = _run(tmp_path, ["convert", "--from", "joint", "--to", "deps",
                                   str(DATA / "fig5_joint.txt")])
    assert status == 0
    assert "\tnsubj\t" in text and "\tsbj\t" not in text

    # an explicit flag wins over the directory
    flag = tmp_path / "labels.tsv"
    flag.write_text("SBJ\tsubject\n", encoding="utf-8")
    status, text = _run(tmp_path, ["convert", "--from", "joint", "--to", "deps",
                                   "--label-map", str(flag), str(DATA / "fig5_joint.txt")])
    assert "\tsubject\t" in text


def test_tag_map_rejected_for_joint(tmp_path):
    status, _ = _run(tmp_path, ["validate", "--tag-map", str(DATA / "fig5_joint.txt"),
                                str(DATA / "fig5_joint.txt")])
    assert status == 2


def test_convert_needs_target():
    with pytest.raises(SystemExit):
        main(["convert", "--from", "sejong"])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "eojeolbank", "convert", "--from", "sejong",
                           "--to", "joint", str(DATA / "fig1_sejong.txt")],
                          capture_output=True, text=True, encoding="utf-8")
    assert proc.returncode == 0
    assert proc.stdout == read("fig5_joint.txt")


def test_stdin_input(monkeypatch, tmp_path):
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO(read("fig5_joint.txt")))
    status, text = _run(tmp_path, ["validate", "-"])
    assert status == 0 and text == ""
