import shutil
from importlib.resources import files

import pytest

from llworkbench.cli import main

CORPUS = files("llworkbench") / "corpus"


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


def test_prove_exit_codes(tmp_path, capsys):
    ok = write(tmp_path, "ok.prob", "sequent: ; p @ 0 |- p @ 0\n")
    no = write(tmp_path, "no.prob", "sequent: ; p @ 0 |- 1 @ 0\n")
    assert main(["prove", "hyll", ok]) == 0
    assert capsys.readouterr().out.startswith("verdict: proved")
    assert main(["prove", "hyll", no]) == 1
    assert "not-provable" in capsys.readouterr().out


def test_exhausted_is_two(tmp_path, capsys):
    loop = write(tmp_path, "loop.prob", "sequent: p -o p @ 0 ; p @ 0 |- q @ 0\n")
    code = main(["prove", "hyll", loop, "--depth", "1"])
    assert code in (1, 2)
    assert ("depth-exhausted" in capsys.readouterr().out) == (code == 2)


def test_parse_error_reports_line(tmp_path, capsys):
    bad = write(tmp_path, "bad.prob", "# header\nsequent: ; p @ |- p @ 0\n")
    assert main(["prove", "hyll", bad]) == 3
    assert "line 2" in capsys.readouterr().err


def test_missing_file(tmp_path, capsys):
    assert main(["prove", "hyll", str(tmp_path / "none.prob")]) == 3


def test_depth_from_environment(tmp_path, monkeypatch, capsys):
    f = write(tmp_path, "f.prob", "sequent: p -o q @ 0 ; p @ 0, p @ 0 |- q * q @ 0\n")
    monkeypatch.setenv("LLWB_DEPTH", "0")
    assert main(["prove", "hyll", f]) != 0
    assert main(["prove", "hyll", f, "--depth", "3"]) == 0


def test_llf_and_sellf(tmp_path, capsys):
    llf = write(tmp_path, "l.prob", "linear: p\nlinear: ~p\n")
    assert main(["prove", "llf", llf]) == 0
    sell = write(tmp_path, "s.prob", "labels: w v\ngoal: ?^w !^w top\ngoal: 0\n")
    assert main(["prove", "sellf", sell]) == 1


def test_proof_out(tmp_path, capsys):
    f = write(tmp_path, "f.prob", "sequent: ; p @ 0 |- p @ 0\n")
    out = tmp_path / "proof.txt"
    assert main(["prove", "hyll", f, "--proof-out", str(out)]) == 0
    assert "init" in out.read_text(encoding="utf-8")


@pytest.mark.parametrize("target", ["hyll-to-ll", "hyll-to-sell"])
def test_encode_reingest(tmp_path, capsys, target):
    f = write(tmp_path, "f.prob", "sequent: ; p at 1 @ 0 |- p @ 1\n")
    out = tmp_path / "enc.prob"
    assert main(["encode", target, f, "-o", str(out)]) == 0
    engine = "llf" if target == "hyll-to-ll" else "sellf"
    assert main(["prove", engine, str(out)]) == 0
    first = out.read_text(encoding="utf-8")
    main(["encode", target, f, "-o", str(out)])
    assert out.read_text(encoding="utf-8") == first


def test_ctl_encodings(tmp_path, capsys):
    src = CORPUS.joinpath("ctl", "q11-eg-loop.prob").read_text(encoding="utf-8")
    f = write(tmp_path, "q.prob", src)
    out = tmp_path / "mu.prob"
    assert main(["encode", "ctl-to-mumall", f, "-o", str(out)]) == 0
    assert "hint:" in out.read_text(encoding="utf-8")
    assert main(["prove", "mumall", str(out)]) == 0
    assert main(["encode", "ctl-to-hyll", f]) == 3


def test_oracle(tmp_path, capsys):
    f = write(tmp_path, "q.prob", CORPUS.joinpath("ctl", "q06-ex-false.prob").read_text(encoding="utf-8"))
    assert main(["oracle", f]) == 1
    assert capsys.readouterr().out.strip().endswith("false")


def test_crosscheck_report(tmp_path, capsys):
    d = tmp_path / "c"
    d.mkdir()
    for name in ("h20-limp-at.prob", "h24-with-right-fails.prob"):
        (d / name).write_text(CORPUS.joinpath("hyll", name).read_text(encoding="utf-8"), encoding="utf-8")
    report = tmp_path / "r.txt"
    assert main(["crosscheck", "hyll-adequacy", str(d), "--proof-out", str(report)]) == 0
    text = report.read_text(encoding="utf-8")
    assert "disagree: 0" in text and "cases: 2" in text


def test_crosscheck_catches_wrong_expectation(tmp_path, capsys):
    d = tmp_path / "c"
    d.mkdir()
    src = CORPUS.joinpath("hyll", "h24-with-right-fails.prob").read_text(encoding="utf-8")
    (d / "x.prob").write_text(src.replace("expect: not-provable", "expect: proved"), encoding="utf-8")
    assert main(["crosscheck", "hyll-adequacy", str(d)]) == 1
    assert "disagree: 1" in capsys.readouterr().out


def test_crosscheck_ctl(tmp_path, capsys):
    d = tmp_path / "c"
    d.mkdir()
    shutil.copy(CORPUS.joinpath("ctl", "two.ts"), d / "two.ts")
    assert main(["crosscheck", "ctl-mumall", str(d), "--size", "2"]) == 0
    assert main(["crosscheck", "ctl-hyll-fragment", str(d)]) == 0
