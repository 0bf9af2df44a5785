import json

import pytest

from globrep.cli import main, parse_group_token
from globrep.suites import ANCHORS, SUITE_NAMES, run_suite


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_group_tokens():
    assert parse_group_token("1").order == 1
    assert parse_group_token("C8").order == 8
    assert parse_group_token("C2^2").order == 4
    from globrep.cli import CliError

    with pytest.raises(CliError):
        parse_group_token("Q8")


def test_site_build_and_check(tmp_path, capsys):
    out = tmp_path / "site.json"
    code, _, _ = run_cli(["site", "build", "--groups", "1,C2,C4", "--out", str(out)], capsys)
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["widely_closed"] is True
    code, text, _ = run_cli(["site", "check", "--site", str(out)], capsys)
    assert code == 0
    assert json.loads(text)["widely_closed"] is True


def test_site_build_failure_exit_code(capsys):
    code, _, err = run_cli(["site", "build", "--groups", "C2,C3"], capsys)
    assert code == 0
    # duplicate isomorphism classes violate a mathematical precondition
    code, _, err = run_cli(["site", "build", "--groups", "1,C2^2,C2,C2"], capsys)
    assert code == 3


def test_rep_and_op_tensor(tmp_path, capsys):
    site = tmp_path / "site.json"
    run_cli(["site", "build", "--groups", "1,C2,C2^2", "--out", str(site)], capsys)
    e = tmp_path / "e.json"
    code, _, _ = run_cli(["rep", "e", "--site", str(site), "--group", "C2", "--out", str(e)], capsys)
    assert code == 0
    code, text, _ = run_cli(["op", "tensor", "--site", str(site), "--a", str(e), "--b", str(e)], capsys)
    assert code == 0
    assert json.loads(text)["dims"] == [0, 1, 9]


def test_complex_cofiber_and_homology(tmp_path, capsys):
    site = tmp_path / "site.json"
    run_cli(["site", "build", "--groups", "1,C2,C4", "--out", str(site)], capsys)
    cx = tmp_path / "cofiber.json"
    code, _, _ = run_cli(["complex", "cofiber-counit", "--site", str(site),
                          "--group", "C2", "--out", str(cx)], capsys)
    assert code == 0
    code, text, _ = run_cli(["op", "homology", "--site", str(site), "--in", str(cx)], capsys)
    assert code == 0
    payload = json.loads(text)
    assert payload["homology_dims"]["0"] == [1, 0, 0]
    code, text, _ = run_cli(["op", "compact-table", "--site", str(site), "--in", str(cx)], capsys)
    assert json.loads(text)["table"] == {"1": 1, "C2": 0, "C4": 0}
    code, text, _ = run_cli(["op", "torsion", "--site", str(site), "--in", str(cx)], capsys)
    assert json.loads(text)["torsion_free_class"] is None


def test_op_dualizable(tmp_path, capsys):
    site = tmp_path / "site.json"
    run_cli(["site", "build", "--groups", "1,C2", "--out", str(site)], capsys)
    cx = tmp_path / "e.json"
    run_cli(["complex", "egen", "--site", str(site), "--group", "C2", "--out", str(cx)], capsys)
    code, text, _ = run_cli(["op", "dualizable", "--site", str(site), "--in", str(cx)], capsys)
    assert code == 0
    assert json.loads(text)["dualizable"] is False


def test_verify_text_and_exit(tmp_path, capsys):
    code, text, _ = run_cli(["verify", "dualizable", "--count", "2"], capsys)
    assert code == 0
    assert "ALL PASS" in text
    code, _, err = run_cli(["verify", "nonsense"], capsys)
    assert code == 2


def test_verify_reports_reproducible(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    for path in (a, b):
        code, _, _ = run_cli(["verify", "dualizable", "--count", "2", "--seed", "11",
                              "--format", "json", "--omit-timing", "--out", str(path)], capsys)
        assert code == 0
    assert a.read_text() == b.read_text()


def test_bad_schema_exit_code(tmp_path, capsys):
    site = tmp_path / "site.json"
    run_cli(["site", "build", "--groups", "1,C2", "--out", str(site)], capsys)
    bad = tmp_path / "bad.json"
    bad.write_text("{\"dims\": [1, 1]}")
    code, _, err = run_cli(["op", "homology", "--site", str(site), "--in", str(bad)], capsys)
    assert code == 3


def test_anchor_lint():
    # every suite row's anchor string comes from the bundled anchor list
    for suite, kwargs in (("dualizable", {"count": 1}), ("resolutions", {"count": 2})):
        report = run_suite(suite, None, 3, kwargs["count"])
        for row in report.rows:
            assert row["anchor"] == ANCHORS[row["claim"]]
    # claim ids map to exactly one anchor
    assert len(ANCHORS) == len(set(ANCHORS.values()))


def test_verify_resolutions_site_override(capsys):
    code, text, _ = run_cli(["verify", "resolutions", "--site", "cyclic2", "--count", "4"], capsys)
    assert code == 0
    assert "ALL PASS" in text


def test_verify_json_format_all_fields(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _, _ = run_cli(["verify", "thin", "--count", "2", "--format", "json",
                          "--out", str(out)], capsys)
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["passed"] is True
    for row in payload["rows"]:
        assert set(row) >= {"claim", "anchor", "instance", "verdict"}
