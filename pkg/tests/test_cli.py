import json

import pytest
from click.testing import CliRunner

from titshom import reports
from titshom.cli import main
from titshom.errors import UnknownSuite
from titshom.reports import CheckSpec, SuiteReport, run_suite


runner = CliRunner()


def test_bounds_values():
    assert runner.invoke(main, ["bounds", "A5"]).output.strip() == "2"
    assert runner.invoke(main, ["bounds", "A4", "--mode", "integral"]).output.strip() == "1"
    assert runner.invoke(main, ["bounds", "empty"]).output.strip() == "-1"
    assert runner.invoke(main, ["bounds", "A2xB3xD5"]).output.strip() == "3"
    bad = runner.invoke(main, ["bounds", "Z9"])
    assert bad.exit_code != 0


def test_reduce_symbol_verifies():
    res = runner.invoke(main, ["reduce", "--symbol", "1,0;1,2"])
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert payload["verified"] is True
    assert payload["input"] == [[1, 0], [1, 2]]
    assert sum(t["coeff"] for t in payload["terms"]) >= 1
    for term in payload["terms"]:
        assert len(term["vectors"]) == 2


def test_reduce_rejects_ragged_symbol():
    res = runner.invoke(main, ["reduce", "--symbol", "1,0;1"])
    assert res.exit_code != 0
    res = runner.invoke(main, ["reduce", "--symbol", "1,0,0;0,1,0"])
    assert res.exit_code != 0


def test_reduce_batch(tmp_path):
    batch = tmp_path / "symbols.txt"
    batch.write_text("1,0;1,2\n3,1;1,2\n")
    out = tmp_path / "report.json"
    res = runner.invoke(main, ["reduce", "--batch", str(batch), "--report", str(out)])
    assert res.exit_code == 0
    lines = [json.loads(l) for l in res.output.splitlines()]
    assert len(lines) == 2 and all(r["verified"] for r in lines)
    assert json.loads(out.read_text()) == lines


def test_reduce_needs_exactly_one_source():
    assert runner.invoke(main, ["reduce"]).exit_code != 0


def test_suite_unknown_name():
    res = runner.invoke(main, ["suite", "nosuch"])
    assert res.exit_code == 2
    with pytest.raises(UnknownSuite):
        run_suite("nosuch")


def test_suite_report_files(tmp_path):
    rep_path = tmp_path / "r.json"
    csv_path = tmp_path / "r.csv"
    res = runner.invoke(
        main,
        ["suite", "bounds", "--report", str(rep_path), "--csv", str(csv_path), "--stable-timings"],
    )
    assert res.exit_code == 0
    payload = json.loads(rep_path.read_text())
    assert payload["schema"] == 1
    assert payload["all_pass"] is True
    assert all(c["elapsed_ms"] == 0 for c in payload["checks"])
    rows = csv_path.read_text().splitlines()
    assert rows[0].startswith("suite,claim,description")
    assert len(rows) == 1 + len(payload["checks"])


def test_reports_byte_stable_across_workers():
    a = run_suite("bounds").to_json(stable_timings=True)
    b = run_suite("bounds", workers=4).to_json(stable_timings=True)
    assert a == b


def test_config_fills_unset_flags(tmp_path):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("# defaults\ncount = 3\nseed = 5\n")
    rep_path = tmp_path / "r.json"
    res = runner.invoke(
        main,
        ["suite", "barset", "--config", str(cfg), "--seed", "7", "--n", "4",
         "--report", str(rep_path), "--stable-timings"],
    )
    assert res.exit_code == 0
    payload = json.loads(rep_path.read_text())
    # config supplied count, the explicit flag beat the config seed
    assert payload["params"]["count"] == 3
    assert payload["params"]["seed"] == 7
    assert payload["params"]["n"] == 4


def test_config_rejects_garbage(tmp_path):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("not a pair\n")
    res = runner.invoke(main, ["suite", "bounds", "--config", str(cfg)])
    assert res.exit_code != 0


def test_part6_claim_table():
    res = runner.invoke(main, ["part6", "--n", "4"])
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert payload["all_pass"] is True
    assert len(payload["claims"]) == 37
    badcases = [c for c in payload["claims"] if "badcase" in c]
    assert len(badcases) == 8
    assert all(c["badcase"]["homology"] == "Z" for c in badcases)
    unavailable = runner.invoke(main, ["part6", "--n", "3", "--shape", "x2-iv"])
    assert unavailable.exit_code != 0


def test_coinv_direct_group():
    res = runner.invoke(main, ["coinv", "--group", "gl(2,2)"])
    assert res.exit_code == 0
    assert json.loads(res.output)["coinvariants"] == "0"
    res = runner.invoke(main, ["coinv", "--group", "borel(2,2)"])
    assert json.loads(res.output)["coinvariants"] == "Z"
    res = runner.invoke(main, ["coinv", "--group", "gl(2,2)", "--module", "trivial"])
    assert json.loads(res.output)["coinvariants"] == "Z"
    assert runner.invoke(main, ["coinv", "--group", "sp(4,2)"]).exit_code != 0


def test_building_subcommand_quick():
    res = runner.invoke(main, ["building", "--n", "2", "--q", "3"])
    assert res.exit_code == 0
    assert "all checks passed" in res.output


def test_failure_exit_code_and_exception_capture():
    def boom():
        raise RuntimeError("synthetic")

    specs = [CheckSpec("claim-a", "always explodes", 1, boom)]
    report = SuiteReport("demo", {}, [])
    result = None
    # route through the runner so exceptions become failing checks
    orig = reports.SUITES.get("demo")
    reports.SUITES["demo"] = lambda params: specs
    try:
        result = run_suite("demo")
    finally:
        if orig is None:
            del reports.SUITES["demo"]
        else:
            reports.SUITES["demo"] = orig
    assert not result.all_pass
    assert "RuntimeError" in result.checks[0].computed
    assert report.all_pass  # empty report passes vacuously


def test_every_registered_suite_has_specs():
    for name, factory in reports.SUITES.items():
        specs = factory({})
        assert specs, name
        assert all(isinstance(s, CheckSpec) for s in specs)
        slugs = [s.claim for s in specs]
        assert all(s == s.lower() and " " not in s for s in slugs), name
