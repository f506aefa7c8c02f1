import json

import pytest

from ramverify import bounds as B
from ramverify import verifier as V
from ramverify.cli import int_arg, main, parse_args
from ramverify.ramanujan_core import build_table, load_table


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def zeroed(text):
    docs = json.loads(text)
    for d in docs if isinstance(docs, list) else [docs]:
        d["elapsed_ms"] = 0
    return json.dumps(docs)


@pytest.mark.parametrize("text,value", [("688383", 688383), ("10^6", 10**6), ("2*10^6", 2 * 10**6),
                                        ("1e7", 10**7), ("1_000", 1000)])
def test_int_arg(text, value):
    assert int_arg(text) == value


def test_parse_args_config():
    cfg = parse_args(["verify", "corollary", "--n-min", "44", "--n-max", "100", "--workers", "3"])
    assert cfg.command == ("verify", "corollary")
    assert cfg.workers == 3 and cfg.format == "human"
    cfg = parse_args(["--format", "json", "check", "eq5", "--n", "10"])
    assert cfg.format == "json" and cfg.command == ("check",)
    assert parse_args(["--workers", "0", "threshold", "eq4"]).workers >= 1


@pytest.mark.parametrize("argv", [
    ["verify", "corollary", "--bogus"],
    ["verify", "corollary", "--n-min", "10"],
    ["verify", "classic", "--which", "nope"],
    ["verify", "dusart", "--side", "upper", "--k-min", "10", "--k-max", "20"],
    ["eval", "--func", "F", "--at", "100"],
    ["explore", "--epsilon", "0.5", "--j", "log(", "--cap", "10^5"],
    ["check", "eq5", "--n", "1"],
    [],
])
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_resource_limit(capsys):
    code, _, err = run(capsys, "table", "--n-max", "10^9")
    assert code == 3 and "MiB" in err


def test_resource_limit_env(capsys, monkeypatch):
    monkeypatch.setenv("RP_VERIFY_MEMORY_MB", "1")
    code, _, _ = run(capsys, "verify", "corollary", "--n-max", "200000")
    assert code == 3


def test_threshold(capsys):
    code, out, _ = run(capsys, "threshold", "eq4")
    assert code == 0 and out.strip() == "36735"
    code, out, _ = run(capsys, "--format", "json", "threshold", "eq4", "--eps2", "0.4")
    assert json.loads(out)["threshold"] == 36735


def test_corollary_json(capsys):
    code, out, _ = run(capsys, "verify", "corollary", "--n-max", "5000", "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert list(d) == ["name", "range", "checked", "passed", "failures", "near_ties", "tie_band",
                       "elapsed_ms", "params"]
    assert d["checked"] == 5000 - 43 and d["failures"] == []


def test_table_round_trip(capsys, tmp_path):
    f = tmp_path / "t.csv"
    code, _, _ = run(capsys, "table", "--n-max", "3000", "--out", str(f))
    assert code == 0
    assert load_table(f) == build_table(3000)
    code, out, _ = run(capsys, "--format", "json", "verify", "corollary", "--n-max", "3000",
                       "--table", str(f))
    assert code == 0
    integrity, coro = json.loads(out)
    assert integrity["name"] == "table-integrity" and integrity["failures"] == []
    in_process = V.verify_corollary(build_table(3000), B.BoundParams.corollary(), 44, 3000)
    coro["elapsed_ms"] = 0
    assert json.dumps(coro) == in_process.to_json(zero_elapsed=True)


def test_table_to_stdout(capsys):
    code, out, _ = run(capsys, "table", "--n-max", "3")
    assert code == 0 and out.splitlines()[2:] == ["1,2,1", "2,11,5", "3,17,7"]


def test_fault_injection(capsys, tmp_path):
    f = tmp_path / "t.csv"
    run(capsys, "table", "--n-max", "100", "--out", str(f))
    lines = f.read_text().split("\n")
    n, r, s = lines[51].split(",")
    lines[51] = f"{n},{int(r) - 1},{s}"  # R_50 decremented
    f.write_text("\n".join(lines))
    code, out, _ = run(capsys, "verify", "corollary", "--n-max", "100", "--table", str(f),
                       "--format", "csv")
    assert code == 1
    assert out.splitlines()[1].startswith("table-integrity,failure,50,")


def test_corrupt_table_is_input_error(capsys, tmp_path):
    f = tmp_path / "t.csv"
    f.write_text("# ramanujan-table v1 n_max=50 scan_bound=900\nn,r,s\n1,2,1\n")
    code, _, err = run(capsys, "verify", "corollary", "--n-max", "50", "--table", str(f))
    assert code == 2 and "rows" in err


def test_workers_identical(capsys):
    outs = []
    for w in ("1", "8"):
        code, out, _ = run(capsys, "--format", "json", "verify", "classic", "--which", "laishram",
                           "--n-max", "300000", "--workers", w)
        assert code == 0
        outs.append(zeroed(out))
    assert outs[0] == outs[1]


def test_classic_sn2014(capsys):
    code, out, _ = run(capsys, "verify", "classic", "--which", "sn2014", "--n-min", "242",
                       "--n-max", "20000")
    assert code == 0 and out.rstrip().endswith("PASS")


def test_dusart(capsys):
    code, _, _ = run(capsys, "verify", "dusart", "--side", "lower", "--k-max", "10^5")
    assert code == 0


def test_derivatives(capsys):
    assert run(capsys, "verify", "derivatives")[0] == 0
    code, out, _ = run(capsys, "verify", "derivatives", "--points", "1000,10^5,10^8",
                       "--rel-tol", "1e-12")
    assert code == 1 and "FAIL" in out


@pytest.mark.parametrize("what", ["eq5", "eq2", "eq7", "gneg"])
def test_check(capsys, what):
    assert run(capsys, "check", what)[0] == 0
    assert run(capsys, "check", what, "--samples", "688384,10^6,10^9")[0] == 0


def test_check_eq5_single(capsys):
    code, out, _ = run(capsys, "--format", "json", "check", "eq5", "--n", "688384")
    d = json.loads(out)
    assert code == 0 and d["checked"] == 1


def test_check_failing_sample(capsys):
    code, out, _ = run(capsys, "check", "eq5", "--n", "10", "--format", "csv")
    assert code == 1
    assert out.splitlines()[1].startswith("eq5,failure,10,")


def test_explore(capsys):
    code, out, err = run(capsys, "explore", "--epsilon", "0.5", "--j", "log(log(n))",
                         "--cap", "10^7")
    assert code == 0 and "EMPIRICAL" in err and "theorem-G-negative" in out


def test_explore_bad_j(capsys, caplog):
    code, out, _ = run(capsys, "explore", "--epsilon", "0.5", "--j", "-1", "--cap", "10^5")
    assert code == 1 and "FAIL hyp-j-positive" in out
    assert "hyp-j-positive" in caplog.text


def test_explore_with_table(capsys, tmp_path):
    f = tmp_path / "t.csv"
    run(capsys, "table", "--n-max", "20000", "--out", str(f))
    code, out, _ = run(capsys, "--format", "json", "explore", "--epsilon", "0.5",
                       "--j", "log(log(n)) - log(2) - 0.5", "--cap", "10^5", "--table", str(f))
    names = [d["name"] for d in json.loads(out)]
    assert code == 0 and names[0] == "table-integrity" and names[-1] == "theorem-s-below-alpha"


@pytest.mark.parametrize("argv,expected", [
    (["--func", "g", "--at", "44"], "3.28699952685"),
    (["--func", "G", "--at", "688383"], "-682433.857096"),
    (["--func", "F", "--at", "200000", "--n", "100000"], None),
    (["--func", "Uprime", "--at", "1e5"], None),
])
def test_eval(capsys, argv, expected):
    code, out, _ = run(capsys, "eval", *argv)
    assert code == 0
    if expected:
        assert out.strip() == expected


def test_out_flag(capsys, tmp_path):
    f = tmp_path / "r.json"
    code, out, _ = run(capsys, "check", "gneg", "--format", "json", "--out", str(f))
    assert code == 0 and out == ""
    assert [d["name"] for d in json.loads(f.read_text())] == ["G-negative", "Gprime-negative"]
