"""Command-line surface: round trips, exit codes, determinism, reports."""

import json
import os

import pytest

from mgsynth.cli import main


def run(args, capsys=None):
    code = main(args)
    return code


@pytest.fixture()
def ws(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def test_exact_round_trip(ws):
    assert run(["target", "random", "--n", "2", "--t-budget", "2", "--seed", "4",
                "-o", "m.json"]) == 0
    assert run(["exact", "m.json", "-o", "c.json"]) == 0
    assert run(["verify", "c.json", "m.json"]) == 0


def test_identity_exact_empty(ws):
    from mgsynth.somat import TransferMatrix

    with open("ident.json", "w") as fh:
        json.dump(TransferMatrix.identity(1).to_json_dict(), fh)
    assert run(["exact", "ident.json", "-o", "c.json"]) == 0
    data = json.load(open("c.json"))
    assert data["layers"] == [] and data["t_count"] == 0


def test_sat_search_and_unsat_exit(ws):
    assert run(["target", "random", "--n", "2", "--t-budget", "1", "--seed", "3",
                "-o", "m.json"]) == 0
    assert run(["sat", "m.json", "--search", "4", "-o", "c.json"]) == 0
    assert run(["verify", "c.json", "m.json"]) == 0
    data = json.load(open("m.json"))
    assert data["scale_k"] >= 1
    assert run(["sat", "m.json", "--depth", "0"]) == 4


def test_sat_maxsat(ws):
    assert run(["target", "random", "--n", "2", "--t-budget", "1", "--seed", "3",
                "-o", "m.json"]) == 0
    # find the optimum depth first, then minimize T count there
    assert run(["sat", "m.json", "--search", "4", "-o", "c0.json"]) == 0
    depth = len(json.load(open("c0.json"))["layers"])
    assert run(["sat", "m.json", "--depth", str(depth), "--maxsat", "-o", "c1.json"]) == 0
    assert run(["verify", "c1.json", "m.json"]) == 0


def test_approx_random_target(ws):
    assert run(["approx", "--random", "2", "--seed", "1", "--eps", "0.6",
                "-o", "c.json", "--ledger", "l.csv"]) == 0
    rows = open("l.csv").read().strip().splitlines()
    assert rows[0] == "n,m,eps_budget,eps_loc,eps_glob,rel_gap"
    vals = rows[1].split(",")
    assert float(vals[4]) <= float(vals[3]) + 1e-12


def test_approx_exhausted_exit(ws):
    assert run(["target", "haar", "--n", "2", "--seed", "9", "-o", "h.json"]) == 0
    assert run(["approx", "h.json", "--eps", "1e-9", "-o", "c.json"]) == 5


def test_verify_mismatch_exit(ws):
    assert run(["target", "random", "--n", "2", "--t-budget", "1", "--seed", "3",
                "-o", "m.json"]) == 0
    assert run(["target", "random", "--n", "2", "--t-budget", "2", "--seed", "8",
                "-o", "m2.json"]) == 0
    assert run(["exact", "m.json", "-o", "c.json"]) == 0
    assert run(["verify", "c.json", "m2.json"]) == 4


def test_analyze_outputs(ws, capsys):
    assert run(["target", "xx", "4", "-o", "xx.json"]) == 0
    assert run(["analyze", "xx.json", "-o", "a.json"]) == 0
    info = json.load(open("a.json"))
    assert info["special_orthogonal"] and info["k_max"] >= 1
    assert run(["exact", "xx.json", "-o", "c.json"]) == 0
    assert run(["analyze", "c.json", "-o", "b.json"]) == 0
    stats = json.load(open("b.json"))
    assert stats["t_depth"] >= info["t_depth_lb"]
    assert 0 < stats["stabilizer_entropy"] <= 1.0 + 1e-12


def test_io_and_domain_exit_codes(ws):
    open("bad.json", "w").write("{nope")
    assert run(["exact", "bad.json"]) == 1
    assert run(["exact", "missing.json"]) == 1
    assert run(["target", "haar", "--n", "2", "--seed", "0", "-o", "h.json"]) == 0
    assert run(["exact", "h.json"]) == 2
    assert run(["target", "xx", "5"]) == 2


def test_bad_depth_requests_exit_domain(ws):
    assert run(["target", "random", "--n", "2", "--t-budget", "2", "--seed", "1",
                "-o", "m.json"]) == 0
    k = json.load(open("m.json"))["scale_k"]
    assert k >= 1
    assert run(["sat", "m.json", "--search", str(k - 1)]) == 2
    assert run(["sat", "m.json", "--depth", "-1"]) == 2


def test_verify_dimension_mismatch(ws):
    assert run(["target", "random", "--n", "2", "--t-budget", "1", "--seed", "2",
                "-o", "m2.json"]) == 0
    assert run(["exact", "m2.json", "-o", "c2.json"]) == 0
    assert run(["target", "haar", "--n", "3", "--seed", "0", "-o", "h3.json"]) == 0
    assert run(["verify", "c2.json", "h3.json"]) == 4


def test_deterministic_outputs(ws):
    for _ in range(2):
        assert run(["target", "random", "--n", "3", "--t-budget", "3", "--seed", "11",
                    "-o", f"m.json"]) == 0
        os.rename("m.json", f"m_{_}.json")
    assert open("m_0.json", "rb").read() == open("m_1.json", "rb").read()
    for _ in range(2):
        assert run(["exact", "m_0.json", "-o", f"c_{_}.json"]) == 0
    assert open("c_0.json", "rb").read() == open("c_1.json", "rb").read()


def test_report_writes_csv_and_figures(ws):
    assert run(["report", "theorem2", "--out", "rep", "--sizes", "2",
                "--samples", "5", "--seed", "1"]) == 0
    assert os.path.exists("rep/theorem2.csv")
    assert os.path.exists("rep/theorem2.png")
    assert run(["report", "magic", "--out", "rep", "--sizes", "2",
                "--samples", "3", "--seed", "1"]) == 0
    assert os.path.exists("rep/magic.csv") and os.path.exists("rep/magic.png")
    header = open("rep/theorem2.csv").readline().strip()
    assert header == "n,eps_so,eps_spin,bound"


@pytest.mark.slow
def test_report_ledger_and_entanglement(ws):
    assert run(["report", "ledger", "--out", "rep", "--sizes", "2",
                "--samples", "2", "--eps", "0.1", "--seed", "0"]) == 0
    assert os.path.exists("rep/error_ledger.csv")
    assert os.path.exists("rep/error_ledger.png")
    assert run(["report", "entanglement", "--out", "rep",
                "--eps-list", "0.1", "--angles", "8"]) == 0
    assert os.path.exists("rep/entanglement.csv")
    assert os.path.exists("rep/entanglement.png")
