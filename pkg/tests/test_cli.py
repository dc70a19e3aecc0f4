import json

import pytest

from copematch.cli import main

from conftest import DATA


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


@pytest.fixture
def cover(tmp_path):
    p = tmp_path / "h.txt"
    p.write_text("p vc 2 1\ne 1 2\n")
    return p


def test_enumerate_four_agents(capsys):
    code, doc, _ = run(capsys, "enumerate", DATA / "four_agents.txt", "--flags")
    assert code == 0
    res = doc["result"]
    assert res["mu"] == 10 and res["max_alpha_score"] == "17/2"
    assert sorted(res["popular"]) == [[["a", "c"], ["b", "d"]], [["a", "d"], ["b", "c"]]]
    rows = res["matchings"]
    assert not any(r["stable"] for r in rows)
    assert all((r["unpopularity_margin"] == 0) == r["popular"] for r in rows)
    m = doc["manifest"]
    assert m["command"] == "enumerate" and len(m["input_sha256"]) == 64


def test_enumerate_counts(capsys):
    assert run(capsys, "enumerate", DATA / "odd_cycle.txt")[1]["result"]["mu"] == 4
    k33 = run(capsys, "enumerate", DATA / "k33.txt", "--summary-only")[1]["result"]
    assert k33["mu"] == 34 and k33["popular"] == []


def test_elect(capsys, tmp_path):
    m = tmp_path / "m.txt"
    m.write_text("match v1\n1 - 2\n")
    code, doc, _ = run(capsys, "elect", DATA / "odd_cycle.txt", m, "none")
    assert code == 0 and doc["result"]["delta"] == 2


def test_fpras_exact_uniform(capsys):
    code, doc, _ = run(capsys, "fpras", DATA / "odd_cycle.txt", "--epsilon", "0.2",
                       "--exact-uniform", "--trials", "20")
    assert code == 0
    trials = doc["result"]["trials"]
    assert all(t["half_k_bound_ok"] for t in trials)
    assert doc["manifest"]["seeds"] == list(range(20))
    assert sum(t["oracle_score"] == "5/2" for t in trials) >= 19


def test_fpras_rejects_zero_epsilon(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["fpras", str(DATA / "odd_cycle.txt"), "--epsilon", "0"])
    assert exc.value.code == 2


def test_wtscore(capsys, tmp_path):
    single = tmp_path / "s.txt"
    single.write_text("instance v1\nu: v\nv: u\n")
    code, doc, _ = run(capsys, "wtscore", single)
    assert doc["result"]["matching"] == [["u", "v"]] and doc["result"]["wt_score"] == "1"
    empty = tmp_path / "e.txt"
    empty.write_text("instance v1\na:\nb:\n")
    code, doc, err = run(capsys, "wtscore", empty)
    assert doc["result"]["matching"] == [] and doc["result"]["wt_score"] == "0"
    assert "empty preference list" in err
    code, doc, _ = run(capsys, "wtscore", DATA / "odd_cycle.txt", "--mode", "apx", "--exact-uniform",
                       "--samples", "5000", "--trials", "4")
    assert doc["result"]["within_rate"] == "1"


def test_reduce_and_certify(capsys, cover, tmp_path):
    out = tmp_path / "inst.txt"
    code, doc, _ = run(capsys, "reduce", cover, "--instance-out", out, "--map-out", tmp_path / "map.json")
    assert code == 0 and doc["result"]["vertices"] == 222
    assert out.read_text().startswith("instance v1")
    code, doc, _ = run(capsys, "certify", cover, "--blue", "1,2")
    run_ = doc["result"]["assignments"][0]
    assert code == 0 and run_["objective"] == 0 and run_["inter_gadget_slack_ok"]
    code, doc, _ = run(capsys, "certify", cover, "--blue", "")
    assert code == 1 and doc["result"]["assignments"][0]["refused"]


def test_certify_needs_states(capsys, cover):
    with pytest.raises(SystemExit) as exc:
        main(["certify", str(cover)])
    assert exc.value.code == 2


def test_verify_gadgets(capsys, cover):
    code, doc, _ = run(capsys, "verify-gadgets", cover, "--aux", "1", "--red-red")
    assert code == 0 and doc["result"]["ok"]
    assert all(c["all_confirmed"] for c in doc["result"]["red_red_witnesses"]["1,2"].values())


def test_sample_diag(capsys):
    code, doc, _ = run(capsys, "sample-diag", DATA / "odd_cycle.txt", "--samples", "5000")
    assert code == 0 and doc["result"]["tv_float"] < 0.05


def test_random_is_reproducible(capsys):
    a = run(capsys, "random", "--n", "5", "--seed", "9")[1]["result"]["instance"]
    b = run(capsys, "random", "--n", "5", "--seed", "9")[1]["result"]["instance"]
    assert a == b


def test_reports_identical_apart_from_duration(capsys):
    argv = ("fpras", DATA / "four_agents.txt", "--epsilon", "1/2", "--seed", "4")
    a = run(capsys, *argv)[1]
    b = run(capsys, *argv)[1]
    for d in (a, b):
        d["manifest"].pop("duration_seconds")
    assert a == b


def test_jobs_do_not_change_results(capsys):
    argv = ("fpras", DATA / "k33.txt", "--epsilon", "1/2", "--include-samples")
    a = run(capsys, *argv, "--jobs", "1")[1]["result"]
    b = run(capsys, *argv, "--jobs", "3")[1]["result"]
    assert a == b


def test_exit_codes(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("nonsense\n")
    assert run(capsys, "enumerate", bad)[0] == 3
    assert run(capsys, "enumerate", tmp_path / "missing.txt")[0] == 3
    assert run(capsys, "enumerate", DATA / "k33.txt", "--budget", "5")[0] == 4


def test_out_file(capsys, tmp_path):
    target = tmp_path / "r.json"
    assert run(capsys, "enumerate", DATA / "odd_cycle.txt", "--out", target)[0] == 0
    assert json.loads(target.read_text())["result"]["mu"] == 4


def test_module_entry_point():
    import subprocess
    import sys
    out = subprocess.run([sys.executable, "-m", "copematch", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.startswith("copematch ")
