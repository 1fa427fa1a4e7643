import json
import os
import subprocess

import pytest

mnetcode = pytest.importorskip("mnetcode")


def test_version_string():
    assert mnetcode.version() == mnetcode.__version__
    assert mnetcode.__version__.count(".") == 2


def test_generated_network_shape():
    net = json.loads(mnetcode.gen_network(2))
    assert len(net["nodes"]) == 13
    assert len(net["edges"]) == 20
    assert len(net["demands"]) == 4
    assert mnetcode.validate_network(json.dumps(net)) == []


def test_routing_code_verifies_and_passes_the_ledger():
    net = mnetcode.gen_network(3)
    code = mnetcode.routing_code(3, 2)
    verdict = json.loads(mnetcode.verify(net, code))
    assert verdict["solution"] is True
    assert len(verdict["terminals"]) == 27
    report = json.loads(mnetcode.ledger(net, code))
    assert report["summary"]["all_pass"] is True
    assert all(g == 5 for row in report["final"]["g_values"] for g in row)


def test_scalar_search_exhausts_the_small_network():
    cert = json.loads(mnetcode.search(mnetcode.gen_network(2), p=2, d=1))
    assert cert["outcome"] == "exhausted_none"
    assert cert["enumerated"] == 256
    assert "code" not in cert


def test_search_respects_budgets():
    cert = json.loads(mnetcode.search(mnetcode.gen_network(2), p=3, d=1, budget=10))
    assert cert["outcome"] == "inconclusive"
    assert cert["enumerated"] == 10


def test_rank_table_utilities_round_trip():
    table = mnetcode.from_subspaces(2, [[[1, 0]], [[0, 1]], [[1, 1]]])
    report = json.loads(mnetcode.check_axioms(table))
    assert report["ok"] is True
    assert mnetcode.rho_max(table) == 1
    assert mnetcode.membership([1, 1, 0], table) is True
    assert mnetcode.membership([1, 1, 1], table) is False


def test_terminal_indexing_is_a_bijection():
    seen = set()
    for k in range(1, 28):
        tup = mnetcode.terminal_tuple(3, k)
        assert mnetcode.tuple_terminal(3, tup) == k
        seen.add(tuple(tup))
    assert len(seen) == 27


def test_induced_ranks_match_the_code():
    net = mnetcode.gen_network(2)
    code = mnetcode.routing_code(2, 2)
    assert mnetcode.rank_of(net, code, [("source", "X_1_1")]) == 2
    assert mnetcode.rank_of(net, code, [("edge", "e_1_1")]) == 2
    assert (
        mnetcode.rank_of(net, code, [("source", "X_1_1"), ("source", "X_1_2"), ("edge", "e_1_1")])
        == 4
    )
    with pytest.raises(ValueError):
        mnetcode.rank_of(net, code, [("bogus", "X_1_1")])


@pytest.mark.skipif("MNET_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_manifests_replay_identically(tmp_path):
    cli = os.environ["MNET_CLI"]
    out = tmp_path / "net.json"

    def run_once():
        subprocess.run([cli, "gen", "--m", "2", "-o", str(out)], check=True, capture_output=True)
        manifest = json.loads((out.parent / (out.name + ".manifest.json")).read_text())
        return out.read_bytes(), manifest

    bytes_a, man_a = run_once()
    bytes_b, man_b = run_once()
    assert bytes_a == bytes_b
    assert man_a.pop("wall_ms") >= 0
    assert man_b.pop("wall_ms") >= 0
    assert man_a == man_b
    assert man_a["tool"]["name"] == "mnetcode"
    assert man_a["outcome"]["nodes"] == 13


@pytest.mark.skipif("MNET_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_and_module_agree_on_the_network(tmp_path):
    cli = os.environ["MNET_CLI"]
    proc = subprocess.run([cli, "gen", "--m", "2"], check=True, capture_output=True, text=True)
    assert json.loads(proc.stdout) == json.loads(mnetcode.gen_network(2))
