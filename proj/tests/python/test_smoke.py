"""Smoke tests for the _rqlsha extension module.

Usage: python3 test_smoke.py <dir-containing-_rqlsha>
"""
import json
import sys

if len(sys.argv) > 1:
    sys.path.insert(0, sys.argv[1])

import _rqlsha  # noqa: E402


def test_sha_vectors():
    assert (
        _rqlsha.sha256_hex(b"abc")
        == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
    )
    assert (
        _rqlsha.sha256_hex(b"")
        == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
    )


def test_cost_report_baseline():
    s = _rqlsha.Session()
    r = s.cost_report(adder="rca")
    assert abs(r["jj_system"] / 3.38e6 - 1.0) < 0.10
    assert abs(r["hashrate_hs"] / 0.661e9 - 1.0) < 1e-9
    assert 0.437 <= s.alpha() <= 0.446
    ksa = s.cost_report(adder="ksa")
    assert abs(ksa["hashrate_hs"] / r["hashrate_hs"] - 1.44) <= 0.05


def test_reproduce_t5():
    s = _rqlsha.Session()
    t = s.reproduce("T5")
    assert t["pass"], t["text"]


def test_reliability_dominance():
    s = _rqlsha.Session()
    grid = [1e-8, 1e-6]
    base = dict(s.reliability("baseline", grid))
    srm = dict(s.reliability("spare_redundant_mux", grid))
    for p in grid:
        assert srm[p] <= base[p]


def test_analyze_netlist():
    text = ".input a\n.input b\n.output s\ng1 XOR s a b\n"
    r = _rqlsha.analyze_netlist(text)
    assert r["gates"] == 1
    assert r["jj_system"] > r["jj_gate"]


def test_helpers():
    assert _rqlsha.csa_latency(32, 4) == 35
    assert abs(_rqlsha.mining_loss_probability(1.0) - 2 ** -32) < 1e-15
    json.loads(_rqlsha.default_cell_library_json())
    json.loads(_rqlsha.published_json())


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
                print(f"PASS {name}")
            except AssertionError as e:
                print(f"FAIL {name}: {e}")
                failures += 1
    sys.exit(1 if failures else 0)
