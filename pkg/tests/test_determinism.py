"""Reports are pure functions of their inputs: byte-identical across runs and worker counts."""
import json
import subprocess
import sys

import pytest

from linnikpair.search import mitm_find, pair_find


def _verify_all(tmp_path, name, *extra):
    out = tmp_path / name
    proc = subprocess.run([sys.executable, "-m", "linnikpair", "verify-all", "--json", str(out), *extra],
                          capture_output=True, text=True, timeout=600)
    assert proc.returncode in (0, 1), proc.stderr
    return proc, out.read_bytes()


@pytest.fixture(scope="module")
def serial_run(tmp_path_factory):
    return _verify_all(tmp_path_factory.mktemp("det"), "a.json")


def test_verify_all_repeatable(serial_run, tmp_path):
    proc_a, a = serial_run
    proc_b, b = _verify_all(tmp_path, "b.json")
    assert a == b
    assert proc_a.stdout == proc_b.stdout
    assert proc_a.returncode == proc_b.returncode


def test_verify_all_worker_count_invariant(serial_run, tmp_path):
    _, a = serial_run
    _, b = _verify_all(tmp_path, "w.json", "--workers", "2")
    assert a == b


def test_verify_all_json_is_canonical(serial_run):
    _, a = serial_run
    doc = json.loads(a)
    assert a.decode().rstrip("\n") == json.dumps(doc, indent=2, sort_keys=True)
    assert doc["gate"]["minimal_k"] == 56


def test_search_witnesses_repeatable():
    ns = [10**6 - 2 * i for i in range(20)]
    first = [mitm_find(n).to_dict() for n in ns]
    again = [mitm_find(n).to_dict() for n in ns]
    assert first == again


def test_pair_search_repeatable():
    a = pair_find(10**6 + 2, 10**6, 56, 20, max_multisets=200)
    b = pair_find(10**6 + 2, 10**6, 56, 20, max_multisets=200)
    assert a is not None and a == b
