import json
import subprocess
import sys

import pytest

from titslab.cache import ENV_VAR, Cache
from titslab.cli import main, run_command


def run(*argv):
    return run_command(list(argv))


def test_product_needs_declared_support():
    code, out = run("product", "--n", "5", "3,6,7|5,8", "8|6,7|3|5")
    assert code == 2
    assert "outside declared support" in out
    code, out = run("product", "--support", "3,5,6,7,8", "3,6,7|5,8", "8|6,7|3|5")
    assert (code, out) == (0, "6,7|3|8|5")


def test_product_json():
    code, out = run("product", "--n", "3", "1,2|3", "1,3|2", "--format", "json")
    assert json.loads(out)["product"] == "1|2|3"


def test_cartan_json(tmp_path):
    code, out = run("cartan", "--n", "3", "--format", "json", "--cache-dir", str(tmp_path))
    assert code == 0
    obj = json.loads(out)
    assert obj["labels"] == ["1,2,3", "1|2,3", "1,2|3", "1,3|2", "1|2|3"]
    assert obj["rows"][0] == ["1", "1", "1", "1", "2"]
    assert all(isinstance(x, str) for row in obj["rows"] for x in row)


def test_cartan_rank_mode_same_output():
    a = run("cartan", "--n", "4", "--no-cache")
    b = run("cartan", "--n", "4", "--no-cache", "--strict-oracle")
    assert a == b and a[0] == 0


def test_verify_core_passes():
    code, out = run("verify", "--n", "4", "--suite", "core", "--quiet")
    assert code == 0
    assert out.count("PASS") == 8 and "8/8 passed" in out


def test_verify_single_criterion():
    code, out = run("verify", "--suite", "c1", "--quiet")
    assert code == 0 and out.splitlines()[0].startswith("PASS  c1")


def test_verify_unknown_suite():
    assert run("verify", "--suite", "nope")[0] == 2


def test_verify_failure_exit_code(monkeypatch):
    from titslab import verify
    monkeypatch.setitem(verify.CRITERIA, "c1", ("broken", lambda n, field: verify.CheckResult(False, "x")))
    code, out = run("verify", "--suite", "c1", "--quiet")
    assert code == 1 and out.startswith("FAIL")


def test_usage_errors():
    assert run()[0] == 2
    assert run("frobnicate")[0] == 2
    assert run("enumerate", "--char", "4")[0] == 0  # enumerate never touches the field
    assert run("idempotent", "--char", "4")[0] == 2
    assert run("product", "--n", "2", "1|1,2", "1|2")[0] == 2
    assert run("product", "--n", "3", "1|2", "1|2,3")[0] == 2


def test_cap_exceeded():
    code, out = run("enumerate", "--n", "12")
    assert code == 3 and "cap" in out
    assert run("enumerate", "--n", "5", "--cap", "4")[0] == 3
    assert run("solomon", "xi", "--n", "6", "--group-cap", "5")[0] == 3


def test_enumerate_and_basis():
    code, out = run("enumerate", "--n", "2")
    assert out.splitlines() == ["1,2", "1|2", "2|1"]
    code, out = run("basis", "--n", "3", "1,2|3")
    assert out == "e(1,2|3) = +1 (1,2|3) -1 (1|2|3)"
    code, out = run("idempotent", "--support", "1,2", "--format", "json")
    assert json.loads(out) == {"char": 0, "terms": [{"sc": "1,2", "num": "1", "den": "1"},
                                                    {"sc": "1|2", "num": "-1", "den": "1"}]}


def test_quiver_and_loewy():
    code, out = run("quiver", "--n", "3")
    lines = out.splitlines()
    assert lines[0] == "digraph {" and lines[-1] == "}"
    assert sum("->" in l for l in lines) == 6
    code, out = run("quiver", "--n", "3", "--format", "json")
    assert len(json.loads(out)["edges"]) == 6
    assert run("loewy", "--n", "4") == (0, "75 60 29 6 0")
    code, out = run("loewy", "--n", "3", "--label", "1|2|3", "--format", "json")
    assert json.loads(out)["layers"][2] == {"1,2,3": "2"}


@pytest.mark.parametrize("what", ["basis", "radical", "omega", "xi", "cartan", "bidigare", "loewyfix"])
def test_solomon_subcommands(what):
    code, out = run("solomon", what, "--n", "3")
    assert code == 0 and out
    code, out = run("solomon", what, "--n", "3", "--format", "json")
    assert code == 0 and json.loads(out) is not None


def test_solomon_outputs():
    assert run("solomon", "radical", "--n", "4", "--char", "2")[1].endswith("codim = 2")
    obj = json.loads(run("solomon", "omega", "--n", "2", "--format", "json")[1])
    assert obj == {"(2)": "2", "(1,1)": "-1"}


def test_outputs_deterministic():
    for argv in (["cartan", "--n", "4", "--no-cache"], ["quiver", "--n", "4"], ["solomon", "xi", "--n", "4"]):
        assert run(*argv) == run(*argv)
    assert run("cartan", "--n", "4", "--strict-oracle", "--workers", "2", "--no-cache") == \
        run("cartan", "--n", "4", "--strict-oracle", "--no-cache")


def test_main_streams(capsys):
    assert main(["product", "--n", "3", "1,2|3", "1,3|2"]) == 0
    assert capsys.readouterr().out == "1|2|3\n"
    assert main(["enumerate", "--n", "20"]) == 3
    assert "cap" in capsys.readouterr().err


def test_console_script_module():
    proc = subprocess.run([sys.executable, "-m", "titslab.cli", "product", "--n", "2", "1|2", "1,2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "1|2\n"


# -- cache ---------------------------------------------------------------------------------------

def test_cache_second_call_hits(tmp_path, caplog):
    first = run("cartan", "--n", "5", "--cache-dir", str(tmp_path), "-v")
    files = list(tmp_path.glob("*.json"))
    assert len(files) == 1
    second = run("cartan", "--n", "5", "--cache-dir", str(tmp_path), "-v")
    assert first == second
    assert "served from cache" in caplog.text


def test_cache_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv(ENV_VAR, str(tmp_path))
    run("cartan", "--n", "3")
    assert len(list(tmp_path.glob("*.json"))) == 1


def test_cache_poisoned_entry_recomputed(tmp_path):
    cache = Cache(tmp_path)
    calls = []

    def compute():
        calls.append(1)
        return "payload"

    assert cache.get_or_compute("op", {"a": 1}, compute) == ("payload", False)
    (path,) = tmp_path.glob("*.json")
    entry = json.loads(path.read_text())
    entry["payload"] = "tampered"
    path.write_text(json.dumps(entry))
    assert cache.get_or_compute("op", {"a": 1}, compute) == ("payload", False)
    assert cache.get_or_compute("op", {"a": 1}, compute) == ("payload", True)
    assert len(calls) == 2
    path.write_text("not json")
    assert cache.get_or_compute("op", {"a": 1}, compute) == ("payload", False)


def test_cache_version_bump_misses(tmp_path):
    Cache(tmp_path, version="1").get_or_compute("op", {}, lambda: "old")
    assert Cache(tmp_path, version="2").get_or_compute("op", {}, lambda: "new") == ("new", False)
    assert Cache(tmp_path, version="1").get_or_compute("op", {}, lambda: "x") == ("old", True)


def test_cache_unwritable_degrades(tmp_path, caplog):
    blocker = tmp_path / "file"
    blocker.write_text("")
    cache = Cache(blocker / "sub")
    assert cache.get_or_compute("op", {}, lambda: "v") == ("v", False)
    assert "cache write failed" in caplog.text


def test_no_cache_dir():
    assert Cache(None).get_or_compute("op", {}, lambda: "v") == ("v", False)
