import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qonsager.cli import EXIT_BUDGET, EXIT_CONFIG, main
from qonsager.config import SUITES, SuiteConfig, loads
from qonsager.errors import ConfigError

rationals = st.builds(Fraction, st.integers(-50, 50).filter(bool), st.integers(1, 9)).filter(lambda x: abs(x) != 1)

configs = st.builds(
    SuiteConfig,
    suite=st.sampled_from(SUITES) | st.none(),
    bindings=st.dictionaries(st.sampled_from(["q", "v", "k+", "k-", "e+", "e-"]), rationals, max_size=4),
    spins=st.lists(st.integers(0, 4), min_size=1, max_size=3).map(tuple) | st.none(),
    degree=st.integers(0, 6),
    fuel=st.integers(1, 10**6),
    window=st.integers(1, 9),
    points=st.integers(1, 5),
    seed=st.integers(0, 99),
)


@given(configs)
def test_config_round_trip(cfg):
    again = loads(cfg.dumps())
    assert again == cfg
    assert again.digest() == cfg.digest()


def test_digest_ignores_output_path():
    a = SuiteConfig(suite="aw3-fit", out="x")
    assert a.digest() == a.with_overrides(out="y").digest()
    assert a.digest() != a.with_overrides(seed=1).digest()


@pytest.mark.parametrize(
    "text",
    [
        "colour = red",
        "degree = 2\ndegree = 3",
        "degree = three",
        "bind.w = 1",
        "bind.q = q",
        "suite = everything",
        "spins = 1, -1",
        "fuel =",
        "just words",
    ],
)
def test_bad_config_rejected(text):
    with pytest.raises(ConfigError):
        loads(text)


def test_comments_and_blank_lines():
    cfg = loads("# header\n\nsuite = aw3-fit  # trailing\nbind.q = 3/2\n")
    assert cfg.suite == "aw3-fit" and cfg.bindings == {"q": Fraction(3, 2)}


def run(tmp_path, *args, config=None):
    argv = ["verify", *args, "--out", str(tmp_path / "out"), "--reproducible"]
    if config is not None:
        path = tmp_path / "suite.cfg"
        path.write_text(config)
        argv += ["--config", str(path)]
    return main(argv)


def test_verified_suite_writes_manifest(tmp_path, capsys):
    assert run(tmp_path, "classical-onsager") == 0
    out = tmp_path / "out"
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["suite"] == "classical-onsager"
    assert manifest["verdict"] == "Verified" and manifest["exit_status"] == 0
    assert "timestamp" not in manifest
    assert set(manifest["versions"]) == {"qonsager", "python"}
    assert manifest["config_hash"] == SuiteConfig(suite="classical-onsager").digest()
    for item in manifest["certificates"]:
        cert = json.loads((out / item["file"]).read_text())
        assert cert["verdict"] == item["verdict"]
    assert "Verified" in capsys.readouterr().out


def test_wrong_rho_exits_failed(tmp_path):
    assert run(tmp_path, "qdg-coideal", config="rho = 1\nspins = 1\n") == 1


def test_bound_point_still_verifies(tmp_path):
    cfg = "bind.q = 2\nbind.v = 3\nbind.k+ = 1/3\nbind.e- = 5\nspins = 1\n"
    assert run(tmp_path, "qdg-coideal", config=cfg) == 0
    assert run(tmp_path, "aw3-fit", config=cfg) == 0


def test_incomplete_rewriting_is_inconclusive(tmp_path):
    assert run(tmp_path, "rewrite-zero") == 2


def test_config_errors(tmp_path):
    assert run(tmp_path, "qdg-coideal", config="colour = red\n") == EXIT_CONFIG
    assert run(tmp_path, "qdg-coideal", config="suite = aw3-fit\n") == EXIT_CONFIG
    assert main(["verify", "nonsense"]) == EXIT_CONFIG
    assert run(tmp_path, "qdg-coideal", "--jobs", "0") == EXIT_CONFIG
    # q = 1 is a pole of the bracket denominators
    assert run(tmp_path, "aw3-fit", config="bind.q = 1\n") in (EXIT_CONFIG, 2)


def test_budget_exit(tmp_path):
    assert run(tmp_path, "davies-kernel", "--degree", "11") == EXIT_BUDGET


def test_parallel_output_is_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["verify", "augmented-coideal", "--out", str(a), "--reproducible"]) == 0
    assert main(["verify", "augmented-coideal", "--out", str(b), "--reproducible", "--jobs", "4"]) == 0
    names = sorted(p.name for p in a.iterdir())
    assert names == sorted(p.name for p in b.iterdir())
    for n in names:
        assert (a / n).read_bytes() == (b / n).read_bytes()


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "qonsager.cli", "verify", "classical-onsager", "--out", str(tmp_path)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert "certificates" in proc.stdout
