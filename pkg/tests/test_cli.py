import pytest
from hypothesis import given
from hypothesis import strategies as st

from twoholes import cli


def _run(argv, tmp_path):
    return cli.main(list(argv) + ["--out", str(tmp_path)])


def test_bench_table1_outputs(tmp_path):
    assert _run(["bench", "table1", "--levels", "2"], tmp_path) == 0
    d = tmp_path / "bench_table1"
    assert (d / "table1.csv").read_text().splitlines()[0] == "geometry,r,level,nodes,triangles,lambda1,walltime_s"
    assert "levels=2" in (d / "config.txt").read_text()
    assert "strictly decreasing" in (d / "report.txt").read_text()


def test_config_replay_is_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert _run(["solve", "--branch", "opposite", "--r", "0.09", "--levels", "2"], a) == 0
    cfg = a / "solve" / "config.txt"
    assert cli.main(["--config", str(cfg), "--out", str(b)]) == 0
    assert (a / "solve" / "solve.csv").read_bytes() == (b / "solve" / "solve.csv").read_bytes()


def test_flags_override_config(tmp_path):
    cfg = tmp_path / "c.txt"
    cfg.write_text("command='mesh'\nbranch='cluster'\nlevels=1\n# comment\n")
    rc = cli.resolve(["--config", str(cfg), "--levels", "2"])
    assert rc.command == "mesh" and rc.branch == "cluster" and rc.levels == 2


def test_env_output_root(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUT_ENV, str(tmp_path))
    assert cli.main(["cell", "jinf"]) == 0
    assert (tmp_path / "cell_jinf" / "report.txt").exists()


def test_mesh_command(tmp_path):
    assert _run(["mesh", "--branch", "adjacent", "--levels", "1"], tmp_path) == 0
    d = tmp_path / "mesh"
    assert (d / "mesh.svg").read_text().startswith("<svg")
    assert "hole1=" in (d / "geometry.txt").read_text()


def test_execution_error_exit_code(tmp_path, capsys):
    assert _run(["solve", "--branch", "adjacent", "--r", "0.7"], tmp_path) == 1
    assert "error" in capsys.readouterr().err


def test_usage_errors():
    with pytest.raises(SystemExit):
        cli.resolve(["bench"])
    with pytest.raises(SystemExit):
        cli.resolve(["bench", "nope"])
    with pytest.raises(SystemExit):
        cli.resolve(["solve", "--levels", "x"])


def test_bad_config_key(tmp_path):
    cfg = tmp_path / "c.txt"
    cfg.write_text("colour=1\n")
    with pytest.raises(ValueError):
        cli.read_config(cfg)


@given(
    st.sampled_from(["adjacent", "opposite", "cluster", "opp_side"]),
    st.floats(0.01, 0.2),
    st.integers(1, 4),
    st.booleans(),
)
def test_echo_roundtrip(branch, r, levels, timing):
    cfg = cli.RunConfig(command="solve", branch=branch, r=r, levels=levels, timing=timing)
    parsed = {}
    for line in cfg.echo().splitlines():
        k, v = line.split("=", 1)
        parsed[k] = cli._coerce(k, v)
    assert cli.RunConfig(**parsed) == cli.RunConfig(**{**cfg.__dict__, "out": ""})
