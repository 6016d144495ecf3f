"""Tests for the command-line front end and its file formats."""

import json

import numpy as np
import pytest

from urfock.cli import (
    ConfigError,
    RunConfig,
    load_config,
    main,
    parse_config_file,
    read_state_file,
    write_state_file,
)
from urfock.fock import StateVector, build_space


# --------------------------------------------------------------- config


def test_config_defaults_validate():
    cfg = RunConfig()
    cfg.validate()


def test_config_file_parsing(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# comment\nn_max = 3\ngrid-l = 6.0\n\ntol=1e-8\n")
    values = parse_config_file(str(path))
    assert values == {"n_max": 3, "grid_l": 6.0, "tol": 1e-8}


def test_config_unknown_key_rejected(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("bogus = 1\n")
    with pytest.raises(ConfigError):
        parse_config_file(str(path))


def test_config_env_var_and_flag_override(tmp_path, monkeypatch):
    import argparse

    env_cfg = tmp_path / "env.cfg"
    env_cfg.write_text("n_max = 7\ngrid_h = 0.25\n")
    monkeypatch.setenv("URFOCK_CONFIG", str(env_cfg))
    args = argparse.Namespace(config=None, n_max=2, grid_l=None, grid_h=None, tol=None, out=None)
    cfg = load_config(args)
    assert cfg.n_max == 2  # CLI flag wins
    assert cfg.grid_h == 0.25  # env-pointed file applies otherwise


def test_broken_tolerance_exits_2(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("tol = 0\n")
    assert main(["check", "--config", str(path)]) == 2


# ---------------------------------------------------------- state files


def test_state_file_round_trip(tmp_path):
    space = build_space(3)
    rng = np.random.default_rng(5)
    amp = rng.normal(size=space.dim) + 1j * rng.normal(size=space.dim)
    state = StateVector(space, amp / np.linalg.norm(amp), "ABCD")
    path = tmp_path / "state.txt"
    write_state_file(state, str(path))
    assert path.read_text().startswith("# urfock state v1 n_max=3\n")
    back = read_state_file(str(path))
    assert back.space.n_max == 3
    assert np.abs(back.amp - state.amp).max() <= 1e-15


def test_state_file_bad_header(tmp_path):
    path = tmp_path / "state.txt"
    path.write_text("not a state file\n")
    with pytest.raises(ConfigError):
        read_state_file(str(path))


def test_state_file_occupation_out_of_range(tmp_path):
    path = tmp_path / "state.txt"
    path.write_text("# urfock state v1 n_max=1\n1 1 0 0 1.0 0.0\n")
    with pytest.raises(ConfigError):
        read_state_file(str(path))


# ---------------------------------------------------------------- check


@pytest.fixture(scope="module")
def check_report(tmp_path_factory):
    out = tmp_path_factory.mktemp("check") / "report.jsonl"
    code = main(["check", "--out", str(out)])
    return code, out.read_bytes()


def test_check_passes(check_report):
    code, _ = check_report
    assert code == 0


def test_check_report_schema(check_report):
    _, raw = check_report
    lines = raw.decode().strip().split("\n")
    assert len(lines) >= 30
    for line in lines:
        rec = json.loads(line)
        assert set(rec) == {
            "id",
            "module",
            "status",
            "measured",
            "tolerance",
            "paper_anchor",
        }
        assert rec["status"] in ("pass", "fail", "info")
        if rec["tolerance"] is None:
            assert rec["status"] == "info"


def test_check_informational_entries_present(check_report):
    _, raw = check_report
    recs = [json.loads(l) for l in raw.decode().strip().split("\n")]
    infos = {r["id"] for r in recs if r["status"] == "info"}
    assert "associator-table-discrepancies" in infos
    assert "generator-closure-defect" in infos


def test_check_byte_identical_reports(check_report, tmp_path):
    _, raw = check_report
    out = tmp_path / "again.jsonl"
    assert main(["check", "--out", str(out)]) == 0
    assert out.read_bytes() == raw


def test_check_degenerate_space(tmp_path):
    out = tmp_path / "report.jsonl"
    assert main(["check", "--n-max", "0", "--out", str(out)]) == 0


# --------------------------------------------------------------- evolve


def _write_demo_state(tmp_path):
    space = build_space(2)
    amp = np.zeros(space.dim, dtype=np.complex128)
    amp[space.index((0, 0, 0, 0))] = 1.0 / np.sqrt(2)
    amp[space.index((1, 0, 1, 0))] = 1.0 / np.sqrt(2)
    path = tmp_path / "state.txt"
    write_state_file(StateVector(space, amp, "ABCD"), str(path))
    return path


def test_evolve_t0_reproduces_direct_export(tmp_path):
    from urfock.fock import change_basis_xyzn
    from urfock.spatial import Grid3, export_wavefield, state_to_wavefield

    state_path = _write_demo_state(tmp_path)
    prefix = str(tmp_path / "wf")
    code = main(
        [
            "evolve",
            str(state_path),
            "--times",
            "0",
            "--grid-l",
            "4.0",
            "--grid-h",
            "0.5",
            "--out",
            prefix,
        ]
    )
    assert code == 0
    direct = tmp_path / "direct.txt"
    s = change_basis_xyzn(read_state_file(str(state_path)), "ABCD->xyzn")
    export_wavefield(state_to_wavefield(s, Grid3(4.0, 0.5)), str(direct))
    assert (tmp_path / "wf_t0.txt").read_bytes() == direct.read_bytes()


def test_evolve_deterministic(tmp_path):
    state_path = _write_demo_state(tmp_path)
    args = [
        "evolve",
        str(state_path),
        "--times",
        "1.0",
        "--grid-l",
        "4.0",
        "--grid-h",
        "0.5",
    ]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    assert (tmp_path / "a_t1.txt").read_bytes() == (tmp_path / "b_t1.txt").read_bytes()


def test_evolve_missing_state_file(tmp_path):
    assert main(["evolve", str(tmp_path / "nope.txt")]) == 2


# ------------------------------------------------------ spectrum / tables


def test_spectrum_matches_energy_eigenvalues(tmp_path, capsys):
    from urfock.modeops import build_quadratures

    assert main(["spectrum", "--n-max", "2"]) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    q = build_quadratures(build_space(2))
    expect = np.sort(np.sqrt(np.where(q.e2_eigvals < 0, 0, q.e2_eigvals)))
    got = np.array([float(x) for x in lines])
    assert len(got) == q.space.dim
    assert np.abs(got - expect).max() <= 1e-12


def test_tables_positive_triple_lines(capsys):
    assert main(["tables"]) == 0
    out = capsys.readouterr().out
    triples = [l for l in out.split("\n") if l.startswith("eps3(")]
    assert len(triples) == 7
    assert "# discrepancies vs the quoted four-index list" in out


# ----------------------------------------------------------- gravity-eval


def _write_spec(path, spinor_rows):
    lines = [f"{k} = {v}" for k, v in spinor_rows.items()]
    path.write_text("\n".join(lines) + "\n")


def test_gravity_eval_zero_spinors_zero_norms(tmp_path, capsys):
    spec = tmp_path / "g.spec"
    _write_spec(spec, {k: "0 0 0 0" for k in ("u1", "u2", "v1", "v2")})
    assert main(["gravity-eval", "--n-max", "1"] + [str(spec)] * 4) == 0
    recs = [json.loads(l) for l in capsys.readouterr().out.strip().split("\n")]
    assert len(recs) == 16
    assert all(r["norm"] == 0.0 for r in recs)


def test_gravity_eval_report_round_trip(tmp_path):
    spec = tmp_path / "g.spec"
    _write_spec(
        spec,
        {"u1": "1 0 0 0", "u2": "0 0 1 0", "v1": "1 0 0 0", "v2": "0 1 0 0"},
    )
    out = tmp_path / "report.jsonl"
    assert (
        main(["gravity-eval", "--n-max", "1", "--out", str(out)] + [str(spec)] * 4)
        == 0
    )
    recs = [json.loads(l) for l in out.read_text().strip().split("\n")]
    assert {(r["mu"], r["nu"]) for r in recs} == {
        (m, n) for m in range(4) for n in range(4)
    }
    assert any(r["norm"] > 0 for r in recs)


def test_gravity_eval_bad_spec(tmp_path):
    spec = tmp_path / "g.spec"
    spec.write_text("u1 = 1 0\n")
    assert main(["gravity-eval"] + [str(spec)] * 4) == 2
