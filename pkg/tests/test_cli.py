import json

import pytest

from akh.cli import (
    CliInputError,
    RunConfig,
    main,
    parse_args,
    render_diamond,
    run,
    thread_cap,
)
from akh.harmonic import ell_diamond
from akh.model import catalog, save_model


# ---------------------------------------------------------------------------
# configuration plumbing


def test_run_config_requires_one_source():
    with pytest.raises(CliInputError):
        RunConfig(command="diamond")
    with pytest.raises(CliInputError):
        RunConfig(command="diamond", catalog="torus2", model_path="x.json")
    RunConfig(command="diamond", catalog="torus2")


def test_run_config_rejects_unknown_command_and_format():
    with pytest.raises(CliInputError):
        RunConfig(command="explode", catalog="torus2")
    with pytest.raises(CliInputError):
        RunConfig(command="diamond", catalog="torus2", format="yaml")


def test_parse_args_round_trip():
    config = parse_args(["diamond", "--catalog", "torus4", "--format", "json"])
    assert config == RunConfig(command="diamond", catalog="torus4",
                               format="json")
    config = parse_args(["report", "--model", "foo.json", "-v"])
    assert config.model_path == "foo.json"
    assert config.verbosity == 1


def test_parse_args_rejects_bad_flags():
    with pytest.raises(CliInputError):
        parse_args(["diamond", "--catalog", "torus2", "--bogus"])
    with pytest.raises(CliInputError):
        parse_args(["diamond"])
    with pytest.raises(CliInputError):
        parse_args(["not_a_command", "--catalog", "torus2"])


def test_thread_cap(monkeypatch):
    monkeypatch.delenv("AKH_THREADS", raising=False)
    assert thread_cap() == 1
    monkeypatch.setenv("AKH_THREADS", "4")
    assert thread_cap() == 4
    monkeypatch.setenv("AKH_THREADS", "zero")
    with pytest.raises(CliInputError):
        thread_cap()
    monkeypatch.setenv("AKH_THREADS", "0")
    with pytest.raises(CliInputError):
        thread_cap()


def test_thread_cap_env_accepted_end_to_end(monkeypatch, capsys):
    monkeypatch.setenv("AKH_THREADS", "2")
    assert main(["betti", "--catalog", "torus2"]) == 0
    monkeypatch.setenv("AKH_THREADS", "-3")
    assert main(["betti", "--catalog", "torus2"]) == 1
    assert "AKH_THREADS" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# diamond rendering


def test_render_diamond_triangle():
    dia = ell_diamond(catalog("kodaira_thurston"))
    text = render_diamond(dia, "text")
    assert text.splitlines() == [
        "  1",
        " 1 1",
        "0 3 0",
        " 1 1",
        "  1",
    ]


def test_render_diamond_torus4_middle_row():
    dia = ell_diamond(catalog("torus4"))
    lines = render_diamond(dia, "text").splitlines()
    assert lines[2].strip() == "1 4 1"


def test_render_diamond_json_grid():
    dia = ell_diamond(catalog("filiform4_Jprime"))
    data = json.loads(render_diamond(dia, "json"))
    assert data["rows"][2] == [0, 2, 0]
    assert data["flags"]["lefschetz_ok"] is True


# ---------------------------------------------------------------------------
# exit codes


def test_validate_clean_model_exits_zero(capsys):
    assert main(["validate", "--catalog", "torus4"]) == 0
    out = capsys.readouterr().out
    assert "structure_ok: true" in out
    assert "jacobi_ok: true" in out


def test_identities_clean_exits_zero(capsys):
    assert main(["identities", "--catalog", "kodaira_thurston"]) == 0
    assert "all identities hold" in capsys.readouterr().out


def test_identities_on_nonclosed_model_exits_zero(capsys):
    # failures are findings, not errors, when the model never claimed
    # a closed fundamental form
    assert main(["identities", "--catalog", "h5_J"]) == 0
    out = capsys.readouterr().out
    assert "lap_cross" in out
    assert "FAIL" in out


def test_obstructions_exit_two_on_h5(capsys):
    assert main(["obstructions", "--catalog", "h5_J"]) == 2
    out = capsys.readouterr().out
    assert "2*3 = 6 > b1 = 4" in out
    assert "witness: a1" in out
    assert "obstruction fires: true" in out


def test_obstructions_exit_two_on_filiform(capsys):
    assert main(["obstructions", "--catalog", "filiform4_J"]) == 2
    out = capsys.readouterr().out
    assert "no invariant almost K" in out


def test_obstructions_clean_exits_zero(capsys):
    assert main(["obstructions", "--catalog", "kodaira_thurston"]) == 0
    out = capsys.readouterr().out
    assert "obstruction fires: false" in out


def test_report_exit_codes(capsys):
    assert main(["report", "--catalog", "kodaira_thurston"]) == 0
    assert main(["report", "--catalog", "h5_J"]) == 2
    assert main(["report", "--catalog", "filiform4_J"]) == 2
    capsys.readouterr()


def test_unknown_catalog_exits_one(capsys):
    assert main(["diamond", "--catalog", "nope"]) == 1
    err = capsys.readouterr().err
    assert "error:" in err
    assert "nope" in err


def test_bad_flags_exit_one(capsys):
    assert main(["diamond", "--bogus"]) == 1
    assert main([]) == 1
    capsys.readouterr()


def test_missing_file_exits_one(capsys):
    assert main(["diamond", "--model", "/nonexistent/m.json"]) == 1
    assert "error:" in capsys.readouterr().err


def test_malformed_json_exits_one_with_line(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"format": 1,\n  "name": ', encoding="utf-8")
    assert main(["validate", "--model", str(path)]) == 1
    err = capsys.readouterr().err
    assert "line" in err


def test_missing_field_exits_one_with_field_name(tmp_path, capsys):
    path = tmp_path / "partial.json"
    path.write_text('{"format": 1, "name": "x", "dim": 4}', encoding="utf-8")
    assert main(["validate", "--model", str(path)]) == 1
    err = capsys.readouterr().err
    assert "error:" in err


def test_lefschetz_on_nonclosed_model_exits_one(capsys):
    assert main(["lefschetz", "--catalog", "h5_J"]) == 1
    assert "almost Kahler" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# output content


def test_model_file_round_trip_through_cli(tmp_path, capsys):
    path = tmp_path / "kt.json"
    save_model(catalog("kodaira_thurston"), str(path))
    assert main(["diamond", "--model", str(path)]) == 0
    out = capsys.readouterr().out
    assert "0 3 0" in out
    assert "betti: 1 3 4 3 1" in out


def test_report_json_is_deterministic(capsys):
    assert main(["report", "--catalog", "kodaira_thurston",
                 "--format", "json"]) == 0
    first = capsys.readouterr().out
    assert main(["report", "--catalog", "kodaira_thurston",
                 "--format", "json"]) == 0
    second = capsys.readouterr().out
    assert first == second
    payload = json.loads(first)
    assert payload["identities"]["all_hold"] is True
    assert payload["diamond"]["rows"][2] == [0, 3, 0]
    assert payload["betti"] == [1, 3, 4, 3, 1]
    assert payload["hodge_index"]["b2_plus"] == 2
    assert payload["hodge_index"]["b2_minus"] == 2
    assert payload["obstructions"]["fires"] is False
    assert payload["lefschetz"]["all_iso"] is True


def test_json_outputs_parse_for_all_commands(capsys):
    for command in ("validate", "identities", "diamond", "betti",
                    "lefschetz", "obstructions", "report"):
        assert main([command, "--catalog", "torus4",
                     "--format", "json"]) == 0, command
        json.loads(capsys.readouterr().out)


def test_report_text_sections(capsys):
    assert main(["report", "--catalog", "kodaira_thurston"]) == 0
    out = capsys.readouterr().out
    assert "identity ledger" in out
    assert "hodge index: b2+ = 2, b2- = 2" in out
    assert "hard Lefschetz" in out
    assert "obstruction fires: false" in out


def test_verbose_notes_go_to_stderr(capsys):
    assert main(["betti", "--catalog", "torus2", "-v"]) == 0
    captured = capsys.readouterr()
    assert "loaded model torus2" in captured.err
    assert "betti: 1 2 1" in captured.out


def test_run_function_directly(capsys):
    config = RunConfig(command="betti", catalog="torus6", format="json")
    assert run(config) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["betti"] == [1, 6, 15, 20, 15, 6, 1]
