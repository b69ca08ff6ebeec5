"""Tests for the command-line interface: subcommand output, config
validation, overrides, determinism and exit codes."""

import json

import numpy as np
import pytest

from floquet_lindblad import (
    ModelParams,
    analytic_reference,
    bch_orders,
    build_model,
    extract_dissipator,
    psd_report,
)
from floquet_lindblad.cli import CSV_HEADER, main


def write_config(tmp_path, document, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(document), encoding="utf-8")
    return str(path)


def model_a_config(**overrides):
    document = {
        "schema_version": 1,
        "model": {"name": "A", "tau": 0.1, "h": 1.0, "gamma1": 1.0},
        "orders": [0, 1, 2],
    }
    document.update(overrides)
    return document


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_analyze_reports_certification(tmp_path, capsys):
    """The analysis report carries spectra, verdicts and residuals that
    match a direct computation."""
    config = write_config(tmp_path, model_a_config())
    code, out, err = run_cli(capsys, ["analyze", "--config", config])
    assert code == 0 and err == ""
    document = json.loads(out)
    assert document["schema_version"] == 1
    assert document["metadata"]["command"] == "analyze"
    records = document["orders"]
    assert [record["order"] for record in records] == [0, 1, 2]

    params = ModelParams(name="A", tau=0.1, h=1.0, gamma1=1.0)
    expansion = bch_orders(build_model(params), 2)
    for record in records:
        dissipator = extract_dissipator(
            expansion.cumulative(record["order"])
        )
        report = psd_report(dissipator)
        cumulative = record["cumulative"]
        assert cumulative["verdict"] == report.is_liouvillian
        assert cumulative["min_eigenvalue"] == pytest.approx(
            report.min_eigenvalue, abs=1e-14
        )
        assert cumulative["breaking_degree"] == pytest.approx(
            report.breaking_degree, abs=1e-14
        )
        assert cumulative["roundtrip_residual"] < 1e-10
    assert [record["cumulative"]["verdict"] for record in records] == [
        True,
        False,
        False,
    ]
    expected = 0.5 * (1.0 - np.sqrt(1.0 + 4.0 * 0.01))
    assert records[1]["cumulative"]["min_eigenvalue"] == pytest.approx(
        expected, rel=1e-9
    )
    assert records[0]["term"]["trace_ok"] is None
    assert records[1]["term"]["trace_ok"] is True
    assert all(check["ok"] for check in document["bound_checks"])


def test_analyze_weight_limit_disables_roundtrip(tmp_path, capsys):
    """Capped extraction cannot certify a round trip, so the residual is
    reported as null."""
    config = write_config(tmp_path, model_a_config(weight_limit=2))
    code, out, _ = run_cli(capsys, ["analyze", "--config", config])
    assert code == 0
    document = json.loads(out)
    for record in document["orders"]:
        assert record["cumulative"]["roundtrip_residual"] is None


def test_scan_brackets_positivity_boundary(tmp_path, capsys):
    """Scanning the period of the alternating-channel model flips the
    verdict exactly where the closed-form boundary predicts."""
    config = write_config(
        tmp_path,
        {
            "schema_version": 1,
            "model": {"name": "B", "tau": 0.3, "gamma1": 1.0, "gamma2": 1.0},
            "orders": [2],
            "scan": {
                "parameter": "tau",
                "start": 1.05,
                "stop": 1.17,
                "count": 5,
            },
        },
    )
    code, out, _ = run_cli(capsys, ["scan", "--config", config])
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == CSV_HEADER
    rows = [line.split(",") for line in lines[1:]]
    assert len(rows) == 5
    boundary = analytic_reference(
        ModelParams(name="B", tau=0.3, gamma1=1.0, gamma2=1.0), 2
    ).tau_max
    last_true = max(
        float(row[0]) for row in rows if row[3] == "true"
    )
    first_false = min(
        float(row[0]) for row in rows if row[3] == "false"
    )
    assert last_true < boundary < first_false
    for row in rows:
        assert row[1] == "2"
        if row[3] == "false":
            assert float(row[4]) == pytest.approx(-float(row[2]))
        else:
            assert float(row[4]) == 0.0


def test_scan_ring_coupling_always_breaks_at_second_order(tmp_path, capsys):
    """Any nonzero Ising coupling leaves the second-order matrix
    indefinite."""
    config = write_config(
        tmp_path,
        {
            "schema_version": 1,
            "model": {
                "name": "C",
                "tau": 0.2,
                "num_sites": 3,
                "jz": 1.0,
                "gamma": 0.4,
            },
            "orders": [2],
            "scan": {
                "parameter": "jz",
                "start": 0.5,
                "stop": 1.5,
                "count": 4,
            },
        },
    )
    code, out, _ = run_cli(capsys, ["scan", "--config", config])
    assert code == 0
    rows = [line.split(",") for line in out.strip().split("\n")[1:]]
    assert len(rows) == 4
    for row in rows:
        assert row[3] == "false"
        assert float(row[2]) < 0.0


def test_scan_rejects_parameter_of_other_model(tmp_path, capsys):
    """Only the sweeping model's own couplings can be scanned."""
    config = write_config(
        tmp_path,
        {
            "schema_version": 1,
            "model": {"name": "B", "tau": 0.3, "gamma1": 1.0, "gamma2": 1.0},
            "orders": [0],
            "scan": {"parameter": "h", "start": 0.0, "stop": 1.0, "count": 3},
        },
    )
    code, _, err = run_cli(capsys, ["scan", "--config", config])
    assert code == 2
    assert "scan.parameter" in err


def test_config_rejects_unknown_keys(tmp_path, capsys):
    """Unknown keys are rejected at the top level and inside sections."""
    config = write_config(tmp_path, model_a_config(bogus=1))
    code, _, err = run_cli(capsys, ["analyze", "--config", config])
    assert code == 2
    assert "top level: unknown key 'bogus'" in err

    document = model_a_config()
    document["model"]["spin"] = 2
    config = write_config(tmp_path, document, name="nested.json")
    code, _, err = run_cli(capsys, ["analyze", "--config", config])
    assert code == 2
    assert "unknown key 'spin'" in err


def test_config_requires_matching_schema_version(tmp_path, capsys):
    """A missing or different schema version is a configuration error."""
    document = model_a_config()
    del document["schema_version"]
    config = write_config(tmp_path, document)
    code, _, err = run_cli(capsys, ["analyze", "--config", config])
    assert code == 2 and "schema_version" in err

    config = write_config(
        tmp_path, model_a_config(schema_version=2), name="v2.json"
    )
    code, _, err = run_cli(capsys, ["analyze", "--config", config])
    assert code == 2 and "schema_version" in err


def test_config_error_paths(tmp_path, capsys):
    """Bad grids, missing sections, bad tolerances and unreadable or
    malformed files all exit with the configuration code."""
    decreasing = write_config(
        tmp_path,
        model_a_config(
            scan={"parameter": "h", "start": 1.0, "stop": 0.5, "count": 3}
        ),
        name="decreasing.json",
    )
    code, _, err = run_cli(capsys, ["scan", "--config", decreasing])
    assert code == 2 and "strictly increasing" in err

    missing_section = write_config(
        tmp_path, model_a_config(), name="nosection.json"
    )
    code, _, err = run_cli(capsys, ["scan", "--config", missing_section])
    assert code == 2 and "missing 'scan' section" in err

    bad_tol = write_config(
        tmp_path, model_a_config(tol_psd=-1.0), name="badtol.json"
    )
    code, _, err = run_cli(capsys, ["analyze", "--config", bad_tol])
    assert code == 2 and "tol_psd" in err

    bad_limit = write_config(
        tmp_path, model_a_config(weight_limit=1), name="badlimit.json"
    )
    code, _, err = run_cli(capsys, ["analyze", "--config", bad_limit])
    assert code == 2 and "weight_limit" in err

    code, _, err = run_cli(
        capsys, ["analyze", "--config", str(tmp_path / "absent.json")]
    )
    assert code == 2 and "cannot read config" in err

    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    code, _, err = run_cli(capsys, ["analyze", "--config", str(broken)])
    assert code == 2 and "not valid JSON" in err


def test_kick_free_flavor_covers_two_orders(tmp_path, capsys):
    """The kick-free expansion rejects orders beyond one but runs at
    orders zero and one, reporting its Fourier cutoff."""
    config = write_config(
        tmp_path, model_a_config(flavor="vanvleck", orders=[0, 1, 2])
    )
    code, _, err = run_cli(capsys, ["analyze", "--config", config])
    assert code == 2 and "kick-free" in err

    config = write_config(
        tmp_path,
        model_a_config(flavor="vanvleck", orders=[0, 1]),
        name="vv.json",
    )
    code, out, _ = run_cli(capsys, ["analyze", "--config", config])
    assert code == 0
    document = json.loads(out)
    assert document["metadata"]["flavor"] == "vanvleck"
    assert document["metadata"]["m_max"] == 200


def test_flag_overrides(tmp_path, capsys):
    """Command-line flags override the configured orders, flavor and
    tolerance."""
    config = write_config(tmp_path, model_a_config())
    code, out, _ = run_cli(
        capsys, ["analyze", "--config", config, "--order", "1"]
    )
    assert code == 0
    document = json.loads(out)
    assert document["metadata"]["orders"] == [0, 1]

    code, out, _ = run_cli(
        capsys,
        ["analyze", "--config", config, "--order", "1", "--flavor", "vanvleck"],
    )
    assert code == 0
    assert json.loads(out)["metadata"]["flavor"] == "vanvleck"

    code, _, err = run_cli(
        capsys, ["analyze", "--config", config, "--flavor", "vanvleck"]
    )
    assert code == 2 and "kick-free" in err

    code, out, _ = run_cli(
        capsys, ["analyze", "--config", config, "--tol-psd", "1.0"]
    )
    assert code == 0
    document = json.loads(out)
    for record in document["orders"]:
        assert record["cumulative"]["verdict"] is True
        assert record["cumulative"]["psd_tol"] == 1.0


def test_fit_reproduces_reference_window(tmp_path, capsys):
    """The normalized eigenvalue fit lands on the reference cubic over
    the covered window."""
    config = write_config(
        tmp_path,
        {
            "schema_version": 1,
            "model": {
                "name": "C",
                "tau": 0.1,
                "num_sites": 3,
                "jz": 1.0,
                "gamma": 0.02,
            },
            "orders": [2],
            "fit": {"start": 0.05, "stop": 0.45, "count": 9},
        },
    )
    code, out, _ = run_cli(capsys, ["fit-modelc", "--config", config])
    assert code == 0
    document = json.loads(out)
    assert document["fit_error"] is None
    assert document["warnings"] == []
    assert document["reference_coefficients"] == [-0.667, 0.0197, -3.08, 2.84]
    assert document["fit_coefficients"][0] == pytest.approx(-0.667, abs=0.015)
    assert document["max_abs_deviation_from_reference"] < 5e-3
    assert document["fit_rmse"] < 1e-3
    assert len(document["grid"]) == 9
    assert len(document["normalized_min_eigs"]) == 9
    assert all(value < 0.0 for value in document["normalized_min_eigs"])


def test_fit_normalized_curve_is_size_independent(tmp_path, capsys):
    """Normalizing by rate and ring size collapses different ring sizes
    onto one curve."""
    curves = {}
    for num_sites in (3, 4):
        config = write_config(
            tmp_path,
            {
                "schema_version": 1,
                "model": {
                    "name": "C",
                    "tau": 0.1,
                    "num_sites": num_sites,
                    "jz": 1.0,
                    "gamma": 0.02,
                },
                "orders": [2],
                "fit": {"start": 0.05, "stop": 0.45, "count": 5},
            },
            name=f"fit{num_sites}.json",
        )
        code, out, _ = run_cli(capsys, ["fit-modelc", "--config", config])
        assert code == 0
        curves[num_sites] = json.loads(out)["normalized_min_eigs"]
    np.testing.assert_allclose(curves[3], curves[4], atol=1e-8)


def test_fit_degenerate_normalization(tmp_path, capsys):
    """A vanishing rate makes the normalization degenerate; the report
    says so instead of fitting."""
    config = write_config(
        tmp_path,
        {
            "schema_version": 1,
            "model": {
                "name": "C",
                "tau": 0.1,
                "num_sites": 3,
                "jz": 1.0,
                "gamma": 0.0,
            },
            "orders": [2],
            "fit": {"start": 0.05, "stop": 0.45, "count": 5},
        },
    )
    code, out, _ = run_cli(capsys, ["fit-modelc", "--config", config])
    assert code == 0
    document = json.loads(out)
    assert "degenerate normalization" in document["fit_error"]
    assert document["fit_coefficients"] is None
    assert document["fit_rmse"] is None


def test_fit_warns_outside_reference_window(tmp_path, capsys):
    """Grids leaving (0, 0.5) carry a warning."""
    config = write_config(
        tmp_path,
        {
            "schema_version": 1,
            "model": {
                "name": "C",
                "tau": 0.1,
                "num_sites": 3,
                "jz": 1.0,
                "gamma": 0.02,
            },
            "orders": [2],
            "fit": {"start": 0.05, "stop": 0.6, "count": 5},
        },
    )
    code, out, _ = run_cli(capsys, ["fit-modelc", "--config", config])
    assert code == 0
    document = json.loads(out)
    assert len(document["warnings"]) == 1
    assert "0.5" in document["warnings"][0]


def test_fit_requires_model_c(tmp_path, capsys):
    """The fit subcommand refuses other models."""
    config = write_config(
        tmp_path,
        model_a_config(fit={"start": 0.05, "stop": 0.45, "count": 5}),
    )
    code, _, err = run_cli(capsys, ["fit-modelc", "--config", config])
    assert code == 2 and "model C" in err


def test_compare_exact_slopes_single_site(tmp_path, capsys):
    """Residuals against the exact effective generator shrink with the
    expected power of the period for the single-site drive."""
    config = write_config(
        tmp_path,
        {
            "schema_version": 1,
            "model": {"name": "A", "tau": 0.1, "h": 1.0, "gamma1": 1.0},
            "orders": [0, 1],
            "compare": {"start": 0.02, "stop": 0.2, "count": 6},
        },
    )
    code, out, _ = run_cli(capsys, ["compare-exact", "--config", config])
    assert code == 0
    document = json.loads(out)
    assert document["branch_failures"] == []
    assert document["slopes"]["0"] == pytest.approx(1.0, abs=0.3)
    assert document["slopes"]["1"] == pytest.approx(2.0, abs=0.3)
    assert len(document["tau_grid"]) == 6
    for order in ("0", "1"):
        assert len(document["residuals"][order]) == 6
        assert all(value > 0.0 for value in document["residuals"][order])
    ratios = np.asarray(document["tau_grid"][1:]) / np.asarray(
        document["tau_grid"][:-1]
    )
    np.testing.assert_allclose(ratios, ratios[0], rtol=1e-10)


def test_compare_exact_third_power_for_ring(tmp_path, capsys):
    """The ring drive has a nonvanishing third-order correction, so the
    order-two residual decays with the third power."""
    config = write_config(
        tmp_path,
        {
            "schema_version": 1,
            "model": {
                "name": "C",
                "tau": 0.1,
                "num_sites": 3,
                "jz": 1.0,
                "gamma": 0.5,
            },
            "orders": [2],
            "compare": {"start": 0.02, "stop": 0.2, "count": 5},
        },
    )
    code, out, _ = run_cli(capsys, ["compare-exact", "--config", config])
    assert code == 0
    document = json.loads(out)
    assert document["slopes"]["2"] == pytest.approx(3.0, abs=0.3)


def test_compare_exact_identical_segments(tmp_path, capsys):
    """With a vanishing field both segments share one generator, so the
    leading average is exact and residuals sit at roundoff."""
    config = write_config(
        tmp_path,
        {
            "schema_version": 1,
            "model": {"name": "A", "tau": 0.1, "h": 0.0, "gamma1": 1.0},
            "orders": [0],
            "compare": {"start": 0.05, "stop": 0.2, "count": 4},
        },
    )
    code, out, _ = run_cli(capsys, ["compare-exact", "--config", config])
    assert code == 0
    document = json.loads(out)
    assert all(value <= 1e-10 for value in document["residuals"]["0"])


def test_compare_exact_stroboscopic_section(tmp_path, capsys):
    """A custom initial state and period count shape the stroboscopic
    series; non-states are rejected."""
    up_state = [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]
    config = write_config(
        tmp_path,
        {
            "schema_version": 1,
            "model": {"name": "A", "tau": 0.1, "h": 1.0, "gamma1": 1.0},
            "orders": [0, 1],
            "compare": {
                "start": 0.05,
                "stop": 0.2,
                "count": 4,
                "num_periods": 7,
                "initial_state": up_state,
            },
        },
    )
    code, out, _ = run_cli(capsys, ["compare-exact", "--config", config])
    assert code == 0
    document = json.loads(out)
    strobo = document["stroboscopic"]
    assert strobo["num_periods"] == 7
    for order in ("0", "1"):
        series = strobo["per_order"][order]
        assert len(series["distances"]) == 7
        assert series["max_distance"] == max(series["distances"])

    not_hermitian = [[[1.0, 0.0], [1.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]
    config = write_config(
        tmp_path,
        {
            "schema_version": 1,
            "model": {"name": "A", "tau": 0.1, "h": 1.0, "gamma1": 1.0},
            "orders": [0],
            "compare": {
                "start": 0.05,
                "stop": 0.2,
                "count": 2,
                "initial_state": not_hermitian,
            },
        },
        name="badstate.json",
    )
    code, _, err = run_cli(capsys, ["compare-exact", "--config", config])
    assert code == 2 and "initial_state" in err


def test_compare_exact_branch_ambiguity_everywhere(tmp_path, capsys):
    """A half-turn rotation per period makes the exact logarithm
    branch-ambiguous at the only grid point, so the run aborts with the
    dedicated exit code."""
    config = write_config(
        tmp_path,
        {
            "schema_version": 1,
            "model": {"name": "A", "tau": 0.1, "h": 1.0, "gamma1": 0.0},
            "orders": [0, 1],
            "compare": {
                "start": np.pi / 2.0,
                "stop": 2.0,
                "count": 1,
            },
        },
    )
    code, _, err = run_cli(capsys, ["compare-exact", "--config", config])
    assert code == 4
    assert "branch" in err


def test_output_file_and_byte_determinism(tmp_path, capsys):
    """Identical configurations produce byte-identical reports, written
    to the requested path with nothing on stdout."""
    config = write_config(
        tmp_path,
        {
            "schema_version": 1,
            "model": {
                "name": "C",
                "tau": 0.2,
                "num_sites": 3,
                "jz": 0.7,
                "gamma": 0.4,
            },
            "orders": [0, 1, 2],
        },
    )
    first = tmp_path / "first.json"
    second = tmp_path / "second.json"
    code, out, _ = run_cli(
        capsys, ["analyze", "--config", config, "--out", str(first)]
    )
    assert code == 0 and out == ""
    code, out, _ = run_cli(
        capsys, ["analyze", "--config", config, "--out", str(second)]
    )
    assert code == 0 and out == ""
    assert first.read_bytes() == second.read_bytes()
    json.loads(first.read_text(encoding="utf-8"))


def test_custom_drive_matches_named_model(tmp_path, capsys):
    """A custom segment specification replicating the single-site model
    yields the identical certification report."""
    sigma3 = [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-1.0, 0.0]]]
    sigma1 = [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]]
    custom = {
        "schema_version": 1,
        "model": {
            "name": "custom",
            "num_sites": 1,
            "segments": [
                {
                    "duration": 0.1,
                    "hamiltonian_terms": [
                        {"matrix": sigma3, "sites": [0]}
                    ],
                },
                {
                    "duration": 0.1,
                    "jump_terms": [
                        {"rate": 1.0, "matrix": sigma1, "sites": [0]}
                    ],
                },
            ],
        },
        "orders": [0, 1, 2],
    }
    named_path = write_config(tmp_path, model_a_config(), name="named.json")
    custom_path = write_config(tmp_path, custom, name="custom.json")
    code, named_out, _ = run_cli(capsys, ["analyze", "--config", named_path])
    assert code == 0
    code, custom_out, _ = run_cli(capsys, ["analyze", "--config", custom_path])
    assert code == 0
    named_doc = json.loads(named_out)
    custom_doc = json.loads(custom_out)
    assert json.dumps(named_doc["orders"], sort_keys=True) == json.dumps(
        custom_doc["orders"], sort_keys=True
    )
    assert named_doc["tail_estimate"] == custom_doc["tail_estimate"]


def test_custom_drive_validation(tmp_path, capsys):
    """Custom drives reject malformed matrices and empty segments."""
    config = write_config(
        tmp_path,
        {
            "schema_version": 1,
            "model": {"name": "custom", "num_sites": 1, "segments": []},
            "orders": [0],
        },
    )
    code, _, err = run_cli(capsys, ["analyze", "--config", config])
    assert code == 2 and "segments" in err

    config = write_config(
        tmp_path,
        {
            "schema_version": 1,
            "model": {
                "name": "custom",
                "num_sites": 1,
                "segments": [
                    {
                        "duration": 0.1,
                        "jump_terms": [
                            {
                                "rate": 1.0,
                                "matrix": [[1.0, 0.0]],
                                "sites": [0],
                            }
                        ],
                    }
                ],
            },
            "orders": [0],
        },
        name="badmatrix.json",
    )
    code, _, err = run_cli(capsys, ["analyze", "--config", config])
    assert code == 2 and "matrix" in err
