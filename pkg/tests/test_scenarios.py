import json

import pytest

from cohcool.cli import main
from cohcool.errors import ScenarioError
from cohcool.scenarios import load_scenario

HEADERS = {
    "bounds": "gamma,epsilon_star,region,gamma_rot_max",
    "region": "gamma,gamma_rot,eps_after,classification",
    "alpha-average": "alpha,epsilon_out,coherence_out",
    "hbac-run": "cycle,eps_z,coh_re,coh_im,trace_dist_to_fixed_point",
    "hbac-analytic-check": "index,eps1_0,chi_re,chi_im,eps2,eps3,xi,alpha_prime,n,phi_dev,rho_dev",
    "confidence-band": "gamma_rot,eps_min,eps_mid,eps_max,coh_min,coh_mid,coh_max",
    "ising-sweep": "g_over_omega,cycle,x,y,z",
    "thermo": "cycle,Q,W,C1,Q_coh,zeta_coh,J_coh,zeta_carnot",
    "multi-reset": "r,eps_a,ratio",
}

PARAMS = {
    "bounds": {"pol_v": 0.8, "grid_points": 11},
    "region": {"pol_v": 0.8, "resolution": 16},
    "alpha-average": {
        "pol_v": 0.8,
        "gamma": 0.5,
        "gamma_rot": 0.5,
        "alpha_min": 0.0,
        "alpha_max": 1.5,
        "count": 11,
    },
    "hbac-run": {"eps2": 0.5, "eps3": 0.5, "xi": 0.6, "cycles": 6},
    "hbac-analytic-check": {"configs": 4, "max_cycles": 8},
    "confidence-band": {"pol_v": 0.8, "gamma_min": 0.78, "gamma_max": 0.8, "grid_points": 21},
    "ising-sweep": {"beta": 1.09, "g_over_omega": [0.25, 0.5, 0.75], "cycles": 4},
    "thermo": {"eps2": 0.5, "eps3": 0.5, "xi": 0.3, "cycles": 4},
    "multi-reset": {"r_values": [2, 3], "eps_a": [0.2, 0.5, 0.8]},
}


def write_scenario(tmp_path, kind, params=None, name="scenario.json", extra=None):
    doc = {"kind": kind, "params": PARAMS[kind] if params is None else params}
    if extra:
        doc.update(extra)
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


@pytest.mark.parametrize("kind", sorted(HEADERS))
def test_every_kind_runs_and_writes_artifacts(tmp_path, kind):
    scenario = write_scenario(tmp_path, kind)
    out = tmp_path / "out"
    assert main(["run", str(scenario), "--out", str(out)]) == 0
    stem = kind.replace("-", "_")
    csv = out / f"{stem}.csv"
    manifest = out / f"{stem}.manifest.json"
    figure = out / f"{stem}.png"
    assert csv.exists() and manifest.exists() and figure.exists()
    lines = csv.read_text().splitlines()
    assert lines[0] == HEADERS[kind]
    assert len(lines) > 1
    assert figure.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    doc = json.loads(manifest.read_text())
    assert doc["kind"] == kind
    assert doc["columns"] == HEADERS[kind].split(",")
    assert doc["csv"] == csv.name
    assert doc["figure"] == figure.name
    assert "library_version" in doc
    assert set(doc["options"]) == {"seed", "verbatim_sm", "tc_verbatim"}


@pytest.mark.parametrize("kind", sorted(HEADERS))
def test_reruns_are_byte_identical(tmp_path, kind):
    scenario = write_scenario(tmp_path, kind)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["run", str(scenario), "--out", str(out1)]) == 0
    assert main(["run", str(scenario), "--out", str(out2)]) == 0
    stem = kind.replace("-", "_")
    for name in (f"{stem}.csv", f"{stem}.manifest.json"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_manifest_is_sorted_and_timestamp_free(tmp_path):
    scenario = write_scenario(tmp_path, "bounds")
    assert main(["run", str(scenario), "--out", str(tmp_path)]) == 0
    text = (tmp_path / "bounds.manifest.json").read_text()
    doc = json.loads(text)
    assert text == json.dumps(doc, sort_keys=True, indent=2) + "\n"
    lowered = text.lower()
    for fragment in ("time", "date", "stamp"):
        assert fragment not in lowered


def test_output_path_is_honored(tmp_path):
    scenario = write_scenario(tmp_path, "bounds", extra={"output_path": "custom.csv"})
    assert main(["run", str(scenario), "--out", str(tmp_path)]) == 0
    assert (tmp_path / "custom.csv").exists()
    assert (tmp_path / "custom.manifest.json").exists()
    assert (tmp_path / "custom.png").exists()


def test_resolved_defaults_fill_in(tmp_path):
    path = write_scenario(tmp_path, "bounds", params={"pol_v": 0.5})
    scenario = load_scenario(path)
    assert scenario["params"] == {"pol_v": 0.5, "grid_points": 101}
    assert scenario["output_path"] == "bounds.csv"


def test_seed_option_changes_sampled_configs(tmp_path):
    scenario = write_scenario(tmp_path, "hbac-analytic-check")
    out1, out2, out3 = tmp_path / "a", tmp_path / "b", tmp_path / "c"
    assert main(["run", str(scenario), "--out", str(out1)]) == 0
    assert main(["run", str(scenario), "--out", str(out2), "--seed", "7"]) == 0
    assert main(["run", str(scenario), "--out", str(out3), "--seed", "7"]) == 0
    name = "hbac_analytic_check.csv"
    assert (out1 / name).read_bytes() != (out2 / name).read_bytes()
    assert (out2 / name).read_bytes() == (out3 / name).read_bytes()


def test_analytic_check_manifest_reports_both_forms(tmp_path):
    scenario = write_scenario(tmp_path, "hbac-analytic-check")
    assert main(["run", str(scenario), "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "hbac_analytic_check.manifest.json").read_text())
    results = doc["results"]
    assert results["form_in_csv"] == "corrected"
    assert results["max_phi_dev_corrected"] < 1e-10
    assert results["max_rho_dev_corrected"] < 1e-10
    # the printed closed form must stay visibly wrong, not silently patched
    assert results["max_phi_dev_verbatim"] > 1e-3
    assert results["seed"] == 42


def test_verbatim_flag_switches_csv_form(tmp_path):
    scenario = write_scenario(tmp_path, "hbac-analytic-check")
    out = tmp_path / "v"
    assert main(["run", str(scenario), "--out", str(out), "--verbatim-sm"]) == 0
    doc = json.loads((out / "hbac_analytic_check.manifest.json").read_text())
    assert doc["results"]["form_in_csv"] == "verbatim"
    assert doc["options"]["verbatim_sm"] is True


def test_tc_verbatim_flag_recorded_and_changes_results(tmp_path):
    scenario = write_scenario(tmp_path, "thermo")
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["run", str(scenario), "--out", str(out1)]) == 0
    assert main(["run", str(scenario), "--out", str(out2), "--tc-verbatim"]) == 0
    doc1 = json.loads((out1 / "thermo.manifest.json").read_text())
    doc2 = json.loads((out2 / "thermo.manifest.json").read_text())
    assert doc1["options"]["tc_verbatim"] is False
    assert doc2["options"]["tc_verbatim"] is True
    assert doc1["results"]["tc_convention"] != doc2["results"]["tc_convention"]


def test_alpha_average_manifest_summarizes_discrepancy(tmp_path):
    scenario = write_scenario(tmp_path, "alpha-average")
    assert main(["run", str(scenario), "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "alpha_average.manifest.json").read_text())
    results = doc["results"]
    assert set(results) >= {
        "average_epsilon_numeric",
        "average_epsilon_closed_verbatim",
        "closed_vs_numeric_discrepancy",
        "ensemble_mean",
        "fraction_cooled",
    }
    assert results["closed_vs_numeric_discrepancy"] == pytest.approx(
        abs(results["average_epsilon_closed_verbatim"] - results["average_epsilon_numeric"]),
        abs=1e-12,
    )


def test_ising_manifest_has_scaling_fit(tmp_path):
    scenario = write_scenario(tmp_path, "ising-sweep")
    assert main(["run", str(scenario), "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "ising_sweep.manifest.json").read_text())
    assert doc["results"]["scaling_spearman"] == pytest.approx(1.0, abs=1e-9)
    assert doc["results"]["scaling_constant"] > 0.0


# ---------------------------------------------------------------------------
# Failure modes


def test_malformed_json_exits_2_with_location(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"kind": "bounds",\n  "params": {nope}}')
    assert main(["run", str(path)]) == 2
    err = capsys.readouterr().err
    assert "config error" in err
    assert "broken.json:2:" in err  # line-precise parse location


def test_unknown_kind_exits_2(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"kind": "frobnicate", "params": {}}))
    assert main(["run", str(path)]) == 2


def test_unknown_top_level_key_exits_2(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"kind": "bounds", "params": {"pol_v": 0.5}, "extra": 1}))
    assert main(["run", str(path)]) == 2


def test_unknown_param_exits_2(tmp_path):
    scenario = write_scenario(tmp_path, "bounds", params={"pol_v": 0.5, "bogus": 1})
    assert main(["run", str(scenario)]) == 2


def test_missing_required_param_exits_2(tmp_path):
    scenario = write_scenario(tmp_path, "bounds", params={})
    assert main(["run", str(scenario)]) == 2


def test_wrong_param_type_exits_2(tmp_path):
    scenario = write_scenario(tmp_path, "bounds", params={"pol_v": "high"})
    assert main(["run", str(scenario)]) == 2


def test_region_resolution_floor_exits_2(tmp_path):
    scenario = write_scenario(tmp_path, "region", params={"pol_v": 0.5, "resolution": 8})
    assert main(["run", str(scenario)]) == 2


def test_bad_rule_exits_2(tmp_path):
    params = dict(PARAMS["alpha-average"], rule="nearest")
    scenario = write_scenario(tmp_path, "alpha-average", params=params)
    assert main(["run", str(scenario)]) == 2


def test_invalid_physics_parameter_exits_2(tmp_path):
    scenario = write_scenario(tmp_path, "bounds", params={"pol_v": 1.5})
    assert main(["run", str(scenario)]) == 2


def test_missing_file_exits_2(tmp_path):
    assert main(["run", str(tmp_path / "nowhere.json")]) == 2


def test_degenerate_channel_exits_3(tmp_path, capsys):
    # A pair pinned in |01><01| makes the cycle the identity map; the
    # stationary state is then ill-defined and the run must fail loudly.
    scenario = write_scenario(
        tmp_path, "hbac-run", params={"eps2": 1.0, "eps3": -1.0, "cycles": 3}
    )
    assert main(["run", str(scenario)]) == 3
    assert "NonUniqueFixedPoint" in capsys.readouterr().err


def test_load_scenario_rejects_non_object(tmp_path):
    path = tmp_path / "list.json"
    path.write_text("[1, 2, 3]")
    with pytest.raises(ScenarioError):
        load_scenario(path)


def test_cli_prints_written_paths(tmp_path, capsys):
    scenario = write_scenario(tmp_path, "multi-reset")
    assert main(["run", str(scenario), "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "multi_reset.csv" in out
    assert "multi_reset.manifest.json" in out
    assert "multi_reset.png" in out
