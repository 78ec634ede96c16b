from pcaforest.cli import main

RUN_BODY = """
[data]
path = {csv}

[pca]
enabled = false

[forest]
n_trees = 6

[run]
models = forest
seeds = 1
output_dir = {out}
"""


def invoke(argv):
    try:
        return main(argv)
    except SystemExit as exc:
        return exc.code


def write_run_config(tmp_path, gaussian_csv, out="out"):
    path = tmp_path / "run.ini"
    path.write_text(RUN_BODY.format(csv=gaussian_csv, out=out), encoding="utf-8")
    return path


def test_no_arguments_is_usage_error(capsys):
    assert invoke([]) == 1
    assert "usage" in capsys.readouterr().err


def test_unknown_command_is_usage_error(capsys):
    assert invoke(["frobnicate"]) == 1


def test_run_success(tmp_path, gaussian_csv, capsys):
    config = write_run_config(tmp_path, gaussian_csv)
    assert invoke(["run", str(config)]) == 0
    assert "wrote 1 cells" in capsys.readouterr().out
    assert (tmp_path / "out" / "metrics.csv").is_file()


def test_run_missing_config_exits_1(tmp_path, capsys):
    assert invoke(["run", str(tmp_path / "absent.ini")]) == 1
    assert "config error" in capsys.readouterr().err


def test_run_bad_setting_exits_1(tmp_path, gaussian_csv, capsys):
    path = tmp_path / "bad.ini"
    path.write_text(f"[data]\npath = {gaussian_csv}\nwhatever = 1\n", encoding="utf-8")
    assert invoke(["run", str(path)]) == 1


def test_run_missing_dataset_exits_2(tmp_path, capsys):
    path = tmp_path / "c.ini"
    path.write_text("[data]\npath = nothing.csv\n", encoding="utf-8")
    assert invoke(["run", str(path)]) == 2
    assert "data error" in capsys.readouterr().err


def test_run_malformed_dataset_exits_2(tmp_path, capsys):
    csv = tmp_path / "bad.csv"
    csv.write_text("a,class\nnot_a_number,0\n", encoding="utf-8")
    path = tmp_path / "c.ini"
    path.write_text(f"[data]\npath = {csv}\n[run]\nseeds = 1\n", encoding="utf-8")
    assert invoke(["run", str(path)]) == 2


def test_run_set_overrides(tmp_path, gaussian_csv):
    config = write_run_config(tmp_path, gaussian_csv)
    assert invoke(["run", str(config), "--set", "run.output_dir=elsewhere"]) == 0
    assert (tmp_path / "elsewhere" / "metrics.csv").is_file()
    assert not (tmp_path / "out").exists()


def test_run_bad_override_exits_1(tmp_path, gaussian_csv, capsys):
    config = write_run_config(tmp_path, gaussian_csv)
    assert invoke(["run", str(config), "--set", "forest.nope=1"]) == 1


def test_output_dir_env_override(tmp_path, gaussian_csv, monkeypatch):
    config = write_run_config(tmp_path, gaussian_csv)
    monkeypatch.setenv("PCAFOREST_OUTPUT_DIR", str(tmp_path / "envdir"))
    assert invoke(["run", str(config)]) == 0
    assert (tmp_path / "envdir" / "metrics.csv").is_file()
    assert not (tmp_path / "out").exists()


def test_explicit_set_beats_env(tmp_path, gaussian_csv, monkeypatch):
    config = write_run_config(tmp_path, gaussian_csv)
    monkeypatch.setenv("PCAFOREST_OUTPUT_DIR", str(tmp_path / "envdir"))
    assert invoke(["run", str(config), "--set", "run.output_dir=flagdir"]) == 0
    assert (tmp_path / "flagdir" / "metrics.csv").is_file()
    assert not (tmp_path / "envdir").exists()


def test_numerical_failure_exits_3(tmp_path, gaussian_csv, capsys):
    config = write_run_config(tmp_path, gaussian_csv)
    code = invoke(
        [
            "run",
            str(config),
            "--set", "run.models=mlp",
            "--set", "mlp.learning_rate=1e150",
            "--set", "mlp.hidden_sizes=4",
            "--set", "mlp.epochs=10",
        ]
    )
    assert code == 3
    assert "numerical error" in capsys.readouterr().err


def test_evaluate_success(tmp_path, gaussian_csv, capsys):
    config = write_run_config(tmp_path, gaussian_csv)
    assert invoke(["run", str(config)]) == 0
    capsys.readouterr()
    model = tmp_path / "out" / "models" / "forest_raw_seed1.model"
    assert invoke(["evaluate", str(model), str(gaussian_csv)]) == 0
    out = capsys.readouterr().out
    assert "confusion tp=" in out
    for label in ("Accuracy", "Sensitivity", "Specificity", "Precision", "F1 Score"):
        assert label in out
    assert "AUC" in out


def test_evaluate_missing_model_exits_2(tmp_path, gaussian_csv, capsys):
    assert invoke(["evaluate", str(tmp_path / "no.model"), str(gaussian_csv)]) == 2


def test_evaluate_malformed_model_exits_2(tmp_path, gaussian_csv, capsys):
    bad = tmp_path / "bad.model"
    bad.write_text("not a model\n", encoding="utf-8")
    assert invoke(["evaluate", str(bad), str(gaussian_csv)]) == 2


def test_evaluate_mismatched_csv_exits_2(tmp_path, gaussian_csv, capsys):
    config = write_run_config(tmp_path, gaussian_csv)
    assert invoke(["run", str(config)]) == 0
    model = tmp_path / "out" / "models" / "forest_raw_seed1.model"
    narrow = tmp_path / "narrow.csv"
    narrow.write_text("id,f1,class\n0,1.0,0\n1,2.0,1\n", encoding="utf-8")
    assert invoke(["evaluate", str(model), str(narrow)]) == 2
    assert "does not match the model" in capsys.readouterr().err


def test_roc_plot_success(tmp_path, gaussian_csv, capsys):
    config = write_run_config(tmp_path, gaussian_csv)
    assert invoke(["run", str(config)]) == 0
    roc = tmp_path / "out" / "roc" / "forest_raw_seed1.csv"
    svg = tmp_path / "curve.svg"
    assert invoke(["roc-plot", str(roc), "-o", str(svg)]) == 0
    content = svg.read_bytes()
    assert content.startswith(b"<?xml")
    assert b"</svg>" in content


def test_roc_plot_default_output_path(tmp_path):
    roc = tmp_path / "points.csv"
    roc.write_text("fpr,tpr\n0.0,0.0\n0.5,0.9\n1.0,1.0\n# auc = 0.7\n", encoding="utf-8")
    assert invoke(["roc-plot", str(roc)]) == 0
    assert (tmp_path / "points.svg").is_file()


def test_roc_plot_deterministic(tmp_path):
    roc = tmp_path / "points.csv"
    roc.write_text("fpr,tpr\n0.0,0.0\n0.25,0.75\n1.0,1.0\n# auc = 0.75\n", encoding="utf-8")
    a = tmp_path / "a.svg"
    b = tmp_path / "b.svg"
    assert invoke(["roc-plot", str(roc), "-o", str(a)]) == 0
    assert invoke(["roc-plot", str(roc), "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_roc_plot_missing_file_exits_2(tmp_path, capsys):
    assert invoke(["roc-plot", str(tmp_path / "no.csv")]) == 2


def test_roc_plot_malformed_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("wrong header\n1,2\n", encoding="utf-8")
    assert invoke(["roc-plot", str(bad)]) == 2
    assert "malformed" in capsys.readouterr().err
