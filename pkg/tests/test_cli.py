import json

import pytest

from stockcast.cli import main
from stockcast.config import load_config
from stockcast.errors import ConfigError

from mini_data import write_mini_dataset


@pytest.fixture(scope="module")
def mini(tmp_path_factory):
    root = tmp_path_factory.mktemp("mini")
    return write_mini_dataset(root)


def run(*args) -> int:
    return main([str(a) for a in args])


def test_ingest_check_succeeds(mini, capsys):
    assert run("ingest-check", "--config", mini) == 0
    out = capsys.readouterr().out
    assert "prices AAA: 140 rows" in out
    assert "news: 7 headlines" in out


def test_sentiment_command_output_and_determinism(mini, tmp_path, capsys):
    out_dir = tmp_path / "senti"
    assert run("sentiment", "--config", mini, "--ticker", "AAA", "--out", out_dir) == 0
    path = out_dir / "sentiment_AAA.csv"
    first = path.read_bytes()
    lines = first.decode().strip().splitlines()
    assert lines[0] == "date,pos,neg,neu,compound,headline_count"
    assert len(lines) == 141  # one record per trading day
    populated = [l for l in lines[1:] if not l.endswith(",0")]
    assert len(populated) == 3  # 5 AAA headlines collapse onto 3 trading days
    triple = [l for l in lines[1:] if l.endswith(",3")]
    assert len(triple) == 1  # the 3-headline day aggregates into one record
    # the Saturday item contributes to the following Monday
    assert any(l.startswith("2021-01-25,") and l.endswith(",1") for l in populated)

    assert run("sentiment", "--config", mini, "--ticker", "AAA", "--out", out_dir) == 0
    assert path.read_bytes() == first  # byte-identical rerun


def test_build_dataset_writes_panel(mini, tmp_path, capsys):
    out_dir = tmp_path / "panel"
    assert run("build-dataset", "--config", mini, "--ticker", "AAA", "--out", out_dir) == 0
    lines = (out_dir / "panel_AAA.csv").read_text().strip().splitlines()
    assert lines[0] == "date,close,gold,brent,gsec,usd_inr,pos,neg,neu,compound"
    assert len(lines) == 141


def test_missing_lexicon_path_is_config_error(mini, tmp_path):
    text = mini.read_text().replace("news = news.csv", "news = news.csv\nlexicon = missing.txt")
    bad = mini.parent / "bad.ini"
    bad.write_text(text)
    with pytest.raises(ConfigError) as exc:
        load_config(bad)
    assert "lexicon" in str(exc.value)
    assert run("sentiment", "--config", bad) == 1


def test_unknown_model_is_usage_error(mini, capsys):
    with pytest.raises(SystemExit) as exc:
        run("train", "--config", mini, "--model", "prophet")
    assert exc.value.code == 2
    assert "lstm" in capsys.readouterr().err  # usage error lists valid kinds


def test_evaluate_before_train_names_missing_artifact(mini, tmp_path, capsys):
    out_dir = tmp_path / "empty"
    code = run("evaluate", "--config", mini, "--model", "lstm", "--ticker", "AAA", "--out", out_dir)
    assert code == 1
    err = capsys.readouterr().err
    assert "AAA_lstm.json" in err and "[evaluate]" in err


def test_train_all_then_evaluate_full_flow(mini, tmp_path, capsys):
    out_dir = tmp_path / "flow"
    assert run("train", "--config", mini, "--model", "all", "--ticker", "all", "--out", out_dir) == 0
    out = capsys.readouterr().out
    assert out.count("trained") == 14  # 7 kinds x 2 tickers
    assert "val RMSE" in out
    artifacts = sorted(p.name for p in (out_dir / "artifacts").glob("*.json"))
    assert len(artifacts) == 14

    assert run("evaluate", "--config", mini, "--model", "all", "--ticker", "all",
               "--out", out_dir, "--svg") == 0
    report_dir = out_dir / "report"
    md = (report_dir / "report.md").read_text()
    for label in ("LSTM", "Bidirectional LSTM", "Linear regression", "ARIMA",
                  "KNN", "Additive trend", "Random forest (sentiment)"):
        assert f"| {label} |" in md
    assert (report_dir / "metrics.csv").exists()
    assert (report_dir / "correlation_AAA.csv").exists()
    assert list(report_dir.glob("*.svg"))

    # re-render from the saved evaluation
    assert run("report", "--config", mini, "--out", out_dir) == 0
    assert (report_dir / "report.md").read_text() == md


def test_predict_date_gives_single_row(mini, tmp_path, capsys):
    out_dir = tmp_path / "single"
    assert run("train", "--config", mini, "--model", "additive", "--ticker", "AAA",
               "--out", out_dir) == 0
    config = load_config(mini, out_override=out_dir)
    from stockcast.pipeline import PipelineData

    last_date = PipelineData(config).panel("AAA").dates[-1]
    assert run("evaluate", "--config", mini, "--model", "additive", "--ticker", "AAA",
               "--out", out_dir, "--predict-date", last_date.isoformat()) == 0
    doc = json.loads((out_dir / "report" / "forecast_report.json").read_text())
    assert len(doc["entries"]) == 1
    assert len(doc["entries"][0]["dates"]) == 1


def test_gridsearch_window_with_fast_model(mini, tmp_path, capsys):
    out_dir = tmp_path / "grid"
    assert run("gridsearch-window", "--config", mini, "--model", "knn", "--ticker", "AAA",
               "--out", out_dir) == 0
    lines = (out_dir / "gridsearch_AAA_knn.csv").read_text().strip().splitlines()
    assert lines[0] == "window,val_rmse"
    assert len(lines) == 3  # two configured windows
    assert "best window" in capsys.readouterr().out


def test_ticker_outside_universe_fails(mini, capsys):
    assert run("sentiment", "--config", mini, "--ticker", "ZZZ") == 1
    assert "universe" in capsys.readouterr().err
