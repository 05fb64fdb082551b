"""Versioned JSON envelope for trained model artifacts.

Floats are emitted at full repr precision, so serialization round-trips
bit-exactly; no timestamps or other run-varying fields are written, so a
rerun with the same seed produces byte-identical files.
"""

from __future__ import annotations

import json
from datetime import date
from pathlib import Path

import numpy as np

from ..dataset import MinMaxScaler
from ..errors import ArtifactError
from .arima import ArimaModel, ArimaSpec
from .forest import ForestConfig, ForestModel, RegressionTree
from .knn import KnnModel
from .linear import LinearModel
from .lstm import DenseParams, LayerParams, LstmParams, LstmTopology, NeuralModelArtifact
from .persistence import PersistenceModel
from .trend import TrendModel

FORMAT_NAME = "stockcast-artifact"
FORMAT_VERSION = 1

MODEL_KINDS = ("lstm", "bilstm", "linreg", "arima", "knn", "additive", "forest")
ALL_KINDS = MODEL_KINDS + ("persistence",)


def _arr(a) -> list:
    return np.asarray(a, dtype=np.float64).tolist()


def _date(d) -> str | None:
    return None if d is None else d.isoformat()


def _parse_date(s) -> date | None:
    return None if s is None else date.fromisoformat(s)


def _scaler_payload(scaler: MinMaxScaler | None) -> dict | None:
    if scaler is None:
        return None
    return {
        "mins": _arr(scaler.mins),
        "maxs": _arr(scaler.maxs),
        "feature_names": list(scaler.feature_names),
    }


def _scaler_from(payload: dict | None) -> MinMaxScaler | None:
    if payload is None:
        return None
    return MinMaxScaler(
        mins=np.asarray(payload["mins"], dtype=np.float64),
        maxs=np.asarray(payload["maxs"], dtype=np.float64),
        feature_names=tuple(payload["feature_names"]),
    )


def _neural_payload(model: NeuralModelArtifact) -> dict:
    topo = model.topology

    def layer(l: LayerParams) -> dict:
        return {"w_x": _arr(l.w_x), "w_h": _arr(l.w_h), "b": _arr(l.b)}

    return {
        "topology": {
            "layer_sizes": list(topo.layer_sizes),
            "dense_sizes": list(topo.dense_sizes),
            "window": topo.window,
            "bidirectional": topo.bidirectional,
            "dense_activation": topo.dense_activation,
            "dropout": topo.dropout,
        },
        "params": {
            "layers": [layer(l) for l in model.params.layers],
            "backward_layers": [layer(l) for l in model.params.backward_layers],
            "dense": [{"w": _arr(d.w), "b": _arr(d.b)} for d in model.params.dense],
        },
        "scaler": _scaler_payload(model.scaler),
        "history": list(model.history),
        "seed": model.seed,
        "best_epoch": model.best_epoch,
        "train_end": _date(model.train_end),
    }


def _neural_from(kind: str, payload: dict) -> NeuralModelArtifact:
    t = payload["topology"]
    topology = LstmTopology(
        layer_sizes=tuple(t["layer_sizes"]),
        dense_sizes=tuple(t["dense_sizes"]),
        window=t["window"],
        bidirectional=t["bidirectional"],
        dense_activation=t["dense_activation"],
        dropout=t["dropout"],
    )

    def layer(d: dict) -> LayerParams:
        return LayerParams(
            w_x=np.asarray(d["w_x"], dtype=np.float64),
            w_h=np.asarray(d["w_h"], dtype=np.float64),
            b=np.asarray(d["b"], dtype=np.float64),
        )

    params = LstmParams(
        layers=[layer(d) for d in payload["params"]["layers"]],
        backward_layers=[layer(d) for d in payload["params"]["backward_layers"]],
        dense=[
            DenseParams(np.asarray(d["w"], dtype=np.float64), np.asarray(d["b"], dtype=np.float64))
            for d in payload["params"]["dense"]
        ],
    )
    return NeuralModelArtifact(
        kind=kind,
        topology=topology,
        params=params,
        scaler=_scaler_from(payload["scaler"]),
        history=tuple(payload["history"]),
        seed=payload["seed"],
        best_epoch=payload["best_epoch"],
        train_end=_parse_date(payload["train_end"]),
    )


def _forest_payload(model: ForestModel) -> dict:
    cfg = model.config
    return {
        "config": {
            "n_trees": cfg.n_trees,
            "max_depth": cfg.max_depth,
            "min_samples_leaf": cfg.min_samples_leaf,
            "max_features": cfg.max_features,
            "bootstrap": cfg.bootstrap,
            "seed": cfg.seed,
        },
        "feature_names": list(model.feature_names),
        "trees": [
            {
                "feature": np.asarray(t.feature).tolist(),
                "threshold": _arr(t.threshold),
                "left": np.asarray(t.left).tolist(),
                "right": np.asarray(t.right).tolist(),
                "value": _arr(t.value),
            }
            for t in model.trees
        ],
        "train_end": _date(model.train_end),
    }


def _forest_from(payload: dict) -> ForestModel:
    cfg = payload["config"]
    trees = tuple(
        RegressionTree(
            feature=np.asarray(t["feature"], dtype=np.int64),
            threshold=np.asarray(t["threshold"], dtype=np.float64),
            left=np.asarray(t["left"], dtype=np.int64),
            right=np.asarray(t["right"], dtype=np.int64),
            value=np.asarray(t["value"], dtype=np.float64),
        )
        for t in payload["trees"]
    )
    return ForestModel(
        trees=trees,
        feature_names=tuple(payload["feature_names"]),
        config=ForestConfig(
            n_trees=cfg["n_trees"],
            max_depth=cfg["max_depth"],
            min_samples_leaf=cfg["min_samples_leaf"],
            max_features=cfg["max_features"],
            bootstrap=cfg["bootstrap"],
            seed=cfg["seed"],
        ),
        train_end=_parse_date(payload["train_end"]),
    )


def _payload_of(model) -> tuple[str, dict]:
    if isinstance(model, NeuralModelArtifact):
        return model.kind, _neural_payload(model)
    if isinstance(model, ForestModel):
        return "forest", _forest_payload(model)
    if isinstance(model, LinearModel):
        return "linreg", {
            "coefficients": _arr(model.coefficients),
            "intercept": model.intercept,
            "ridge_fallback": model.ridge_fallback,
            "feature_count": model.feature_count,
            "train_end": _date(model.train_end),
        }
    if isinstance(model, KnnModel):
        return "knn", {
            "k": model.k,
            "train_inputs": _arr(model.train_inputs),
            "train_targets": _arr(model.train_targets),
            "cv_rmse": {str(k): v for k, v in model.cv_rmse.items()},
            "scaler": _scaler_payload(model.scaler),
            "train_end": _date(model.train_end),
        }
    if isinstance(model, ArimaModel):
        return "arima", {
            "order": list(model.spec.order),
            "seasonal_order": list(model.spec.seasonal_order),
            "max_evals": model.spec.max_evals,
            "ar": _arr(model.ar),
            "seasonal_ar": _arr(model.seasonal_ar),
            "ma": _arr(model.ma),
            "seasonal_ma": _arr(model.seasonal_ma),
            "train_series": _arr(model.train_series),
            "converged": model.converged,
            "n_evals": model.n_evals,
            "css": model.css,
            "train_end": _date(model.train_end),
        }
    if isinstance(model, TrendModel):
        return "additive", {
            "intercept": model.intercept,
            "slope": model.slope,
            "n_train": model.n_train,
            "train_end": _date(model.train_end),
        }
    if isinstance(model, PersistenceModel):
        return "persistence", {"train_end": _date(model.train_end)}
    raise ArtifactError(f"cannot serialize model of type {type(model).__name__}")


def _model_from(kind: str, payload: dict):
    if kind in ("lstm", "bilstm"):
        return _neural_from(kind, payload)
    if kind == "forest":
        return _forest_from(payload)
    if kind == "linreg":
        return LinearModel(
            coefficients=np.asarray(payload["coefficients"], dtype=np.float64),
            intercept=payload["intercept"],
            ridge_fallback=payload["ridge_fallback"],
            feature_count=payload["feature_count"],
            train_end=_parse_date(payload["train_end"]),
        )
    if kind == "knn":
        return KnnModel(
            k=payload["k"],
            train_inputs=np.asarray(payload["train_inputs"], dtype=np.float64),
            train_targets=np.asarray(payload["train_targets"], dtype=np.float64),
            cv_rmse={int(k): v for k, v in payload["cv_rmse"].items()},
            scaler=_scaler_from(payload["scaler"]),
            train_end=_parse_date(payload["train_end"]),
        )
    if kind == "arima":
        return ArimaModel(
            spec=ArimaSpec(
                order=tuple(payload["order"]),
                seasonal_order=tuple(payload["seasonal_order"]),
                max_evals=payload["max_evals"],
            ),
            ar=np.asarray(payload["ar"], dtype=np.float64),
            seasonal_ar=np.asarray(payload["seasonal_ar"], dtype=np.float64),
            ma=np.asarray(payload["ma"], dtype=np.float64),
            seasonal_ma=np.asarray(payload["seasonal_ma"], dtype=np.float64),
            train_series=np.asarray(payload["train_series"], dtype=np.float64),
            converged=payload["converged"],
            n_evals=payload["n_evals"],
            css=payload["css"],
            train_end=_parse_date(payload["train_end"]),
        )
    if kind == "additive":
        return TrendModel(
            intercept=payload["intercept"],
            slope=payload["slope"],
            n_train=payload["n_train"],
            train_end=_parse_date(payload["train_end"]),
        )
    if kind == "persistence":
        return PersistenceModel(train_end=_parse_date(payload["train_end"]))
    raise ArtifactError(f"unknown artifact kind {kind!r}")


def dumps_artifact(model) -> str:
    kind, payload = _payload_of(model)
    doc = {
        "format": FORMAT_NAME,
        "format_version": FORMAT_VERSION,
        "kind": kind,
        "payload": payload,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def loads_artifact(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ArtifactError(f"artifact is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_NAME:
        raise ArtifactError("not a stockcast artifact")
    if doc.get("format_version") != FORMAT_VERSION:
        raise ArtifactError(f"unsupported artifact version {doc.get('format_version')!r}")
    return _model_from(doc["kind"], doc["payload"])


def save_artifact(model, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_artifact(model), encoding="utf-8")
    return path


def load_artifact(path: str | Path):
    path = Path(path)
    if not path.exists():
        raise ArtifactError(f"artifact file not found: {path}")
    return loads_artifact(path.read_text(encoding="utf-8"))


def artifact_kind(model) -> str:
    return _payload_of(model)[0]
