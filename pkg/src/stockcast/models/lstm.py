"""Stacked LSTM regressor with exact backpropagation through time.

Everything runs in float64 numpy. Gate order inside the fused weight
matrices is [input, forget, cell, output]. The bidirectional variant runs
a second parameter stack over the reversed window and concatenates the two
final hidden states before the dense layers.

Training is mini-batch Adam with seeded shuffling and early stopping on
validation RMSE; given identical data, topology, config, and seed, the
returned artifact is bit-identical across runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..dataset import MinMaxScaler, SplitSpec, WindowedDataset
from ..errors import DivergedLoss, ShapeMismatch, TooFewSamples

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


@dataclass(frozen=True)
class LstmTopology:
    layer_sizes: tuple[int, ...] = (128, 64)
    dense_sizes: tuple[int, ...] = (25, 1)
    window: int = 60
    bidirectional: bool = False
    dense_activation: str = "identity"
    dropout: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "layer_sizes", tuple(int(s) for s in self.layer_sizes))
        object.__setattr__(self, "dense_sizes", tuple(int(s) for s in self.dense_sizes))
        if not self.layer_sizes or any(s < 1 for s in self.layer_sizes):
            raise ValueError("layer sizes must all be >= 1")
        if not self.dense_sizes or any(s < 1 for s in self.dense_sizes):
            raise ValueError("dense sizes must all be >= 1")
        if self.dense_sizes[-1] != 1:
            raise ValueError("final dense layer must have size 1")
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if self.dense_activation not in ("identity", "relu"):
            raise ValueError("dense activation must be 'identity' or 'relu'")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError("dropout must be in [0, 1)")


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 200
    batch_size: int = 32
    learning_rate: float = 1e-3
    seed: int = 0
    early_stop_patience: int = 10
    gradient_clip: float | None = None

    def __post_init__(self) -> None:
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if self.batch_size < 1:
            raise ValueError("batch size must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning rate must be > 0")
        if self.early_stop_patience < 0:
            raise ValueError("patience must be >= 0")


@dataclass
class LayerParams:
    """One recurrent layer: fused (D, 4H) input and (H, 4H) recurrent weights."""

    w_x: np.ndarray
    w_h: np.ndarray
    b: np.ndarray


@dataclass
class DenseParams:
    w: np.ndarray
    b: np.ndarray


@dataclass
class LstmParams:
    layers: list[LayerParams]
    dense: list[DenseParams]
    backward_layers: list[LayerParams] = field(default_factory=list)

    def arrays(self) -> list[np.ndarray]:
        """All parameter tensors in a fixed, serialization-stable order."""
        out: list[np.ndarray] = []
        for layer in self.layers:
            out += [layer.w_x, layer.w_h, layer.b]
        for layer in self.backward_layers:
            out += [layer.w_x, layer.w_h, layer.b]
        for dense in self.dense:
            out += [dense.w, dense.b]
        return out

    def flatten(self) -> np.ndarray:
        return np.concatenate([a.ravel() for a in self.arrays()])

    def unflatten(self, flat: np.ndarray) -> None:
        """Write a flat vector back into the parameter tensors in place."""
        offset = 0
        for a in self.arrays():
            a[...] = flat[offset : offset + a.size].reshape(a.shape)
            offset += a.size
        if offset != flat.size:
            raise ShapeMismatch("flat vector does not match parameter count")

    def copy(self) -> "LstmParams":
        return LstmParams(
            layers=[LayerParams(l.w_x.copy(), l.w_h.copy(), l.b.copy()) for l in self.layers],
            dense=[DenseParams(d.w.copy(), d.b.copy()) for d in self.dense],
            backward_layers=[
                LayerParams(l.w_x.copy(), l.w_h.copy(), l.b.copy()) for l in self.backward_layers
            ],
        )


def _init_layer(rng: np.random.Generator, d_in: int, hidden: int) -> LayerParams:
    # Xavier-uniform input weights, scaled-uniform recurrent weights,
    # forget-gate bias 1.0 to keep early cell states alive
    limit_x = np.sqrt(6.0 / (d_in + hidden))
    w_x = rng.uniform(-limit_x, limit_x, size=(d_in, 4 * hidden))
    limit_h = 1.0 / np.sqrt(hidden)
    w_h = rng.uniform(-limit_h, limit_h, size=(hidden, 4 * hidden))
    b = np.zeros(4 * hidden)
    b[hidden : 2 * hidden] = 1.0
    return LayerParams(w_x, w_h, b)


def init_params(topology: LstmTopology, seed: int) -> LstmParams:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, 0])))
    dims = [1, *topology.layer_sizes[:-1]]
    layers = [_init_layer(rng, d, h) for d, h in zip(dims, topology.layer_sizes)]
    backward = (
        [_init_layer(rng, d, h) for d, h in zip(dims, topology.layer_sizes)]
        if topology.bidirectional
        else []
    )
    final_h = topology.layer_sizes[-1] * (2 if topology.bidirectional else 1)
    dense_dims = [final_h, *topology.dense_sizes]
    dense = []
    for d_in, d_out in zip(dense_dims, dense_dims[1:]):
        limit = np.sqrt(6.0 / (d_in + d_out))
        dense.append(DenseParams(rng.uniform(-limit, limit, size=(d_in, d_out)), np.zeros(d_out)))
    return LstmParams(layers=layers, dense=dense, backward_layers=backward)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


@dataclass
class _LayerCache:
    inputs: np.ndarray      # (B, W, D)
    h_prev: np.ndarray      # (B, W, H) hidden state entering each step
    c_prev: np.ndarray      # (B, W, H)
    gates: np.ndarray       # (B, W, 4H) post-activation [i, f, g, o]
    c: np.ndarray           # (B, W, H)
    tanh_c: np.ndarray      # (B, W, H)
    h_seq: np.ndarray       # (B, W, H) layer output


def _layer_forward(layer: LayerParams, seq: np.ndarray) -> _LayerCache:
    batch, steps, d_in = seq.shape
    hidden = layer.w_h.shape[0]
    zx = seq.reshape(batch * steps, d_in) @ layer.w_x
    zx = zx.reshape(batch, steps, 4 * hidden)
    cache = _LayerCache(
        inputs=seq,
        h_prev=np.empty((batch, steps, hidden)),
        c_prev=np.empty((batch, steps, hidden)),
        gates=np.empty((batch, steps, 4 * hidden)),
        c=np.empty((batch, steps, hidden)),
        tanh_c=np.empty((batch, steps, hidden)),
        h_seq=np.empty((batch, steps, hidden)),
    )
    h = np.zeros((batch, hidden))
    c = np.zeros((batch, hidden))
    for t in range(steps):
        z = zx[:, t] + h @ layer.w_h + layer.b
        i = _sigmoid(z[:, :hidden])
        f = _sigmoid(z[:, hidden : 2 * hidden])
        g = np.tanh(z[:, 2 * hidden : 3 * hidden])
        o = _sigmoid(z[:, 3 * hidden :])
        cache.h_prev[:, t] = h
        cache.c_prev[:, t] = c
        c = f * c + i * g
        tanh_c = np.tanh(c)
        h = o * tanh_c
        cache.gates[:, t, :hidden] = i
        cache.gates[:, t, hidden : 2 * hidden] = f
        cache.gates[:, t, 2 * hidden : 3 * hidden] = g
        cache.gates[:, t, 3 * hidden :] = o
        cache.c[:, t] = c
        cache.tanh_c[:, t] = tanh_c
        cache.h_seq[:, t] = h
    return cache


def _layer_backward(
    layer: LayerParams, cache: _LayerCache, d_out_seq: np.ndarray
) -> tuple[LayerParams, np.ndarray]:
    """Gradients for one layer given dL/d(output sequence)."""
    batch, steps, hidden = cache.h_seq.shape
    dz_all = np.empty((batch, steps, 4 * hidden))
    dh_next = np.zeros((batch, hidden))
    dc_next = np.zeros((batch, hidden))
    for t in range(steps - 1, -1, -1):
        i = cache.gates[:, t, :hidden]
        f = cache.gates[:, t, hidden : 2 * hidden]
        g = cache.gates[:, t, 2 * hidden : 3 * hidden]
        o = cache.gates[:, t, 3 * hidden :]
        tanh_c = cache.tanh_c[:, t]
        dh = d_out_seq[:, t] + dh_next
        do = dh * tanh_c
        dc = dc_next + dh * o * (1.0 - tanh_c * tanh_c)
        di = dc * g
        dg = dc * i
        df = dc * cache.c_prev[:, t]
        dc_next = dc * f
        dz = dz_all[:, t]
        dz[:, :hidden] = di * i * (1.0 - i)
        dz[:, hidden : 2 * hidden] = df * f * (1.0 - f)
        dz[:, 2 * hidden : 3 * hidden] = dg * (1.0 - g * g)
        dz[:, 3 * hidden :] = do * o * (1.0 - o)
        dh_next = dz @ layer.w_h.T
    flat_dz = dz_all.reshape(batch * steps, 4 * hidden)
    d_in = cache.inputs.shape[2]
    grads = LayerParams(
        w_x=cache.inputs.reshape(batch * steps, d_in).T @ flat_dz,
        w_h=cache.h_prev.reshape(batch * steps, hidden).T @ flat_dz,
        b=flat_dz.sum(axis=0),
    )
    d_input_seq = (flat_dz @ layer.w_x.T).reshape(batch, steps, d_in)
    return grads, d_input_seq


@dataclass
class _ForwardCache:
    stacks: list[list[_LayerCache]]   # [forward, backward?] lists of layer caches
    dense_inputs: list[np.ndarray]
    dense_pre: list[np.ndarray]
    final_h: np.ndarray
    dropout_masks: list[list[np.ndarray | None]]
    output: np.ndarray                # (B,)


def _run_stack(
    layers: Sequence[LayerParams],
    seq: np.ndarray,
    dropout: float,
    rng: np.random.Generator | None,
) -> tuple[list[_LayerCache], list[np.ndarray | None], np.ndarray]:
    caches: list[_LayerCache] = []
    masks: list[np.ndarray | None] = []
    current = seq
    for layer in layers:
        cache = _layer_forward(layer, current)
        caches.append(cache)
        out = cache.h_seq
        if dropout > 0.0 and rng is not None:
            mask = (rng.random(out.shape) >= dropout) / (1.0 - dropout)
            out = out * mask
            masks.append(mask)
        else:
            masks.append(None)
        current = out
    return caches, masks, current


def _forward_batch(
    params: LstmParams,
    topology: LstmTopology,
    inputs: np.ndarray,
    dropout_rng: np.random.Generator | None = None,
) -> _ForwardCache:
    if inputs.ndim != 2:
        raise ShapeMismatch("expected a (batch, window) input array")
    seq = inputs[:, :, None]
    dropout = topology.dropout if dropout_rng is not None else 0.0
    fwd_caches, fwd_masks, fwd_out = _run_stack(params.layers, seq, dropout, dropout_rng)
    stacks = [fwd_caches]
    all_masks = [fwd_masks]
    finals = [fwd_out[:, -1]]
    if topology.bidirectional:
        if not params.backward_layers:
            raise ShapeMismatch("bidirectional topology requires backward parameters")
        rev = seq[:, ::-1]
        bwd_caches, bwd_masks, bwd_out = _run_stack(params.backward_layers, rev, dropout, dropout_rng)
        stacks.append(bwd_caches)
        all_masks.append(bwd_masks)
        finals.append(bwd_out[:, -1])
    final_h = np.concatenate(finals, axis=1)

    a = final_h
    dense_inputs: list[np.ndarray] = []
    dense_pre: list[np.ndarray] = []
    for k, dense in enumerate(params.dense):
        dense_inputs.append(a)
        z = a @ dense.w + dense.b
        dense_pre.append(z)
        last = k == len(params.dense) - 1
        if last or topology.dense_activation == "identity":
            a = z
        else:
            a = np.maximum(z, 0.0)
    return _ForwardCache(
        stacks=stacks,
        dense_inputs=dense_inputs,
        dense_pre=dense_pre,
        final_h=final_h,
        dropout_masks=all_masks,
        output=a[:, 0],
    )


def lstm_forward(params: LstmParams, topology: LstmTopology, window: np.ndarray) -> float:
    """Predict one scaled next value from one scaled window."""
    window = np.asarray(window, dtype=np.float64)
    if window.ndim != 1 or len(window) != topology.window:
        raise ShapeMismatch(f"expected a window of length {topology.window}")
    return float(_forward_batch(params, topology, window[None, :]).output[0])


def lstm_batch_forward(params: LstmParams, topology: LstmTopology, inputs: np.ndarray) -> np.ndarray:
    inputs = np.asarray(inputs, dtype=np.float64)
    if inputs.shape[1] != topology.window:
        raise ShapeMismatch(f"expected windows of length {topology.window}")
    return _forward_batch(params, topology, inputs).output


def lstm_gradients(
    params: LstmParams,
    topology: LstmTopology,
    inputs: np.ndarray,
    targets: np.ndarray,
    dropout_rng: np.random.Generator | None = None,
) -> tuple[float, LstmParams]:
    """Mean-squared-error loss and its exact gradients for one batch."""
    inputs = np.asarray(inputs, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    if len(inputs) == 0:
        raise TooFewSamples("empty batch")
    if inputs.shape[1] != topology.window or len(inputs) != len(targets):
        raise ShapeMismatch("batch shapes do not match the topology")
    cache = _forward_batch(params, topology, inputs, dropout_rng)
    batch = len(inputs)
    residual = cache.output - targets
    loss = float(residual @ residual) / batch

    grads = LstmParams(
        layers=[LayerParams(np.zeros_like(l.w_x), np.zeros_like(l.w_h), np.zeros_like(l.b)) for l in params.layers],
        dense=[DenseParams(np.zeros_like(d.w), np.zeros_like(d.b)) for d in params.dense],
        backward_layers=[
            LayerParams(np.zeros_like(l.w_x), np.zeros_like(l.w_h), np.zeros_like(l.b))
            for l in params.backward_layers
        ],
    )

    d_a = (2.0 / batch) * residual[:, None]
    for k in range(len(params.dense) - 1, -1, -1):
        dense = params.dense[k]
        last = k == len(params.dense) - 1
        dz = d_a
        if not last and topology.dense_activation == "relu":
            dz = d_a * (cache.dense_pre[k] > 0.0)
        grads.dense[k].w[...] = cache.dense_inputs[k].T @ dz
        grads.dense[k].b[...] = dz.sum(axis=0)
        d_a = dz @ dense.w.T

    hidden_last = topology.layer_sizes[-1]
    d_finals = [d_a[:, :hidden_last]]
    if topology.bidirectional:
        d_finals.append(d_a[:, hidden_last:])

    stack_params = [params.layers, params.backward_layers] if topology.bidirectional else [params.layers]
    stack_grads = [grads.layers, grads.backward_layers] if topology.bidirectional else [grads.layers]
    for stack_i, (layer_list, grad_list) in enumerate(zip(stack_params, stack_grads)):
        caches = cache.stacks[stack_i]
        masks = cache.dropout_masks[stack_i]
        steps = caches[0].h_seq.shape[1]
        d_out = np.zeros_like(caches[-1].h_seq)
        d_out[:, steps - 1] = d_finals[stack_i]
        if masks[-1] is not None:
            d_out = d_out * masks[-1]
        for li in range(len(layer_list) - 1, -1, -1):
            layer_grads, d_in = _layer_backward(layer_list[li], caches[li], d_out)
            grad_list[li].w_x[...] = layer_grads.w_x
            grad_list[li].w_h[...] = layer_grads.w_h
            grad_list[li].b[...] = layer_grads.b
            if li > 0:
                d_out = d_in
                if masks[li - 1] is not None:
                    d_out = d_out * masks[li - 1]
    return loss, grads


@dataclass(frozen=True)
class NeuralModelArtifact:
    """Trained network plus everything needed to reproduce and apply it."""

    kind: str
    topology: LstmTopology
    params: LstmParams
    scaler: MinMaxScaler | None
    history: tuple[dict, ...]
    seed: int
    best_epoch: int
    train_end: object | None = None  # TradingDate of the last training row

    def forward(self, scaled_window: np.ndarray) -> float:
        return lstm_forward(self.params, self.topology, scaled_window)


def predict_next(artifact: NeuralModelArtifact, recent_closes: np.ndarray) -> float:
    """Scale the last W raw closes, run the network, and unscale the output."""
    recent = np.asarray(recent_closes, dtype=np.float64)
    if recent.ndim != 1 or len(recent) != artifact.topology.window:
        raise ShapeMismatch(f"expected {artifact.topology.window} recent closes")
    if artifact.scaler is None:
        raise ShapeMismatch("artifact has no scaler; cannot accept raw prices")
    scaled = artifact.scaler.apply(recent)
    out = artifact.forward(scaled)
    return float(artifact.scaler.inverse(np.array([out]))[0])


def lstm_train(
    dataset: WindowedDataset,
    split: SplitSpec,
    topology: LstmTopology,
    config: TrainConfig,
    scaler: MinMaxScaler | None = None,
    train_end=None,
    kind: str = "lstm",
) -> NeuralModelArtifact:
    """Mini-batch Adam training with early stopping on validation RMSE.

    Batches are drawn in seeded-shuffled order; the artifact carries the
    parameters of the best validation epoch. epochs=0 returns the seeded
    initial parameters with an empty history.
    """
    if dataset.window_len != topology.window:
        raise ShapeMismatch("dataset window length does not match topology")
    train_x = dataset.inputs[split.train_slice]
    train_y = dataset.targets[split.train_slice]
    val_x = dataset.inputs[split.validation_slice]
    val_y = dataset.targets[split.validation_slice]
    if len(train_x) < config.batch_size:
        raise TooFewSamples(
            f"{len(train_x)} training samples < batch size {config.batch_size}"
        )

    params = init_params(topology, config.seed)
    shuffle_rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([config.seed, 1])))
    dropout_rng = (
        np.random.Generator(np.random.PCG64(np.random.SeedSequence([config.seed, 2])))
        if topology.dropout > 0.0
        else None
    )

    flat = params.flatten()
    m = np.zeros_like(flat)
    v = np.zeros_like(flat)
    step = 0

    best_val = np.inf
    best_flat = flat.copy()
    best_epoch = 0
    history: list[dict] = []
    since_best = 0

    for epoch in range(1, config.epochs + 1):
        order = shuffle_rng.permutation(len(train_x))
        epoch_loss = 0.0
        for start in range(0, len(order), config.batch_size):
            batch = order[start : start + config.batch_size]
            loss, grads = lstm_gradients(
                params, topology, train_x[batch], train_y[batch], dropout_rng
            )
            if not np.isfinite(loss):
                raise DivergedLoss(f"non-finite loss at epoch {epoch}")
            epoch_loss += loss * len(batch)
            grad_flat = grads.flatten()
            if config.gradient_clip is not None:
                norm = float(np.linalg.norm(grad_flat))
                if norm > config.gradient_clip:
                    grad_flat *= config.gradient_clip / norm
            step += 1
            m = ADAM_BETA1 * m + (1.0 - ADAM_BETA1) * grad_flat
            v = ADAM_BETA2 * v + (1.0 - ADAM_BETA2) * grad_flat * grad_flat
            m_hat = m / (1.0 - ADAM_BETA1**step)
            v_hat = v / (1.0 - ADAM_BETA2**step)
            flat = params.flatten() - config.learning_rate * m_hat / (np.sqrt(v_hat) + ADAM_EPS)
            params.unflatten(flat)
        train_loss = epoch_loss / len(train_x)

        val_pred = lstm_batch_forward(params, topology, val_x)
        val_residual = val_pred - val_y
        val_loss = float(val_residual @ val_residual) / len(val_y)
        if not np.isfinite(val_loss):
            raise DivergedLoss(f"non-finite validation loss at epoch {epoch}")
        history.append({"epoch": epoch, "train_loss": train_loss, "val_loss": val_loss})

        val_rmse = np.sqrt(val_loss)
        if val_rmse < best_val:
            best_val = val_rmse
            best_flat = params.flatten()
            best_epoch = epoch
            since_best = 0
        else:
            since_best += 1
            if since_best > config.early_stop_patience:
                break

    params.unflatten(best_flat)
    return NeuralModelArtifact(
        kind=kind,
        topology=topology,
        params=params,
        scaler=scaler,
        history=tuple(history),
        seed=config.seed,
        best_epoch=best_epoch,
        train_end=train_end,
    )
