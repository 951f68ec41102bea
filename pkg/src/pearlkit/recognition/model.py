"""Recognition network: task features in, per-primitive scores out.

The scores are mixed into the base grammar per context (see Grammar), so
training minimizes the description length of each dream's generating program
under the grammar the network induces for that dream's task, plus a small
binary cross-entropy head predicting which primitives the program uses.

Gradients are computed by hand; the mixture keeps variables on the base
share, so only primitive-choice contexts carry signal into the network.
"""

from __future__ import annotations

import json
import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..lang.library import Library, library_fingerprint
from ..lang.program import Var
from ..synthesis.grammar import Grammar, derivation_choices
from .dream import DreamedTask
from .features import FEATURE_DIM, FEATURE_TABLE_VERSION, featurize_task

log = logging.getLogger(__name__)

HIDDEN = 128


class RecognitionModel:
    """Two-layer tanh network, 64 -> 128 -> one score per primitive."""

    def __init__(self, library: Library, seed: int = 0, hidden: int = HIDDEN,
                 mix: float = 0.5):
        self.library = library
        self.fingerprint = library_fingerprint(library)
        self.hidden = hidden
        self.mix = float(mix)
        n = len(library)
        rng = np.random.default_rng(seed)
        self.w1 = rng.normal(0.0, 1.0 / math.sqrt(FEATURE_DIM), (hidden, FEATURE_DIM))
        self.b1 = np.zeros(hidden)
        self.w2 = rng.normal(0.0, 1.0 / math.sqrt(hidden), (n, hidden))
        self.b2 = np.zeros(n)

    # -- inference -----------------------------------------------------------

    def forward(self, x: np.ndarray) -> np.ndarray:
        return self.w2 @ np.tanh(self.w1 @ x + self.b1) + self.b2

    def induce_from_features(self, base: Grammar, x: np.ndarray) -> Grammar:
        return base.with_scores(self.forward(x), self.mix)

    def induce(self, base: Grammar, task) -> Grammar:
        return self.induce_from_features(base, featurize_task(task))

    # -- persistence -----------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "format": "recognition-model",
            "feature_version": FEATURE_TABLE_VERSION,
            "library_fingerprint": self.fingerprint,
            "hidden": self.hidden,
            "mix": self.mix,
            "w1": self.w1.tolist(),
            "b1": self.b1.tolist(),
            "w2": self.w2.tolist(),
            "b2": self.b2.tolist(),
        }

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json()), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path, library: Library) -> "RecognitionModel":
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
        if obj.get("feature_version") != FEATURE_TABLE_VERSION:
            raise ValueError(
                f"checkpoint feature table v{obj.get('feature_version')} does not "
                f"match this build (v{FEATURE_TABLE_VERSION})"
            )
        fp = library_fingerprint(library)
        if obj.get("library_fingerprint") != fp:
            raise ValueError(
                f"checkpoint was trained against library "
                f"{obj.get('library_fingerprint')}, current library is {fp}"
            )
        model = cls.__new__(cls)
        model.library = library
        model.fingerprint = fp
        model.hidden = int(obj["hidden"])
        model.mix = float(obj["mix"])
        model.w1 = np.asarray(obj["w1"], dtype=float)
        model.b1 = np.asarray(obj["b1"], dtype=float)
        model.w2 = np.asarray(obj["w2"], dtype=float)
        model.b2 = np.asarray(obj["b2"], dtype=float)
        if model.w1.shape != (model.hidden, FEATURE_DIM) or model.w2.shape != (
            len(library), model.hidden,
        ):
            raise ValueError("checkpoint weight shapes do not match the library")
        return model


# --------------------------------------------------------------------------
# Dream encoding: everything about the loss that does not depend on weights


@dataclass
class _Encoded:
    x: np.ndarray                      # task features
    y: np.ndarray                      # primitive-usage indicator
    # primitive-choice contexts: admissible indices, their base probabilities,
    # and the chosen production's position within the context
    contexts: list[tuple[np.ndarray, np.ndarray, int]] = field(default_factory=list)
    # variable choices: (base var logp, log n_matching, context had primitives)
    var_choices: list[tuple[float, float, bool]] = field(default_factory=list)


def encode_dreams(dreams: list[DreamedTask], base: Grammar) -> list[_Encoded]:
    if base.model_scores is not None:
        raise ValueError("encode against the base grammar, not an induced one")
    lib = base.library
    out = []
    for d in dreams:
        enc = _Encoded(featurize_task(d.task), np.zeros(len(lib)))
        for req, env, head in derivation_choices(d.program, lib):
            matching = [i for i, t in enumerate(env) if t == req]
            table = base.productions(req, len(matching))
            if isinstance(head, Var):
                enc.var_choices.append(
                    (table.var_logp, math.log(len(matching)),
                     bool(table.prim_indices))
                )
            else:
                idx = lib.index[head.name]
                enc.y[idx] = 1.0
                pos = table.prim_indices.index(idx)
                enc.contexts.append(
                    (np.asarray(table.prim_indices),
                     np.exp(np.asarray(table.prim_logps)),
                     pos)
                )
        out.append(enc)
    return out


def _dl_terms(enc: _Encoded, s: np.ndarray, mix: float):
    """Description length of the label under the induced grammar, plus the
    gradient of that DL with respect to the scores."""
    dl = 0.0
    for base_var, log_n, had_prims in enc.var_choices:
        # contexts without primitives keep their base distribution untouched
        logp = base_var - log_n if not had_prims else math.log(mix) + base_var - log_n
        dl -= logp
    ds = np.zeros_like(s)
    for idxs, base_p, pos in enc.contexts:
        sa = s[idxs]
        e = np.exp(sa - sa.max())
        q = e / e.sum()
        m = mix * base_p + (1.0 - mix) * q
        dl -= math.log(m[pos])
        coeff = (1.0 - mix) * q[pos] / m[pos]
        g = coeff * q
        g[pos] -= coeff
        ds[idxs] += g
    return dl, ds


def _bce_terms(enc: _Encoded, s: np.ndarray):
    n = len(s)
    # mean over primitives of -log p(usage); logaddexp keeps large scores stable
    loss = float(np.mean(np.logaddexp(0.0, s) - enc.y * s))
    grad = (1.0 / (1.0 + np.exp(-s)) - enc.y) / n
    return loss, grad


def batch_loss(model: RecognitionModel, encs: list[_Encoded],
               bce_weight: float = 1.0) -> float:
    total = 0.0
    for enc in encs:
        s = model.forward(enc.x)
        dl, _ = _dl_terms(enc, s, model.mix)
        bce, _ = _bce_terms(enc, s)
        total += dl + bce_weight * bce
    return total / len(encs)


def batch_loss_and_grad(model: RecognitionModel, encs: list[_Encoded],
                        bce_weight: float = 1.0):
    grads = {
        "w1": np.zeros_like(model.w1), "b1": np.zeros_like(model.b1),
        "w2": np.zeros_like(model.w2), "b2": np.zeros_like(model.b2),
    }
    total = 0.0
    for enc in encs:
        z1 = model.w1 @ enc.x + model.b1
        h = np.tanh(z1)
        s = model.w2 @ h + model.b2
        dl, ds = _dl_terms(enc, s, model.mix)
        bce, dbce = _bce_terms(enc, s)
        total += dl + bce_weight * bce
        ds = ds + bce_weight * dbce
        grads["w2"] += np.outer(ds, h)
        grads["b2"] += ds
        dh = model.w2.T @ ds
        dz1 = dh * (1.0 - h * h)
        grads["w1"] += np.outer(dz1, enc.x)
        grads["b1"] += dz1
    b = len(encs)
    for k in grads:
        grads[k] /= b
    return total / b, grads


def mean_dream_dl(dreams: list[DreamedTask], base: Grammar,
                  model: RecognitionModel | None = None) -> float:
    """Mean label DL: under per-task induced grammars when a model is given,
    under the base grammar otherwise."""
    encs = encode_dreams(dreams, base)
    total = 0.0
    for enc in encs:
        if model is None:
            for base_var, log_n, _had in enc.var_choices:
                total -= base_var - log_n
            for _idxs, base_p, pos in enc.contexts:
                total -= math.log(base_p[pos])
        else:
            dl, _ = _dl_terms(enc, model.forward(enc.x), model.mix)
            total += dl
    return total / len(dreams)


def train_model(
    model: RecognitionModel,
    dreams: list[DreamedTask],
    base: Grammar,
    steps: int = 2000,
    lr: float = 0.05,
    momentum: float = 0.9,
    batch_size: int = 16,
    seed: int = 0,
    bce_weight: float = 1.0,
    log_every: int = 100,
    time_budget: float | None = None,
) -> list[tuple[int, float]]:
    """Minibatch SGD with momentum; the learning rate drops by 10x at the
    halfway step.  Returns (step, loss) history sampled every log_every steps.
    A non-finite loss aborts with diagnostics rather than training onward."""
    if not dreams:
        raise ValueError("cannot train on an empty dream set")
    encs = encode_dreams(dreams, base)
    rng = np.random.default_rng(seed)
    velocity = {k: np.zeros_like(v) for k, v in (
        ("w1", model.w1), ("b1", model.b1), ("w2", model.w2), ("b2", model.b2),
    )}
    params = {"w1": model.w1, "b1": model.b1, "w2": model.w2, "b2": model.b2}
    history: list[tuple[int, float]] = []
    order: list[int] = []
    t0 = time.monotonic()
    rate = lr
    for step in range(steps):
        if steps >= 2 and step == steps // 2:
            rate = lr / 10.0
        if len(order) < batch_size:
            order.extend(rng.permutation(len(encs)).tolist())
        batch = [encs[i] for i in order[:batch_size]]
        del order[:batch_size]
        loss, grads = batch_loss_and_grad(model, batch, bce_weight)
        if not math.isfinite(loss):
            raise RuntimeError(
                f"training diverged at step {step}: loss={loss!r}, lr={rate}, "
                f"grad norms=" + ", ".join(
                    f"{k}={float(np.linalg.norm(g)):.3g}" for k, g in grads.items()
                )
            )
        for k, p in params.items():
            velocity[k] = momentum * velocity[k] - rate * grads[k]
            p += velocity[k]
        if step % log_every == 0 or step == steps - 1:
            history.append((step, loss))
            log.info("recognition step %d loss %.4f lr %.4g", step, loss, rate)
        if time_budget is not None and time.monotonic() - t0 > time_budget:
            history.append((step, loss))
            break
    return history
