"""Poincare-equivariant point-cloud network.

Layers combine pairwise-difference filters with Clebsch-Gordan contractions;
all coordinate information enters through centered differences, so outputs are
exactly translation invariant and transform under the homogeneous group action
representation-by-representation.  The readout averages the trivial-rep
channels, which an equivariant network keeps invariant.

Gradients are hand-written adjoints of the fixed contraction graph: the
vector-Jacobian product of every einsum stage is itself an einsum with the
other operands conjugated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .algebra import StructureConstants, algebra_by_name
from .clebsch import cg_solve
from .errors import DomainError, FormatError
from .numerics import AdamState, adam_step, expm
from .reps import AlgebraRep, trivial_rep, vector_rep

CG_RESIDUAL_TOL = 1e-6


def _einsum(spec, *ops):
    return np.einsum(spec, *ops, optimize=True)


@dataclass
class RepCatalog:
    """Representations available to a network plus their coupling tensors.

    ``cg[(q, l, m)]`` holds a (G, n_q, n_l, n_m) stack: the G independent ways
    of projecting rep_l x rep_m onto rep_q.  ``embed`` maps physical (t, x...)
    coordinates into the space of the coordinate-carrying rep ``q_embed``.
    """

    reps: list[AlgebraRep]
    q_embed: int
    cg: dict[tuple[int, int, int], np.ndarray]
    embed: np.ndarray

    def __post_init__(self):
        dims = self.dims
        triv = [i for i, r in enumerate(self.reps)
                if r.dim == 1 and np.abs(r.generators).max() == 0.0]
        if not triv:
            raise DomainError("catalog needs a trivial representation for the readout")
        self.trivial_index = triv[0]
        if self.embed.shape[0] != dims[self.q_embed]:
            raise DomainError("embed matrix rows must match the coordinate rep dimension")

    @property
    def dims(self) -> list[int]:
        return [r.dim for r in self.reps]

    @property
    def filter_reps(self) -> list[int]:
        """Reps in which Eq-7-style filters are nonzero."""
        out = {self.q_embed}
        out.update(q for (q, l, m) in self.cg
                   if l == self.q_embed and m == self.q_embed)
        return sorted(out)

    def paths(self, q: int) -> list[tuple[int, int, np.ndarray]]:
        """Deterministic (l, m, cg-tensor) contraction paths feeding rep q."""
        filt = self.filter_reps
        return [(l, m, self.cg[(q, l, m)])
                for l in filt for m in range(len(self.reps))
                if (q, l, m) in self.cg]

    def filter_cg(self, q: int) -> np.ndarray | None:
        return self.cg.get((q, self.q_embed, self.q_embed))

    def mix_degeneracy(self, q: int) -> int:
        return sum(c.shape[0] for _, _, c in self.paths(q))


def build_catalog(reps: list[AlgebraRep], q_embed: int, embed: np.ndarray | None = None,
                  count: int = 8, scale: float = 0.5, seed=0) -> RepCatalog:
    """Solve every rep_l x rep_m -> rep_q coupling and collect the nonzero ones.

    Each stored tensor is validated on held-out group elements inside cg_solve.
    """
    cg: dict[tuple[int, int, int], np.ndarray] = {}
    for q, rq in enumerate(reps):
        for l, rl in enumerate(reps):
            for m, rm in enumerate(reps):
                sol = cg_solve(rl, rm, rq, count=count, scale=scale,
                               seed=np.random.SeedSequence((seed, q, l, m)))
                if sol.nullspace_dim:
                    cg[(q, l, m)] = sol.nullspace.reshape(
                        sol.nullspace_dim, rq.dim, rl.dim, rm.dim)
    if embed is None:
        embed = np.eye(reps[q_embed].dim, dtype=np.complex128)
    return RepCatalog(reps, q_embed, cg, np.asarray(embed, dtype=np.complex128))


def default_catalog(algebra_name: str, learned: AlgebraRep | None = None,
                    count: int = 8, scale: float = 0.5, seed=0) -> RepCatalog:
    """Trivial + coordinate representation; optionally swap in a learned rep.

    A learned rep is bridged to physical coordinates by the intertwiner from
    the defining representation, so equivariance survives the basis change.
    """
    vec = vector_rep(algebra_name)
    one = trivial_rep(vec.algebra)
    if learned is None:
        return build_catalog([one, vec], q_embed=1, count=count, scale=scale, seed=seed)
    if learned.dim != vec.dim:
        raise DomainError(
            f"learned rep has dimension {learned.dim}, coordinates need {vec.dim}")
    sol = cg_solve(one, vec, learned, count=count, scale=scale,
                   seed=np.random.SeedSequence((seed, 404)))
    if sol.nullspace_dim != 1:
        raise DomainError(
            "learned rep is not isomorphic to the coordinate representation "
            f"(intertwiner space has dimension {sol.nullspace_dim})")
    bridge = sol.nullspace[0]  # maps defining-rep coordinates into learned space
    bridge = bridge / np.linalg.norm(bridge, 2) * np.sqrt(bridge.shape[0])
    return build_catalog([one, learned], q_embed=1, embed=bridge,
                         count=count, scale=scale, seed=seed)


@dataclass
class NetworkConfig:
    catalog: RepCatalog
    num_layers: int = 3
    num_channels: int = 3
    batch_size: int = 16
    num_classes: int = 2
    num_points: int = 64  # nominal cloud size; only used to scale the weight init
    seed: int = 0

    def __post_init__(self):
        if min(self.num_layers, self.num_channels, self.batch_size,
               self.num_classes, self.num_points) < 1:
            raise DomainError("layer, channel, batch, class and point counts must be positive")


@dataclass
class NetworkWeights:
    """Complex filter/mixing weights per layer plus the real invariant readout."""

    filters: list[dict[int, np.ndarray]]   # layer -> {q: (G,) complex}
    mixers: list[dict[int, np.ndarray]]    # layer -> {q: (C, G_total, C) complex}
    readout_w: np.ndarray                  # (C, num_classes) real
    readout_b: np.ndarray                  # (num_classes,) real


def init_weights(config: NetworkConfig) -> NetworkWeights:
    """Random complex init scaled so activations stay O(1) through the layers."""
    rng = np.random.default_rng(config.seed)
    cat = config.catalog
    nch = config.num_channels

    def cnormal(shape, scale):
        return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))

    filters, mixers = [], []
    for _ in range(config.num_layers):
        fl = {q: cnormal((cat.filter_cg(q).shape[0],), 1.0)
              for q in range(len(cat.reps)) if cat.filter_cg(q) is not None}
        mx = {}
        for q in range(len(cat.reps)):
            g_total = cat.mix_degeneracy(q)
            if g_total:
                # the layer update sums over points, channels and degeneracies
                scale = 1.0 / (config.num_points * np.sqrt(g_total * nch))
                mx[q] = cnormal((nch, g_total, nch), scale)
        filters.append(fl)
        mixers.append(mx)
    readout_w = rng.standard_normal((nch, config.num_classes)) / np.sqrt(nch)
    readout_b = np.zeros(config.num_classes)
    return NetworkWeights(filters, mixers, readout_w, readout_b)


def build_filters(x: np.ndarray, filter_weights: dict[int, np.ndarray],
                  catalog: RepCatalog) -> dict[int, np.ndarray]:
    """Equivariant filters from pairwise coordinate differences.

    F[q][b, i, j, :] = delta_{q,q'} (x_j - x_i)
                       + sum_g f_qg C_(q; q'q') (x_j - x_i) (x_j - x_i).
    The linear part is antisymmetric under i<->j, the quadratic part symmetric.
    """
    return _build_filters_cached(x, filter_weights, catalog)[0]


def _build_filters_cached(x, filter_weights, catalog):
    x = np.asarray(x, dtype=np.complex128)
    if x.ndim != 3 or x.shape[2] != catalog.dims[catalog.q_embed]:
        raise DomainError(
            f"coordinates must be (batch, points, {catalog.dims[catalog.q_embed]}), got {x.shape}")
    b, n, s_dim = x.shape
    dx = x[:, None, :, :] - x[:, :, None, :]
    # pair products dx_s dx_t, flattened for one BLAS contraction per rep
    pair = (dx[..., :, None] * dx[..., None, :]).reshape(b * n * n, s_dim * s_dim)
    out: dict[int, np.ndarray] = {}
    quad_cache: dict[int, np.ndarray] = {}
    for q in catalog.filter_reps:
        cg = catalog.filter_cg(q)
        total = None
        if cg is not None:
            f = filter_weights[q]
            if f.shape != (cg.shape[0],):
                raise DomainError(f"filter weights for rep {q} must have shape ({cg.shape[0]},)")
            g, r = cg.shape[0], cg.shape[1]
            c2 = np.ascontiguousarray(cg.transpose(2, 3, 1, 0)).reshape(s_dim * s_dim, r * g)
            a = (pair @ c2).reshape(b, n, n, r, g)  # basis quadratics per degeneracy
            quad_cache[q] = a
            total = a @ f
        if q == catalog.q_embed:
            total = dx if total is None else total + dx
        out[q] = total
    return out, quad_cache


def _filter_weight_grads(g_filters, filter_weights, quad_cache):
    """Adjoint of the quadratic filter term onto the f weights."""
    grads = {}
    for q in filter_weights:
        a = quad_cache[q]  # (b, n, n, r, g)
        g = a.shape[-1]
        grads[q] = a.conj().reshape(-1, g).T @ g_filters[q].ravel()
    return grads


def layer_forward(v: dict[int, np.ndarray], filters: dict[int, np.ndarray],
                  mixer: dict[int, np.ndarray], catalog: RepCatalog) -> dict[int, np.ndarray]:
    """One update V -> V' contracting CG tensor, filters, activations, weights."""
    out, _ = _layer_forward_cached(v, filters, mixer, catalog)
    return out


def _path_u2(cg: np.ndarray, vm: np.ndarray) -> np.ndarray:
    """u2[x, (j s), (g r d)] = sum_t cg[g,r,s,t] v[x,j,d,t], laid out for matmul."""
    g, r, s, t = cg.shape
    b, n, d = vm.shape[0], vm.shape[1], vm.shape[2]
    c3 = np.ascontiguousarray(cg.transpose(3, 2, 0, 1)).reshape(t, s * g * r)
    u = (vm.reshape(b * n * d, t) @ c3).reshape(b, n, d, s, g, r)
    u = np.ascontiguousarray(u.transpose(0, 1, 3, 4, 5, 2))  # x, j, s, g, r, d
    return u.reshape(b, n * s, g * r * d)


def _path_u2_adjoint(cg: np.ndarray, g_u2: np.ndarray, nch: int) -> np.ndarray:
    g, r, s, t = cg.shape
    b = g_u2.shape[0]
    n = g_u2.shape[1] // s
    c3 = np.ascontiguousarray(cg.transpose(3, 2, 0, 1)).reshape(t, s * g * r)
    g_u = g_u2.reshape(b, n, s, g, r, nch).transpose(0, 1, 5, 2, 3, 4)  # x, j, d, s, g, r
    g_v = g_u.reshape(b * n * nch, s * g * r) @ c3.conj().T
    return g_v.reshape(b, n, nch, t)


def _layer_forward_cached(v, filters, mixer, catalog):
    some_v = next(iter(v.values()))
    batch, npts, nch = some_v.shape[0], some_v.shape[1], some_v.shape[2]
    out: dict[int, np.ndarray] = {}
    cache = []
    for q in range(len(catalog.reps)):
        acc = np.zeros((batch, npts, nch, catalog.dims[q]), dtype=np.complex128)
        offset = 0
        for l, m, cg in catalog.paths(q):
            g = cg.shape[0]
            w = mixer[q][:, offset:offset + g, :]
            # staged contractions, summing over points j one stage before mixing
            u2 = _path_u2(cg, v[m])
            s = cg.shape[2]
            z2 = filters[l].reshape(batch, npts, npts * s) @ u2
            z = z2.reshape(batch, npts, g, catalog.dims[q], nch)
            acc += _einsum("cgd,xigrd->xicr", w, z)
            cache.append((q, l, m, offset, g, u2, z))
            offset += g
        out[q] = acc
    return out, cache


def _layer_backward(g_out, v, filters, mixer, cache, catalog):
    g_v = {m: np.zeros_like(vm) for m, vm in v.items()}
    g_mixer = {q: np.zeros_like(w) for q, w in mixer.items()}
    g_filters = {l: np.zeros_like(filters[l]) for l in filters}
    for q, l, m, offset, g, u2, z in cache:
        go = g_out[q]
        nch = go.shape[2]
        w = mixer[q][:, offset:offset + g, :]
        g_mixer[q][:, offset:offset + g, :] += _einsum("xicr,xigrd->cgd", go, z.conj())
        g_z = _einsum("cgd,xicr->xigrd", w.conj(), go)
        b, n, _, s = filters[l].shape
        g_z2 = g_z.reshape(b, n, g * catalog.dims[q] * nch)
        g_filters[l] += (g_z2 @ u2.conj().transpose(0, 2, 1)).reshape(filters[l].shape)
        g_u2 = filters[l].reshape(b, n, n * s).conj().transpose(0, 2, 1) @ g_z2
        g_v[m] += _path_u2_adjoint(catalog.cg[(q, l, m)], g_u2, nch)
    return g_v, g_mixer, g_filters


def _embed_inputs(x_rep: np.ndarray, config: NetworkConfig) -> dict[int, np.ndarray]:
    cat = config.catalog
    batch, npts, _ = x_rep.shape
    v = {m: np.zeros((batch, npts, config.num_channels, d), dtype=np.complex128)
         for m, d in enumerate(cat.dims)}
    v[cat.trivial_index][..., 0] = 1.0  # constant invariant seed in every channel
    v[cat.q_embed][:] = x_rep[:, :, None, :]
    return v


def _forward(x: np.ndarray, weights: NetworkWeights, config: NetworkConfig):
    cat = config.catalog
    x = np.asarray(x, dtype=np.complex128)
    if x.ndim != 3 or x.shape[2] != cat.embed.shape[1]:
        raise DomainError(
            f"clouds must be (batch, points, {cat.embed.shape[1]}), got {x.shape}")
    centered = x - x.mean(axis=1, keepdims=True)
    x_rep = np.einsum("rs,bis->bir", cat.embed, centered)
    v = _embed_inputs(x_rep, config)
    layer_caches = []
    for k in range(config.num_layers):
        filters, quad_cache = _build_filters_cached(x_rep, weights.filters[k], cat)
        v_next, cache = _layer_forward_cached(v, filters, weights.mixers[k], cat)
        layer_caches.append((v, filters, quad_cache, cache))
        v = v_next
    feats = v[cat.trivial_index][..., 0].real.mean(axis=1)  # (B, C)
    logits = feats @ weights.readout_w + weights.readout_b
    return logits, (x_rep, v, feats, layer_caches)


def forward(x: np.ndarray, weights: NetworkWeights, config: NetworkConfig) -> np.ndarray:
    """Class logits for a batch of clouds (batch, points, 1 + spatial dims)."""
    return _forward(x, weights, config)[0]


def activations(x: np.ndarray, weights: NetworkWeights,
                config: NetworkConfig) -> list[dict[int, np.ndarray]]:
    """Per-layer activation tensors, input embedding first."""
    _, (_, v_last, _, layer_caches) = _forward(x, weights, config)
    return [entry[0] for entry in layer_caches] + [v_last]


def softmax_cross_entropy(logits: np.ndarray, labels: np.ndarray) -> tuple[float, np.ndarray]:
    """Mean loss and d(loss)/d(logits) for integer labels."""
    z = logits - logits.max(axis=1, keepdims=True)
    expz = np.exp(z)
    p = expz / expz.sum(axis=1, keepdims=True)
    n = logits.shape[0]
    loss = float(-np.mean(np.log(p[np.arange(n), labels] + 1e-300)))
    grad = p.copy()
    grad[np.arange(n), labels] -= 1.0
    return loss, grad / n


def backward(x: np.ndarray, weights: NetworkWeights, config: NetworkConfig,
             labels: np.ndarray) -> tuple[NetworkWeights, float]:
    """Cross-entropy loss and gradients for every weight tensor.

    Complex gradients pack d/dRe + i d/dIm entrywise.
    """
    labels = np.asarray(labels)
    if labels.ndim != 1 or labels.min() < 0 or labels.max() >= config.num_classes:
        raise DomainError("labels must be integers in the class range")
    cat = config.catalog
    logits, (x_rep, v_last, feats, layer_caches) = _forward(x, weights, config)
    loss, g_logits = softmax_cross_entropy(logits, labels)

    g_readout_w = feats.T @ g_logits
    g_readout_b = g_logits.sum(axis=0)
    g_feats = g_logits @ weights.readout_w.T

    npts = x_rep.shape[1]
    g_v = {m: np.zeros_like(vm) for m, vm in v_last.items()}
    g_v[cat.trivial_index][..., 0] = g_feats[:, None, :] / npts

    g_filters_w = [dict() for _ in range(config.num_layers)]
    g_mixers = [dict() for _ in range(config.num_layers)]
    dx = x_rep[:, None, :, :] - x_rep[:, :, None, :]
    for k in reversed(range(config.num_layers)):
        v_in, filters, cache = layer_caches[k]
        g_v, g_mix, g_f = _layer_backward(g_v, v_in, filters, weights.mixers[k], cache, cat)
        g_mixers[k] = g_mix
        for q, fw in weights.filters[k].items():
            cg = cat.filter_cg(q)
            g_filters_w[k][q] = _einsum(
                "xijr,grst,xijs,xijt->g", g_f[q], cg.conj(), dx.conj(), dx.conj())
    return NetworkWeights(g_filters_w, g_mixers, g_readout_w, g_readout_b), loss


def pack_weights(w: NetworkWeights) -> np.ndarray:
    """Flatten to a real vector (complex tensors as re/im pairs) for the optimizer."""
    parts = []
    for layer in w.filters:
        for q in sorted(layer):
            parts.extend([layer[q].real.ravel(), layer[q].imag.ravel()])
    for layer in w.mixers:
        for q in sorted(layer):
            parts.extend([layer[q].real.ravel(), layer[q].imag.ravel()])
    parts.extend([w.readout_w.ravel(), w.readout_b.ravel()])
    return np.concatenate(parts)


def unpack_weights(vec: np.ndarray, template: NetworkWeights) -> NetworkWeights:
    pos = 0

    def take(n):
        nonlocal pos
        out = vec[pos:pos + n]
        pos += n
        return out

    filters, mixers = [], []
    for layer in template.filters:
        new = {}
        for q in sorted(layer):
            size = layer[q].size
            new[q] = (take(size) + 1j * take(size)).reshape(layer[q].shape)
        filters.append(new)
    for layer in template.mixers:
        new = {}
        for q in sorted(layer):
            size = layer[q].size
            new[q] = (take(size) + 1j * take(size)).reshape(layer[q].shape)
        mixers.append(new)
    readout_w = take(template.readout_w.size).reshape(template.readout_w.shape).copy()
    readout_b = take(template.readout_b.size).reshape(template.readout_b.shape).copy()
    return NetworkWeights(filters, mixers, readout_w, readout_b)


@dataclass
class TrainRecord:
    step: int
    train_loss: float
    train_acc: float
    dev_acc: float | None


def accuracy(points: np.ndarray, labels: np.ndarray, weights: NetworkWeights,
             config: NetworkConfig, batch: int = 64) -> float:
    hits = 0
    for start in range(0, len(points), batch):
        logits = forward(points[start:start + batch], weights, config)
        hits += int((logits.argmax(axis=1) == labels[start:start + batch]).sum())
    return hits / len(points)


def train(points: np.ndarray, labels: np.ndarray, config: NetworkConfig,
          epochs: int = 4, lr: float = 0.01, dev_points: np.ndarray | None = None,
          dev_labels: np.ndarray | None = None, weights: NetworkWeights | None = None,
          eval_every: int = 50, max_steps: int | None = None,
          ) -> tuple[NetworkWeights, list[TrainRecord]]:
    """Adam training loop over shuffled minibatches; deterministic per config seed."""
    points = np.asarray(points)
    labels = np.asarray(labels)
    if len(points) == 0:
        raise DomainError("training dataset is empty")
    if len(points) != len(labels):
        raise DomainError("points and labels differ in length")
    if weights is None:
        weights = init_weights(config)
    params = pack_weights(weights)
    adam = AdamState(lr=lr) if lr > 0 else None
    rng = np.random.default_rng(np.random.SeedSequence((config.seed, 555)))

    trace: list[TrainRecord] = []
    step = 0
    done = False
    for _ in range(epochs):
        order = rng.permutation(len(points))
        for start in range(0, len(points), config.batch_size):
            idx = order[start:start + config.batch_size]
            grads, loss = backward(points[idx], weights, config, labels[idx])
            if adam is not None:
                params = adam_step(adam, params, pack_weights(grads))
                weights = unpack_weights(params, weights)
            batch_logits = forward(points[idx], weights, config)
            acc = float((batch_logits.argmax(axis=1) == labels[idx]).mean())
            dev_acc = None
            if dev_points is not None and (step % eval_every == 0):
                dev_acc = accuracy(dev_points, dev_labels, weights, config)
            trace.append(TrainRecord(step, loss, acc, dev_acc))
            step += 1
            if max_steps is not None and step >= max_steps:
                done = True
                break
        if done:
            break
    if dev_points is not None:
        trace.append(TrainRecord(step, trace[-1].train_loss, trace[-1].train_acc,
                                 accuracy(dev_points, dev_labels, weights, config)))
    return weights, trace


def group_representation_matrices(catalog: RepCatalog,
                                  coefficients: np.ndarray) -> list[np.ndarray]:
    """exp(sum_i b_i T_i) for every rep in the catalog, shared coefficients."""
    return [expm(np.einsum("i,iab->ab", coefficients, r.generators)) for r in catalog.reps]


def transform_activations(v: dict[int, np.ndarray],
                          mats: list[np.ndarray]) -> dict[int, np.ndarray]:
    return {m: np.einsum("rt,xjct->xjcr", mats[m], vm) for m, vm in v.items()}


# ---------------------------------------------------------------------------
# Serialization


def _complex_to_json(a: np.ndarray):
    return np.stack([a.real, a.imag], axis=-1).tolist()


def _complex_from_json(obj) -> np.ndarray:
    packed = np.asarray(obj, dtype=float)
    return packed[..., 0] + 1j * packed[..., 1]


def catalog_to_json(cat: RepCatalog) -> dict:
    return {
        "reps": [r.to_json() for r in cat.reps],
        "q_embed": cat.q_embed,
        "embed": _complex_to_json(cat.embed),
        "cg": [{"key": list(key), "tensor": _complex_to_json(val)}
               for key, val in sorted(cat.cg.items())],
    }


def catalog_from_json(obj: dict) -> RepCatalog:
    try:
        reps = [AlgebraRep.from_json(r) for r in obj["reps"]]
        cg = {tuple(entry["key"]): _complex_from_json(entry["tensor"]) for entry in obj["cg"]}
        return RepCatalog(reps, int(obj["q_embed"]), cg, _complex_from_json(obj["embed"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad catalog JSON: {exc}") from exc


def weights_to_json(w: NetworkWeights, config: NetworkConfig) -> dict:
    return {
        "config": {
            "num_layers": config.num_layers,
            "num_channels": config.num_channels,
            "batch_size": config.batch_size,
            "num_classes": config.num_classes,
            "seed": config.seed,
        },
        "catalog": catalog_to_json(config.catalog),
        "filters": [{str(q): _complex_to_json(f) for q, f in layer.items()}
                    for layer in w.filters],
        "mixers": [{str(q): _complex_to_json(m) for q, m in layer.items()}
                   for layer in w.mixers],
        "readout_w": w.readout_w.tolist(),
        "readout_b": w.readout_b.tolist(),
    }


def weights_from_json(obj: dict) -> tuple[NetworkWeights, NetworkConfig]:
    try:
        catalog = catalog_from_json(obj["catalog"])
        cfg = obj["config"]
        config = NetworkConfig(catalog, num_layers=int(cfg["num_layers"]),
                               num_channels=int(cfg["num_channels"]),
                               batch_size=int(cfg["batch_size"]),
                               num_classes=int(cfg["num_classes"]), seed=int(cfg["seed"]))
        filters = [{int(q): _complex_from_json(f) for q, f in layer.items()}
                   for layer in obj["filters"]]
        mixers = [{int(q): _complex_from_json(m) for q, m in layer.items()}
                  for layer in obj["mixers"]]
        weights = NetworkWeights(filters, mixers,
                                 np.asarray(obj["readout_w"], dtype=float),
                                 np.asarray(obj["readout_b"], dtype=float))
        return weights, config
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad weights JSON: {exc}") from exc
