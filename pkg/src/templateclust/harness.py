"""Experiment runner: seeded repetitions over parameter grids, CSV output.

Each experiment sweeps parameter points (community size, coupling
probability, or noise level), repeats every point with derived seeds,
runs the requested clustering methods on the same sampled instance, and
records ARI, projector distance, iteration counts and timing.  Raw
records and mean/std summaries are written as CSV.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from templateclust.baselines import (
    Partition,
    cnm_cluster,
    louvain_cluster,
    spectral_cluster,
    spectral_embedding,
)
from templateclust.dataio import load_edge_list, load_labels, model_from_ground_truth
from templateclust.errors import InputError
from templateclust.graphs import Graph
from templateclust.metrics import (
    GroundTruth,
    adjusted_rand_index,
    closest_orthonormal,
    projector_distance,
)
from templateclust.stiefel import DescentConfig
from templateclust.synth import (
    CommunitySpec,
    add_model_noise,
    expected_model,
    make_bp,
    make_c2,
    make_g3,
    make_g6,
    sample_graph,
)
from templateclust.template import KMeansConfig, TemplateModel, template_cluster

METHODS = ("tb", "spectral", "cnm", "louvain")

RECORD_COLUMNS = (
    "dataset",
    "method",
    "size",
    "param",
    "repetition",
    "seed",
    "status",
    "ari",
    "projector_distance",
    "iterations",
    "k_found",
)

SUMMARY_COLUMNS = (
    "dataset",
    "method",
    "size",
    "param",
    "repetitions",
    "failures",
    "ari_mean",
    "ari_std",
    "pd_mean",
    "pd_std",
)


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str  # synth | real
    dataset: str  # family name (g3|g6|c2|bp) or dataset label
    methods: tuple[str, ...] = METHODS
    sizes: tuple[int, ...] = ()
    probs: tuple[float, ...] = (float("nan"),)
    sigmas: tuple[float, ...] = (0.0,)
    intra_mode: str = "bipartite"
    repetitions: int = 100
    base_seed: int = 0
    fixed_graph: bool = False
    edges_path: str | None = None
    labels_path: str | None = None
    descent: DescentConfig = DescentConfig()
    kmeans: KMeansConfig = KMeansConfig()

    def __post_init__(self) -> None:
        if self.repetitions < 1:
            raise InputError("repetitions must be >= 1")
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise InputError(f"unknown methods: {sorted(unknown)}")
        if self.kind not in ("synth", "real"):
            raise InputError(f"kind must be 'synth' or 'real', got {self.kind!r}")
        if self.kind == "real" and (self.edges_path is None or self.labels_path is None):
            raise InputError("real experiments need edge and label file paths")


@dataclass
class ExperimentRecord:
    dataset: str
    method: str
    size: int | None
    param: float
    repetition: int
    seed: int
    status: str = "ok"
    ari: float | None = None
    projector_distance: float | None = None
    iterations: int | None = None
    k_found: int | None = None
    runtime_ms: float = 0.0


def _fmt(x: object) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        if x != x:  # NaN parameter placeholder
            return ""
        return repr(x)
    return str(x)


def _make_spec(cfg: ExperimentConfig, size: int, prob: float) -> CommunitySpec:
    if cfg.dataset == "g3":
        return make_g3(size)
    if cfg.dataset == "g6":
        return make_g6(size)
    if cfg.dataset == "c2":
        return make_c2(size, 0.42 if prob != prob else prob)
    if cfg.dataset == "bp":
        if prob != prob:
            raise InputError("bp experiments need an inter-connection probability")
        return make_bp(size, prob, cfg.intra_mode)
    raise InputError(f"unknown synthetic family {cfg.dataset!r}")


def _run_method(
    method: str,
    graph: Graph,
    gt: GroundTruth,
    model: TemplateModel,
    rng: np.random.Generator,
    cfg: ExperimentConfig,
) -> tuple[np.ndarray, float | None, int | None, int]:
    """Returns (labels, projector distance, iteration count, k found)."""
    p_star = None
    if method in ("tb", "spectral"):
        p_star = closest_orthonormal(gt.indicator())
    if method == "tb":
        result = template_cluster(graph, model, cfg.descent, cfg.kmeans, rng)
        pd = projector_distance(result.embedding, p_star)
        labels = Partition(result.partition).labels
        return labels, pd, result.trace.iterates_count, int(labels.max()) + 1
    if method == "spectral":
        part = spectral_cluster(graph, gt.k, rng, cfg.kmeans.restarts, cfg.kmeans.max_iters)
        pd = projector_distance(spectral_embedding(graph, gt.k), p_star)
        return part.labels, pd, None, part.k_found
    if method == "cnm":
        part = cnm_cluster(graph)
        return part.labels, None, None, part.k_found
    if method == "louvain":
        part = louvain_cluster(graph, rng)
        return part.labels, None, None, part.k_found
    raise InputError(f"unknown method {method!r}")


def run_experiment(cfg: ExperimentConfig) -> list[ExperimentRecord]:
    """Execute the full grid; per-repetition method failures become failed
    rows rather than aborting the run."""
    records: list[ExperimentRecord] = []
    if cfg.kind == "synth":
        points = [(size, prob) for size in cfg.sizes for prob in cfg.probs]
        if not points:
            raise InputError("synthetic experiments need at least one size")
        for point_idx, (size, prob) in enumerate(points):
            spec = _make_spec(cfg, size, prob)
            model = expected_model(spec)
            for rep in range(cfg.repetitions):
                seed = cfg.base_seed + rep
                graph_rng = np.random.default_rng(
                    (cfg.base_seed, point_idx) if cfg.fixed_graph else (cfg.base_seed, point_idx, rep)
                )
                graph, gt = sample_graph(spec, graph_rng)
                records.extend(
                    _point_records(cfg, cfg.dataset, size, prob, rep, seed, point_idx, graph, gt, model)
                )
    else:
        graph, id_map = load_edge_list(cfg.edges_path, directed_input=True)
        gt = load_labels(cfg.labels_path, graph.n, id_map)
        base_model = model_from_ground_truth(graph, gt)
        for point_idx, sigma in enumerate(cfg.sigmas):
            for rep in range(cfg.repetitions):
                seed = cfg.base_seed + rep
                noise_rng = np.random.default_rng((cfg.base_seed, point_idx, rep, 997))
                model = add_model_noise(base_model, sigma, noise_rng)
                records.extend(
                    _point_records(cfg, cfg.dataset, None, sigma, rep, seed, point_idx, graph, gt, model)
                )
    records.sort(key=lambda r: (r.method, r.size or 0, r.param, r.repetition))
    return records


def _point_records(
    cfg: ExperimentConfig,
    dataset: str,
    size: int | None,
    param: float,
    rep: int,
    seed: int,
    point_idx: int,
    graph: Graph,
    gt: GroundTruth,
    model: TemplateModel,
) -> list[ExperimentRecord]:
    out = []
    for m_idx, method in enumerate(cfg.methods):
        rec = ExperimentRecord(
            dataset=dataset, method=method, size=size, param=param, repetition=rep, seed=seed
        )
        rng = np.random.default_rng((cfg.base_seed, point_idx, rep, m_idx))
        start = time.perf_counter()
        try:
            labels, pd, iters, k_found = _run_method(method, graph, gt, model, rng, cfg)
            rec.ari = adjusted_rand_index(labels, gt.labels)
            rec.projector_distance = pd
            rec.iterations = iters
            rec.k_found = k_found
        except Exception:
            rec.status = "failed"
        rec.runtime_ms = (time.perf_counter() - start) * 1000.0
        out.append(rec)
    return out


def aggregate(records: list[ExperimentRecord]) -> list[dict[str, object]]:
    """Mean and unbiased std per (dataset, method, size, param); failed
    rows are excluded from the statistics and counted."""
    if not records:
        raise InputError("no records to aggregate")
    groups: dict[tuple, list[ExperimentRecord]] = {}
    for r in sorted(records, key=lambda r: (r.method, r.size or 0, r.param, r.repetition)):
        groups.setdefault((r.dataset, r.method, r.size, r.param), []).append(r)

    def stats(values: list[float]) -> tuple[float | None, float | None]:
        if not values:
            return None, None
        mean = float(np.mean(values))
        std = float(np.std(values, ddof=1)) if len(values) > 1 else 0.0
        return mean, std

    rows = []
    for (dataset, method, size, param), group in groups.items():
        ok = [r for r in group if r.status == "ok"]
        ari_mean, ari_std = stats([r.ari for r in ok if r.ari is not None])
        pd_mean, pd_std = stats(
            [r.projector_distance for r in ok if r.projector_distance is not None]
        )
        rows.append(
            {
                "dataset": dataset,
                "method": method,
                "size": size,
                "param": param,
                "repetitions": len(group),
                "failures": len(group) - len(ok),
                "ari_mean": ari_mean,
                "ari_std": ari_std,
                "pd_mean": pd_mean,
                "pd_std": pd_std,
            }
        )
    return rows


def write_records_csv(records: list[ExperimentRecord], path: str | Path) -> None:
    """Raw per-repetition rows. Runtime is deliberately excluded so reruns
    with the same seed are byte-identical; timings go to a separate file."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RECORD_COLUMNS)
        for r in records:
            writer.writerow(
                [
                    r.dataset,
                    r.method,
                    _fmt(r.size),
                    _fmt(r.param),
                    r.repetition,
                    r.seed,
                    r.status,
                    _fmt(r.ari),
                    _fmt(r.projector_distance),
                    _fmt(r.iterations),
                    _fmt(r.k_found),
                ]
            )


def write_summary_csv(rows: list[dict[str, object]], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SUMMARY_COLUMNS)
        for row in rows:
            writer.writerow([_fmt(row[c]) for c in SUMMARY_COLUMNS])


def write_timings_csv(records: list[ExperimentRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["dataset", "method", "size", "param", "repetition", "runtime_ms"])
        for r in records:
            writer.writerow(
                [r.dataset, r.method, _fmt(r.size), _fmt(r.param), r.repetition, repr(r.runtime_ms)]
            )


def run_and_write(cfg: ExperimentConfig, out_dir: str | Path) -> list[ExperimentRecord]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    records = run_experiment(cfg)
    write_records_csv(records, out / "records.csv")
    write_summary_csv(aggregate(records), out / "summary.csv")
    write_timings_csv(records, out / "timings.csv")
    return records
