"""Loading real datasets: edge lists, community label files, and template
construction from annotated ground truth."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from templateclust.errors import InputError
from templateclust.graphs import Graph
from templateclust.metrics import GroundTruth
from templateclust.template import TemplateModel


def _parse_lines(path: str | Path) -> list[tuple[int, list[str]]]:
    text = Path(path).read_text(encoding="utf-8")
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        out.append((lineno, line.split()))
    return out


def load_edge_list(path: str | Path, directed_input: bool = False) -> tuple[Graph, dict[int, int]]:
    """Read a whitespace-separated edge list into an unweighted simple graph.

    Lines are "u v" or "u v w"; '#' starts a comment. Vertex ids are
    remapped to 0..n-1 in sorted order of the original ids; the mapping is
    returned for traceability. Directed input is symmetrized: an edge in
    either direction yields one undirected unit edge. Self-loops are
    dropped and duplicates collapse to weight 1.
    """
    rows = _parse_lines(path)
    if not rows:
        raise InputError(f"{path}: no edges found")
    pairs: set[tuple[int, int]] = set()
    ids: set[int] = set()
    for lineno, parts in rows:
        if len(parts) not in (2, 3):
            raise InputError(f"{path}:{lineno}: expected 'u v' or 'u v w', got {' '.join(parts)!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
            if len(parts) == 3:
                float(parts[2])
        except ValueError as exc:
            raise InputError(f"{path}:{lineno}: malformed edge line") from exc
        ids.update((u, v))
        if u != v:
            pairs.add((min(u, v), max(u, v)))
    id_map = {orig: new for new, orig in enumerate(sorted(ids))}
    n = len(id_map)
    adj = np.zeros((n, n))
    for u, v in pairs:
        adj[id_map[u], id_map[v]] = 1.0
        adj[id_map[v], id_map[u]] = 1.0
    return Graph(adj), id_map


def load_labels(path: str | Path, n: int, id_map: dict[int, int] | None = None) -> GroundTruth:
    """Read "vertex community" lines covering all n vertices.

    Community ids are remapped to 0..k-1 in sorted order; vertex ids are
    translated through id_map when given.
    """
    rows = _parse_lines(path)
    raw: dict[int, int] = {}
    for lineno, parts in rows:
        if len(parts) != 2:
            raise InputError(f"{path}:{lineno}: expected 'vertex community'")
        try:
            u, c = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise InputError(f"{path}:{lineno}: malformed label line") from exc
        v = id_map[u] if id_map is not None else u
        raw[v] = c
    missing = sorted(set(range(n)) - set(raw))
    if missing:
        raise InputError(f"{path}: missing labels for vertices {missing[:20]}")
    comms = sorted(set(raw.values()))
    comm_map = {c: i for i, c in enumerate(comms)}
    labels = np.array([comm_map[raw[v]] for v in range(n)], dtype=int)
    return GroundTruth(labels)


def model_from_ground_truth(g: Graph, gt: GroundTruth) -> TemplateModel:
    """Template equal to the contraction of the adjacency through the
    ground-truth indicator: B^T A B (block sums of edge weight)."""
    if gt.labels.size != g.n:
        raise InputError(f"labels cover {gt.labels.size} vertices but graph has {g.n}")
    b = gt.indicator()
    return TemplateModel(b.T @ g.adjacency @ b)


def write_edge_list(g: Graph, path: str | Path) -> None:
    """Write the canonical normalized edge list: sorted 'u v w' lines, LF."""
    lines = []
    for i in range(g.n):
        for j in range(i, g.n):
            w = g.adjacency[i, j]
            if w != 0:
                lines.append(f"{i} {j} {w:g}\n")
    Path(path).write_text("".join(lines), encoding="utf-8", newline="\n")
