"""Plane embedding of the ladder: the contraction system, segments, lengths.

Three maps act on the plane: first shrink by alpha toward the barycenter,
then halve toward the shrunken image of corner i.  Each composite is a
similarity of ratio alpha/2 and the corner identifications of the
combinatorial hierarchy hold exactly in coordinates.  The embedded edge
system (triangle sides plus radial segments) has pairwise disjoint segment
interiors, and the residual node set is a Cantor dust of similarity
dimension log 3 / log(2/alpha).

The frame is fixed: unit side length, barycenter at the origin,
p1 = (0, 1/sqrt 3), p2 = (-1/2, -1/(2 sqrt 3)), p3 = (1/2, -1/(2 sqrt 3)).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .ladder import build_graph
from .words import VertexId, Word, canonical_vertex, validate_word, word_to_str

_P1 = (0.0, 1.0 / math.sqrt(3.0))
_P2 = (-0.5, -1.0 / (2.0 * math.sqrt(3.0)))
_P3 = (0.5, -1.0 / (2.0 * math.sqrt(3.0)))


@dataclass(frozen=True)
class IfsParams:
    """Contraction ratio and the (fixed) reference triangle."""

    alpha: float = 0.5
    p1: tuple[float, float] = _P1
    p2: tuple[float, float] = _P2
    p3: tuple[float, float] = _P3

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0):
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        ps = [np.array(p) for p in (self.p1, self.p2, self.p3)]
        for a in range(3):
            d = np.linalg.norm(ps[a] - ps[(a + 1) % 3])
            if abs(d - 1.0) > 1e-12:
                raise ValueError("corner points must form a unit equilateral triangle")

    @property
    def p0(self) -> np.ndarray:
        return (np.array(self.p1) + self.p2 + self.p3) / 3.0

    def corner(self, i: int) -> np.ndarray:
        return np.array((self.p1, self.p2, self.p3)[i - 1], dtype=float)


def apply_G0(x: Sequence[float], params: IfsParams) -> np.ndarray:
    """Shrink by alpha toward the barycenter."""
    x = np.asarray(x, dtype=float)
    return params.alpha * (x - params.p0) + params.p0


def apply_F(i: int, x: Sequence[float], params: IfsParams) -> np.ndarray:
    """Halve toward the shrunken corner G0(p_i)."""
    x = np.asarray(x, dtype=float)
    anchor = apply_G0(params.corner(i), params)
    return 0.5 * (x - anchor) + anchor


def apply_G(i: int, x: Sequence[float], params: IfsParams) -> np.ndarray:
    """The i-th similarity of ratio alpha/2: halve-toward-corner after shrinking."""
    if i not in (1, 2, 3):
        raise ValueError(f"map index must be 1, 2 or 3, got {i}")
    return apply_F(i, apply_G0(x, params), params)


def apply_word(word: Sequence[int], x: Sequence[float], params: IfsParams) -> np.ndarray:
    """G_w = G_{w1} o G_{w2} o ... o G_{wm} applied to x."""
    w = validate_word(word)
    y = np.asarray(x, dtype=float)
    for letter in reversed(w):
        y = apply_G(letter, y, params)
    return y


def vertex_coordinates(v: VertexId | tuple, params: IfsParams) -> np.ndarray:
    """Plane position of a hierarchy vertex; identified ids map to one point."""
    word, corner = v
    vv = canonical_vertex(word, corner)
    return apply_word(vv.word, params.corner(vv.corner), params)


def cantor_point(
    prefix: Sequence[int], params: IfsParams
) -> tuple[np.ndarray, float]:
    """Approximation of the dust point coded by an infinite word, with bound.

    Returns G_prefix(barycenter) and the rigorous distance bound
    (alpha/2)^len(prefix) * diam to the coded limit point, using that the
    dust lies inside the unit triangle (diameter 1).
    """
    w = validate_word(prefix)
    pt = apply_word(w, params.p0, params)
    return pt, (params.alpha / 2.0) ** len(w) * 1.0


# ---------------------------------------------------------------------------
# segments


@dataclass(frozen=True)
class Segment:
    """Embedded edge with its combinatorial label (word, i, j); i == j is radial."""

    word: Word
    i: int
    j: int
    a: tuple[float, float]
    b: tuple[float, float]

    @property
    def length(self) -> float:
        return math.dist(self.a, self.b)


def _segment_of_label(word: Word, i: int, j: int, params: IfsParams) -> Segment:
    if i == j:
        a = apply_word(word, params.corner(i), params)
        b = apply_word(word, apply_G(i, params.corner(i), params), params)
    else:
        a = apply_word(word, params.corner(i), params)
        b = apply_word(word, params.corner(j), params)
    return Segment(word, i, j, tuple(a), tuple(b))


def edge_segments(n: int, params: IfsParams) -> list[Segment]:
    """All embedded edges of the level-n graph, in construction order.

    The level-n labels contain the level-(n-1) labels; segment interiors are
    pairwise disjoint.
    """
    graph = build_graph(n)
    return [_segment_of_label(lab.word, lab.i, lab.j, params) for _, _, lab in graph.edges]


def segments_interior_distance(s1: Segment, s2: Segment) -> float:
    """Minimum distance between the open interiors of two segments.

    Touching at shared endpoints does not count as intersection; a crossing
    or overlap yields 0.
    """
    a1, b1 = np.array(s1.a), np.array(s1.b)
    a2, b2 = np.array(s2.a), np.array(s2.b)
    d1, d2 = b1 - a1, b2 - a2
    # closest parameter pair on the infinite lines, clamped to [0, 1]
    r = a1 - a2
    aa = d1 @ d1
    bb = d1 @ d2
    cc = d2 @ d2
    dd = d1 @ r
    ee = d2 @ r
    denom = aa * cc - bb * bb
    if abs(denom) > 1e-14 * max(aa * cc, 1e-300):
        s = (bb * ee - cc * dd) / denom
        t = (aa * ee - bb * dd) / denom
    else:  # parallel: sample candidates
        s, t = 0.0, 0.0
    best = math.inf
    cands = {(min(max(s, 0.0), 1.0), min(max(t, 0.0), 1.0))}
    for sfix in (0.0, 1.0):
        t_ = (d2 @ (a1 + sfix * d1 - a2)) / cc
        cands.add((sfix, min(max(t_, 0.0), 1.0)))
    for tfix in (0.0, 1.0):
        s_ = (d1 @ (a2 + tfix * d2 - a1)) / aa
        cands.add((min(max(s_, 0.0), 1.0), tfix))
    shared_tol = 1e-12
    for s_, t_ in cands:
        p = a1 + s_ * d1
        q = a2 + t_ * d2
        dist = float(np.linalg.norm(p - q))
        if dist < best:
            # ignore contact at shared endpoints
            at_end1 = min(s_, 1.0 - s_) * math.sqrt(aa) < shared_tol
            at_end2 = min(t_, 1.0 - t_) * math.sqrt(cc) < shared_tol
            if dist < shared_tol and at_end1 and at_end2:
                continue
            best = dist
    return best


def interiors_disjoint(segments: Sequence[Segment], tol: float = 1e-9) -> bool:
    """Exhaustive pairwise check that no two segment interiors meet."""
    for x in range(len(segments)):
        for y in range(x + 1, len(segments)):
            if segments_interior_distance(segments[x], segments[y]) < tol:
                return False
    return True


# ---------------------------------------------------------------------------
# lengths


def length_system(n: int, params: IfsParams) -> list[tuple[Segment, float]]:
    """Each level-n segment with its length (these are the quantum-graph data)."""
    return [(s, s.length) for s in edge_segments(n, params)]


def total_length_closed_form(n: int, params: IfsParams) -> float:
    """Closed form of the total edge length up to level n.

    Depth-k triangle sides: 3^(k+1) segments of length (alpha/2)^k; depth-k
    radials: 3^k segments of length (1-alpha)/sqrt(3) * (alpha/2)^(k-1).
    """
    a = params.alpha
    total = 3.0
    radial0 = (1.0 - a) / math.sqrt(3.0)
    for k in range(1, n + 1):
        total += 3.0 ** (k + 1) * (a / 2.0) ** k
        total += 3.0**k * radial0 * (a / 2.0) ** (k - 1)
    return total


def length_growth_ratio(params: IfsParams) -> float:
    """Per-level geometric ratio of added edge length (3 alpha / 2)."""
    return 1.5 * params.alpha


# ---------------------------------------------------------------------------
# transcoding between contraction ratios


def transcode(
    x: VertexId | tuple | tuple[Segment, float],
    params_from: IfsParams,
    params_to: IfsParams,
):
    """Re-render a symbolic point in the geometry of another contraction ratio.

    Accepts a vertex id or a (segment, t) pair with t in [0, 1]; raw
    coordinates are rejected (there is no inverse coding for them).
    Involutive: transcoding back returns the original point.
    """
    if isinstance(x, np.ndarray):
        raise TypeError("raw coordinates cannot be transcoded; pass a symbolic point")
    if isinstance(x, tuple) and len(x) == 2 and isinstance(x[0], Segment):
        seg, t = x
        if not (0.0 <= t <= 1.0):
            raise ValueError(f"segment parameter must be in [0, 1], got {t}")
        s2 = _segment_of_label(seg.word, seg.i, seg.j, params_to)
        a, b = np.array(s2.a), np.array(s2.b)
        return a + t * (b - a)
    word, corner = x
    return vertex_coordinates(canonical_vertex(word, corner), params_to)


# ---------------------------------------------------------------------------
# export and box counting


GEOMETRY_COLUMNS = ("word", "i", "j", "x1", "y1", "x2", "y2", "length")


def geometry_csv(segments: Sequence[Segment]) -> str:
    lines = [",".join(GEOMETRY_COLUMNS)]
    for s in segments:
        lines.append(
            f"{word_to_str(s.word)},{s.i},{s.j},"
            f"{s.a[0]!r},{s.a[1]!r},{s.b[0]!r},{s.b[1]!r},{s.length!r}"
        )
    return "\n".join(lines) + "\n"


def geometry_json(segments: Sequence[Segment]) -> str:
    recs = [
        {
            "label": {"word": word_to_str(s.word), "i": s.i, "j": s.j},
            "a": [s.a[0], s.a[1]],
            "b": [s.b[0], s.b[1]],
            "len": s.length,
        }
        for s in segments
    ]
    return json.dumps(recs, indent=2, sort_keys=True) + "\n"


def export_geometry(n: int, params: IfsParams, fmt: str, path: str) -> None:
    """Write the level-n segment listing to a CSV or JSON file."""
    segs = edge_segments(n, params)
    if fmt == "csv":
        text = geometry_csv(segs)
    elif fmt == "json":
        text = geometry_json(segs)
    else:
        raise ValueError(f"format must be 'csv' or 'json', got {fmt!r}")
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write geometry export to {path!r}: {exc}") from exc


def cell_centers(level: int, params: IfsParams) -> np.ndarray:
    """Barycenter images G_w(p0) over all words of the given level."""
    pts = [params.p0]
    for _ in range(level):
        pts = [apply_G(i, x, params) for i in (1, 2, 3) for x in pts]
    return np.array(pts)


def box_count_dimension(points: np.ndarray, sizes: Sequence[float]) -> float:
    """Least-squares slope of log N(box) against log (1/size)."""
    counts = []
    for s in sizes:
        cells = np.unique(np.floor(points / s).astype(np.int64), axis=0)
        counts.append(len(cells))
    xs = np.log(1.0 / np.asarray(sizes, dtype=float))
    ys = np.log(np.asarray(counts, dtype=float))
    return float(np.polyfit(xs, ys, 1)[0])
