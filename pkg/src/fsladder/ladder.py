"""The Feynman-Sierpinski ladder: graphs, networks, and effective impedance.

The level-n graph carries three edge families:

* triangle sides of every cell (label ``(w, i, j)`` with i < j), built as
  inductors,
* radial edges joining a cell corner to the corresponding corner of its
  child cell (label ``(w, i, i)``), built as capacitors,
* nothing else.

Two network variants are supported.  ``Truncated(eps)`` puts a series
resistance eps on every edge.  ``Renormalized(z_inner)`` keeps the reactive
values everywhere except on the deepest triangles, which receive the fixed
impedance z_inner; with z_inner equal to the ladder's effective impedance
this is the level-n equivalent network.

The one-level decimation map replaces the deepest triangles of a level-1
cell by a single equivalent triangle; the ladder's effective impedance is
its fixed point with positive real part, reachable as the regularized limit
eps -> 0+ of the truncated networks.  Power dissipates precisely inside the
filter band 9(4-sqrt(15)) < 2*omega^2*L*C < 9(4+sqrt(15)).
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .complexnet import (
    Network,
    NetworkError,
    SingularInteriorError,
    equivalent_triangle,
    schur_trace,
)
from .words import VertexId, Word, canonical_vertex

logger = logging.getLogger(__name__)

#: practical recursion bound; 3^(n+1) vertices keeps dense solves feasible
MAX_LEVEL = 8

#: dimensionless filter band in t = 2 omega^2 L C
FILTER_BAND_LOWER = 9.0 * (4.0 - math.sqrt(15.0))
FILTER_BAND_UPPER = 9.0 * (4.0 + math.sqrt(15.0))

#: eps ladder for the regularized limit, largest first
EPS_SCHEDULE = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6)

#: stagnation tolerance and iteration budget of the fixed-point solvers
FP_TOL = 1e-12
FP_MAX_ITER = 10_000


class ConvergenceError(ArithmeticError):
    """A fixed-point computation did not converge or its two routes disagree."""


class OutOfBandError(ValueError):
    """The requested operation needs a dissipative (in-band) effective impedance."""


# ---------------------------------------------------------------------------
# graph construction


class EdgeLabel(NamedTuple):
    """(word, i, j): triangle side of cell `word` when i < j, radial when i == j."""

    word: Word
    i: int
    j: int


@dataclass(frozen=True)
class LadderGraph:
    level: int
    vertices: tuple[VertexId, ...]
    index: dict  # VertexId -> int
    edges: tuple[tuple[int, int, EdgeLabel], ...]

    @property
    def boundary(self) -> tuple[int, int, int]:
        return tuple(self.index[canonical_vertex((), i)] for i in (1, 2, 3))


def build_graph(n: int) -> LadderGraph:
    """Level-n ladder graph with canonical vertex ids and labeled edges.

    Vertex counts are 3, 9, 27, ... (3^(n+1) for n >= 1) and edge counts
    satisfy |E_n| = 6 + 3 |E_{n-1}| with |E_0| = 3.
    """
    if not (0 <= n <= MAX_LEVEL):
        raise ValueError(f"level must be in [0, {MAX_LEVEL}], got {n}")
    index: dict[VertexId, int] = {}
    vertices: list[VertexId] = []
    edges: list[tuple[int, int, EdgeLabel]] = []

    def vid(word: Word, corner: int) -> int:
        key = canonical_vertex(word, corner)
        if key not in index:
            index[key] = len(vertices)
            vertices.append(key)
        return index[key]

    def cell(word: Word, depth_left: int) -> None:
        for i in (1, 2, 3):
            for j in range(i + 1, 4):
                edges.append((vid(word, i), vid(word, j), EdgeLabel(word, i, j)))
        if depth_left >= 1:
            for i in (1, 2, 3):
                edges.append(
                    (vid(word, i), vid(word + (i,), i), EdgeLabel(word, i, i))
                )
            for k in (1, 2, 3):
                cell(word + (k,), depth_left - 1)

    cell((), n)
    return LadderGraph(n, tuple(vertices), index, tuple(edges))


# ---------------------------------------------------------------------------
# impedance assignment


@dataclass(frozen=True)
class Truncated:
    """Every reactive edge gets a series resistance eps >= 0."""

    epsilon: float = 0.0

    def __post_init__(self):
        if not (self.epsilon >= 0 and np.isfinite(self.epsilon)):
            raise NetworkError(f"epsilon must be >= 0, got {self.epsilon}")


@dataclass(frozen=True)
class Renormalized:
    """Deepest triangles carry z_inner; everything above stays reactive."""

    z_inner: complex

    def __post_init__(self):
        if complex(self.z_inner) == 0:
            raise NetworkError("z_inner must be nonzero")


LadderVariant = Truncated | Renormalized


def _assign(
    graph: LadderGraph,
    z_side: Callable[[int], complex],
    z_radial: complex,
    z_deepest: complex | None,
) -> Network:
    """Core impedance assignment; z_side maps cell depth to triangle-side impedance."""
    n = graph.level
    zedges = []
    for a, b, lab in graph.edges:
        if lab.i == lab.j:
            z = z_radial
        elif z_deepest is not None and len(lab.word) == n:
            z = z_deepest
        else:
            z = z_side(len(lab.word))
        zedges.append((a, b, complex(z)))
    return Network(len(graph.vertices), graph.boundary, tuple(zedges))


def assign_impedances(
    graph: LadderGraph,
    variant: LadderVariant,
    omega: float,
    L: float = 1.0,
    C: float = 1.0,
) -> Network:
    """Attach component impedances to a ladder graph.

    Triangle sides are inductors i*omega*L, radial edges capacitors
    1/(i*omega*C).  The Truncated variant adds eps in series everywhere; the
    Renormalized variant swaps the deepest-triangle sides for its z_inner.
    """
    if not (omega > 0 and L > 0 and C > 0):
        raise NetworkError("omega, L, C must all be positive")
    zl = 1j * omega * L
    zc = 1.0 / (1j * omega * C)
    if isinstance(variant, Truncated):
        e = variant.epsilon
        return _assign(graph, lambda d: zl + e, zc + e, None)
    if isinstance(variant, Renormalized):
        return _assign(graph, lambda d: zl, zc, complex(variant.z_inner))
    raise NetworkError(f"unknown ladder variant: {variant!r}")


# ---------------------------------------------------------------------------
# filter condition


class FilterStatus(NamedTuple):
    in_band: bool
    t: float
    margin: float  # distance of t to the nearest band edge; positive inside


def filter_condition(omega: float, L: float = 1.0, C: float = 1.0) -> FilterStatus:
    """Strict band test for t = 2 omega^2 L C, with the signed margin in t-units."""
    if not (omega > 0 and L > 0 and C > 0):
        raise NetworkError("omega, L, C must all be positive")
    t = 2.0 * omega * omega * L * C
    lower, upper = FILTER_BAND_LOWER, FILTER_BAND_UPPER
    margin = min(t - lower, upper - t)
    return FilterStatus(lower < t < upper, t, margin)


def omega_from_t(t: float, L: float = 1.0, C: float = 1.0) -> float:
    """Angular frequency with 2 omega^2 L C = t."""
    if not (t > 0):
        raise NetworkError(f"t must be positive, got {t}")
    return math.sqrt(t / (2.0 * L * C))


# ---------------------------------------------------------------------------
# decimation and effective impedance

_LEVEL1 = build_graph(1)
_L1_BOUNDARY = list(_LEVEL1.boundary)
_L1_INTERIOR = [k for k in range(9) if k not in _L1_BOUNDARY]
# edge kinds: 0 = cell triangle side, 1 = radial, 2 = inner triangle
_L1_EDGES = tuple(
    (a, b, 1 if lab.i == lab.j else (2 if len(lab.word) == 1 else 0))
    for a, b, lab in _LEVEL1.edges
)


def _level1_trace(z_inner: complex, z_side: complex, z_radial: complex) -> complex:
    """Equivalent triangle impedance of one level-1 cell with given edge values.

    Dense 9-node assembly on a fixed topology; this is the hot kernel behind
    decimation, so it bypasses the Network wrapper.
    """
    ys = (1.0 / z_side, 1.0 / z_radial, 1.0 / z_inner)
    L = np.zeros((9, 9), dtype=complex)
    for a, b, kind in _L1_EDGES:
        y = ys[kind]
        L[a, a] += y
        L[b, b] += y
        L[a, b] -= y
        L[b, a] -= y
    Lii = L[np.ix_(_L1_INTERIOR, _L1_INTERIOR)]
    Lib = L[np.ix_(_L1_INTERIOR, _L1_BOUNDARY)]
    try:
        X = np.linalg.solve(Lii, Lib)
    except np.linalg.LinAlgError as exc:
        raise SingularInteriorError(
            f"level-1 interior block singular at z_inner={z_inner}"
        ) from exc
    S = L[np.ix_(_L1_BOUNDARY, _L1_BOUNDARY)] - L[np.ix_(_L1_BOUNDARY, _L1_INTERIOR)] @ X
    if not np.all(np.isfinite(S.view(float))):
        raise SingularInteriorError(
            f"level-1 trace not finite at z_inner={z_inner}"
        )
    return equivalent_triangle(S, tol=1e-10)


def decimation_map(
    z: complex, epsilon: float, omega: float, L: float = 1.0, C: float = 1.0
) -> complex:
    """One renormalization step: trace a level-1 cell with inner triangles z.

    The cell's own triangle sides are inductors and its radials capacitors,
    each with epsilon in series; the inner triangles carry z as given.
    """
    if epsilon < 0:
        raise NetworkError(f"epsilon must be >= 0, got {epsilon}")
    zl = 1j * omega * L + epsilon
    zc = 1.0 / (1j * omega * C) + epsilon
    return _level1_trace(z, zl, zc)


def effective_impedance_eps(
    epsilon: float, n: int, omega: float, L: float = 1.0, C: float = 1.0
) -> complex:
    """Effective impedance of the level-n truncated ladder, by n decimation steps."""
    if not epsilon > 0:
        raise NetworkError(f"epsilon must be > 0, got {epsilon}")
    if n < 1:
        raise ValueError(f"level must be >= 1, got {n}")
    z = 1j * omega * L + epsilon
    for _ in range(n):
        z = decimation_map(z, epsilon, omega, L, C)
    return z


def _newton_fixed_point(
    f: Callable[[complex], complex],
    z0: complex,
    tol: float = FP_TOL,
    max_iter: int = 60,
) -> tuple[complex, float, int]:
    """Damped Newton on g(z) = f(z) - z with a central-difference 2x2 real Jacobian."""
    z = complex(z0)
    g = f(z) - z
    for it in range(max_iter):
        if abs(g) < tol * (1.0 + abs(z)):
            return z, abs(g), it
        h = 1e-7 * (1.0 + abs(z))
        gpr = (f(z + h) - (z + h)) - (f(z - h) - (z - h))
        gpi = (f(z + 1j * h) - (z + 1j * h)) - (f(z - 1j * h) - (z - 1j * h))
        J = np.array(
            [
                [gpr.real, gpi.real],
                [gpr.imag, gpi.imag],
            ]
        ) / (2.0 * h)
        try:
            step = np.linalg.solve(J, [g.real, g.imag])
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError("singular Jacobian in fixed-point Newton") from exc
        dz = complex(step[0], step[1])
        lam = 1.0
        while lam > 1e-6:
            z_new = z - lam * dz
            g_new = f(z_new) - z_new
            if abs(g_new) < abs(g):
                z, g = z_new, g_new
                break
            lam *= 0.5
        else:
            raise ConvergenceError("Newton line search stalled")
    raise ConvergenceError(f"fixed point not found in {max_iter} Newton steps")


def _aitken_polish(
    f: Callable[[complex], complex], z: complex, rounds: int = 8
) -> complex:
    """Iterated Aitken acceleration of the direct iteration (fallback path)."""
    for _ in range(rounds):
        z1 = f(z)
        z2 = f(z1)
        denom = z2 - 2.0 * z1 + z
        if abs(denom) < 1e-300:
            return z2
        cand = z2 - (z2 - z1) ** 2 / denom
        if abs(f(cand) - cand) < abs(f(z2) - z2):
            z = cand
        else:
            z = z2
        if abs(f(z) - z) < FP_TOL * (1.0 + abs(z)):
            break
    return z


def regularized_effective_impedance(
    epsilon: float,
    omega: float,
    L: float = 1.0,
    C: float = 1.0,
    seed: complex | None = None,
) -> complex:
    """Fixed point of the eps-decimation map (the n -> infinity limit at fixed eps).

    The map's multiplier at the fixed point has modulus 1 - O(eps), so direct
    iteration stalls; a short burn-in provides a seed for damped Newton.
    """
    if not epsilon > 0:
        raise NetworkError(f"epsilon must be > 0, got {epsilon}")

    def f(z: complex) -> complex:
        return decimation_map(z, epsilon, omega, L, C)

    if seed is None:
        seed = 1j * omega * L + epsilon
        for _ in range(12):
            seed = f(seed)
    try:
        z, _, _ = _newton_fixed_point(f, seed)
    except ConvergenceError:
        z = _aitken_polish(f, seed)
        z, _, _ = _newton_fixed_point(f, z)
    if z.real <= 0:
        raise ConvergenceError(
            f"eps-regularized fixed point has Re <= 0 at eps={epsilon}: {z}"
        )
    return complex(z)


def _richardson_to_zero(xs: Sequence[float], ys: Sequence[complex]) -> complex:
    """Neville polynomial extrapolation of y(x) to x = 0."""
    xs = list(xs)
    vals = list(ys)
    for level in range(1, len(xs)):
        nxt = []
        for i in range(len(vals) - 1):
            x0, x1 = xs[i], xs[i + level]
            nxt.append((x0 * vals[i + 1] - x1 * vals[i]) / (x0 - x1))
        vals = nxt
    return vals[0]


@dataclass(frozen=True)
class EffectiveImpedance:
    """Result of the two-route effective-impedance computation."""

    zeff: complex
    status: str  # "dissipative" | "non-dissipative"
    in_band: bool
    t: float
    path_a: complex  # eps -> 0 extrapolation of the regularized fixed points
    path_b: complex  # direct fixed point of the eps = 0 map
    residual: float  # |map(zeff) - zeff|
    eps_path: tuple[tuple[float, complex], ...]
    newton_iterations: int

    @property
    def dissipative(self) -> bool:
        return self.status == "dissipative"


def effective_impedance(
    omega: float,
    L: float = 1.0,
    C: float = 1.0,
    tol: float = 1e-7,
) -> EffectiveImpedance:
    """Effective impedance of the infinite ladder by two independent routes.

    Route (a) solves the regularized fixed point along a decreasing eps
    schedule and Richardson-extrapolates to eps = 0+.  Route (b) solves the
    eps = 0 fixed point directly by damped Newton seeded from (a).  The two
    must agree within `tol` relative.  Inside the filter band the result is
    dissipative (Re > 0); outside, the regularized limit loses its real part
    and the result is flagged non-dissipative.
    """
    fs = filter_condition(omega, L, C)
    eps_roots: list[tuple[float, complex]] = []
    z_prev: complex | None = None
    for eps in EPS_SCHEDULE:
        z_prev = regularized_effective_impedance(eps, omega, L, C, seed=z_prev)
        eps_roots.append((eps, z_prev))
    tail = eps_roots[-3:]
    path_a = _richardson_to_zero([e for e, _ in tail], [z for _, z in tail])

    def f0(z: complex) -> complex:
        return decimation_map(z, 0.0, omega, L, C)

    path_b, residual, iters = _newton_fixed_point(f0, path_a)
    if abs(path_a - path_b) > tol * abs(path_b):
        raise ConvergenceError(
            f"effective-impedance routes disagree: |a-b|={abs(path_a - path_b):.3e}, "
            f"a={path_a}, b={path_b}"
        )
    dissipative = path_b.real > 1e-6 * abs(path_b)
    if dissipative != fs.in_band:
        raise ConvergenceError(
            f"band test and computed Re(Zeff) disagree at omega={omega}: "
            f"in_band={fs.in_band}, zeff={path_b}"
        )
    return EffectiveImpedance(
        zeff=complex(path_b),
        status="dissipative" if dissipative else "non-dissipative",
        in_band=fs.in_band,
        t=fs.t,
        path_a=complex(path_a),
        path_b=complex(path_b),
        residual=float(residual),
        eps_path=tuple((float(e), complex(z)) for e, z in eps_roots),
        newton_iterations=iters,
    )


# ---------------------------------------------------------------------------
# frequency sweep


@dataclass(frozen=True)
class SweepRow:
    omega: float
    t: float
    in_band: bool
    zeff_re: float
    zeff_im: float
    status: str


def frequency_sweep(
    omega_grid: Sequence[float], L: float = 1.0, C: float = 1.0
) -> list[SweepRow]:
    """One effective-impedance row per frequency; failures recorded, not raised."""
    omegas = [float(w) for w in omega_grid]
    if not omegas:
        raise ValueError("frequency grid must be non-empty")
    if any(not w > 0 for w in omegas):
        raise ValueError("frequencies must be positive")
    rows = []
    for w in omegas:
        fs = filter_condition(w, L, C)
        try:
            # classification only needs the sign of Re; near the band edges the
            # eps-extrapolation loses relative accuracy, so the route-agreement
            # gate is looser here than in the two-route contract itself
            res = effective_impedance(w, L, C, tol=1e-5)
            rows.append(
                SweepRow(
                    float(w), float(fs.t), fs.in_band,
                    res.zeff.real, res.zeff.imag, res.status,
                )
            )
        except (ConvergenceError, SingularInteriorError, NetworkError) as exc:
            logger.warning("sweep row omega=%g failed: %s", w, exc)
            rows.append(
                SweepRow(float(w), float(fs.t), fs.in_band, math.nan, math.nan, "error")
            )
    return rows


SWEEP_COLUMNS = ("omega", "t", "in_band", "zeff_re", "zeff_im", "status")


def sweep_to_csv(rows: Sequence[SweepRow]) -> str:
    lines = [",".join(SWEEP_COLUMNS)]
    for r in rows:
        lines.append(
            f"{r.omega!r},{r.t!r},{str(r.in_band).lower()},"
            f"{r.zeff_re!r},{r.zeff_im!r},{r.status}"
        )
    return "\n".join(lines) + "\n"


def sweep_to_json(rows: Sequence[SweepRow]) -> str:
    recs = [
        {
            "omega": r.omega,
            "t": r.t,
            "in_band": r.in_band,
            "zeff_re": r.zeff_re,
            "zeff_im": r.zeff_im,
            "status": r.status,
        }
        for r in rows
    ]
    return json.dumps(recs, indent=2, sort_keys=True) + "\n"
