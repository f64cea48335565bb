"""Harmonic potentials on the ladder: extension matrices, spectra, dissipation.

A harmonic potential is generated from three boundary values by the
extension matrices A1, A2, A3: the values on the corners of child cell j are
A_j applied to the parent-cell corner values.  The matrices come from a
single Kirchhoff solve on the level-1 equivalent network (deepest triangles
carrying the effective impedance), and satisfy

* A_j (1,1,1)^T = (1,1,1)^T            (constants are harmonic),
* sum_j A_j^H D0^2 A_j = D0^2          (dissipation is level-invariant),
* spec(A_j) = {1, lam2, lam2/3} with |lam2| < 1.

Here D0^2 = c (3I - J), c = Re(Zeff)/(2 |Zeff|^2), is the dissipation form
of the effective triangle, and ||D0 u||^2 = <D0^2 u, u> its seminorm, which
on mean-zero vectors is just 3c times the squared Euclidean norm.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from . import ladder
from .complexnet import (
    _interior_solve,
    admittance_laplacian,
    kirchhoff_solve,
    network_power,
)
from .ladder import LadderGraph, OutOfBandError, Renormalized, build_graph
from .words import VertexId, Word, canonical_vertex, validate_word, words_at_level

logger = logging.getLogger(__name__)


class SpectralError(ArithmeticError):
    """Computed extension-matrix spectrum violates |lam3| < |lam2| < 1."""


class ConstantBoundaryError(ValueError):
    """Operation requires a non-constant harmonic potential."""


def _ones_residual(A: np.ndarray) -> float:
    return float(np.max(np.abs(A @ np.ones(3) - np.ones(3))))


@dataclass(frozen=True)
class ExtensionMatrices:
    """The harmonic-extension triple (A1, A2, A3) with its dissipation form."""

    A: tuple[np.ndarray, np.ndarray, np.ndarray]
    zeff: complex
    zc: complex
    omega: float
    L: float
    C: float

    @property
    def c(self) -> float:
        """Coefficient of the effective-triangle dissipation form."""
        return self.zeff.real / (2.0 * abs(self.zeff) ** 2)

    @cached_property
    def d0sq(self) -> np.ndarray:
        return self.c * (3.0 * np.eye(3) - np.ones((3, 3)))

    @cached_property
    def d0(self) -> np.ndarray:
        """Positive-semidefinite square root of d0sq: sqrt(3c) (I - J/3)."""
        return np.sqrt(3.0 * self.c) * (np.eye(3) - np.ones((3, 3)) / 3.0)

    def seminorm_sq(self, u: Sequence[complex]) -> float:
        """||D0 u||^2, computed stably on the mean-removed vector."""
        v = np.asarray(u, dtype=complex)
        v = v - v.mean()
        return float(3.0 * self.c * np.vdot(v, v).real)

    def seminorm(self, u: Sequence[complex]) -> float:
        return float(np.sqrt(max(self.seminorm_sq(u), 0.0)))


def compute_extension_matrices(
    zeff: complex, omega: float, L: float = 1.0, C: float = 1.0
) -> ExtensionMatrices:
    """Extension matrices from one Kirchhoff solve on the level-1 equivalent cell.

    Column i of A_j holds the equilibrium values at the corners of child cell
    j when the boundary carries the i-th basis vector.  Raises OutOfBandError
    for Re(zeff) <= 0 (no dissipative equilibrium network exists there).
    """
    zeff = complex(zeff)
    if not zeff.real > 0:
        raise OutOfBandError(
            f"extension matrices need a dissipative effective impedance, got {zeff}"
        )
    graph = build_graph(1)
    net = ladder.assign_impedances(graph, Renormalized(zeff), omega, L, C)
    # all three basis solves at once: interior response matrix
    interior = [k for k in range(net.node_count) if k not in graph.boundary]
    colmap = {idx: pos for pos, idx in enumerate(interior)}
    Lmat = admittance_laplacian(net)
    X = -_interior_solve(
        Lmat[np.ix_(interior, interior)],
        Lmat[np.ix_(interior, list(graph.boundary))],
        1.0,
    )
    A = []
    for j in (1, 2, 3):
        rows = []
        for k in (1, 2, 3):
            vert = canonical_vertex((j,), k)
            rows.append(X[colmap[graph.index[vert]], :])
        A.append(np.array(rows))
    m = ExtensionMatrices(tuple(A), zeff, 1.0 / (1j * omega * C), omega, L, C)
    _validate_matrices(m)
    return m


def _validate_matrices(m: ExtensionMatrices, rtol: float = 1e-9) -> None:
    for j, Aj in enumerate(m.A, start=1):
        r = _ones_residual(Aj)
        if r > 1e-9:
            raise SpectralError(f"A{j} does not fix constants: residual {r:.3e}")
    acc = sum(Aj.conj().T @ m.d0sq @ Aj for Aj in m.A)
    err = np.max(np.abs(acc - m.d0sq))
    if err > rtol * np.max(np.abs(m.d0sq)):
        raise SpectralError(f"self-similarity identity violated: {err:.3e}")
    spectra = [np.sort_complex(np.array(eigenvalues(Aj))) for Aj in m.A]
    for s in spectra[1:]:
        if np.max(np.abs(s - spectra[0])) > 1e-8:
            raise SpectralError("extension-matrix spectra differ between cells")


def eigenvalues(A: np.ndarray) -> tuple[complex, complex, complex]:
    """Spectrum of an extension matrix, deflating the known pair (1, constants).

    The induced action on potential differences (u1-u2, u2-u3) is a 2x2
    matrix whose eigenvalues come from the quadratic formula; this avoids
    general eigensolver edge cases and keeps the constant eigenvalue exact.
    """
    A = np.asarray(A, dtype=complex)
    # action on difference coordinates d(u) = (u1-u2, u2-u3)
    c1 = A @ np.array([1.0, 0.0, 0.0])  # d = (1, 0)
    c2 = A @ np.array([0.0, 0.0, -1.0])  # d = (0, 1)
    M = np.array(
        [
            [c1[0] - c1[1], c2[0] - c2[1]],
            [c1[1] - c1[2], c2[1] - c2[2]],
        ]
    )
    tr = M[0, 0] + M[1, 1]
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    disc = np.sqrt(tr * tr - 4.0 * det + 0j)
    lam_a = (tr + disc) / 2.0
    lam_b = (tr - disc) / 2.0
    if abs(lam_a) < abs(lam_b):
        lam_a, lam_b = lam_b, lam_a
    return (1.0 + 0j, complex(lam_a), complex(lam_b))


@dataclass(frozen=True)
class SpectralReport:
    lam1: complex
    lam2: complex
    lam3: complex

    @property
    def contraction(self) -> float:
        """Per-level decay ratio r = |lam2| of non-constant harmonic data."""
        return float(abs(self.lam2))


def spectral_report(m: ExtensionMatrices) -> SpectralReport:
    """Eigenvalues sorted by modulus; enforces |lam3| < |lam2| < |lam1| = 1."""
    lam1, lam2, lam3 = eigenvalues(m.A[0])
    res = _ones_residual(m.A[0])
    if res > 1e-9:
        raise SpectralError(f"leading eigenpair violated: |A 1 - 1| = {res:.3e}")
    if not (abs(lam3) < abs(lam2) < 1.0):
        raise SpectralError(
            f"spectrum violates |lam3| < |lam2| < 1: lam2={lam2}, lam3={lam3}"
        )
    return SpectralReport(lam1, lam2, lam3)


# ---------------------------------------------------------------------------
# harmonic functions


class HarmonicFunction:
    """Harmonic potential generated from three boundary values.

    Values on the corners of the cell addressed by word w = w1...wm are
    A_{wm} ... A_{w1} u: the first letter acts first.  Evaluation at a vertex
    is well-defined on canonical ids (the two descriptions of an identified
    corner give the same value).
    """

    def __init__(self, boundary: Sequence[complex], matrices: ExtensionMatrices):
        u = np.asarray(boundary, dtype=complex)
        if u.shape != (3,):
            raise ValueError(f"boundary data must hold three values, got {u.shape}")
        if not np.all(np.isfinite(u.view(float))):
            raise ValueError("boundary data must be finite")
        self.boundary = u
        self.matrices = matrices
        self._cells: dict[Word, np.ndarray] = {(): u}

    @property
    def is_constant(self) -> bool:
        return bool(np.max(np.abs(self.boundary - self.boundary.mean())) == 0)

    def extend_to_cell(self, word: Sequence[int]) -> np.ndarray:
        """Corner values (at G_w(p1), G_w(p2), G_w(p3)) of the cell at `word`."""
        w = validate_word(word)
        if w in self._cells:
            return self._cells[w]
        prev = self.extend_to_cell(w[:-1])
        vals = self.matrices.A[w[-1] - 1] @ prev
        self._cells[w] = vals
        return vals

    def evaluate(self, vertex: VertexId | tuple) -> complex:
        word, corner = vertex
        v = canonical_vertex(word, corner)
        return complex(self.extend_to_cell(v.word)[v.corner - 1])

    def dissipation(self) -> float:
        """Total dissipated power <D0^2 u, u> of the harmonic potential."""
        return self.matrices.seminorm_sq(self.boundary)

    def restrict_to_level(self, graph: LadderGraph) -> np.ndarray:
        """Values on every vertex of a ladder graph, ordered like the graph."""
        out = np.empty(len(graph.vertices), dtype=complex)
        for pos, vert in enumerate(graph.vertices):
            out[pos] = self.extend_to_cell(vert.word)[vert.corner - 1]
        return out


# ---------------------------------------------------------------------------
# level invariance


@dataclass(frozen=True)
class LevelInvarianceRow:
    n: int
    p_zn: float  # power on the level-n equivalent network
    p_eps: dict  # eps -> power on the eps-regularized equivalent network
    p_eps_truncated: dict  # eps -> power on the bare truncated network (-> 0)


def level_invariance_report(
    h: HarmonicFunction,
    n_max: int,
    eps_list: Sequence[float] = (1e-2, 1e-3, 1e-4),
) -> list[LevelInvarianceRow]:
    """Dissipation of h restricted to each level, on three families of networks.

    The `p_zn` column evaluates the level-n equivalent network (deepest
    triangles at the effective impedance) and is level-invariant.  The
    `p_eps` column replaces the deepest triangles by the eps-regularized
    effective impedance and adds eps in series above; it converges to `p_zn`
    as eps -> 0.  The `p_eps_truncated` column evaluates the same potential
    on the bare truncated network; every edge there is reactive + eps, so the
    value vanishes linearly with eps (recorded for transparency, the
    regularized limit lives in the other column).
    """
    m = h.matrices
    omega, L, C = m.omega, m.L, m.C
    zeps = {
        e: ladder.regularized_effective_impedance(e, omega, L, C) for e in eps_list
    }
    zl = 1j * omega * L
    zc = 1.0 / (1j * omega * C)
    rows = []
    for n in range(n_max + 1):
        graph = build_graph(n)
        v = h.restrict_to_level(graph)
        net_zn = ladder.assign_impedances(graph, Renormalized(m.zeff), omega, L, C)
        p_zn = network_power(net_zn, v)
        p_eps = {}
        p_trunc = {}
        for e in eps_list:
            net_e = ladder._assign(graph, lambda d: zl + e, zc + e, zeps[e])
            p_eps[e] = network_power(net_e, v)
            net_t = ladder.assign_impedances(graph, ladder.Truncated(e), omega, L, C)
            p_trunc[e] = network_power(net_t, v)
        rows.append(LevelInvarianceRow(n, p_zn, p_eps, p_trunc))
    return rows


def equilibrium_cell_matrices(
    epsilon: float, omega: float, L: float = 1.0, C: float = 1.0
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Extension matrices of the eps-regularized level-1 equilibrium cell.

    The cell has eps in series on its own edges and carries the
    eps-regularized effective impedance on the inner triangles; its interior
    response converges to the harmonic extension as eps -> 0.
    """
    zeps = ladder.regularized_effective_impedance(epsilon, omega, L, C)
    graph = build_graph(1)
    zl = 1j * omega * L + epsilon
    zc = 1.0 / (1j * omega * C) + epsilon
    net = ladder._assign(graph, lambda d: zl, zc, zeps)
    cols = []
    for i in range(3):
        u = np.zeros(3, dtype=complex)
        u[i] = 1.0
        cols.append(kirchhoff_solve(net, u))
    V = np.column_stack(cols)
    A = []
    for j in (1, 2, 3):
        rows = [V[graph.index[canonical_vertex((j,), k)], :] for k in (1, 2, 3)]
        A.append(np.array(rows))
    return tuple(A)


# ---------------------------------------------------------------------------
# continuity


@dataclass(frozen=True)
class ContinuityReport:
    m: int
    max_oscillation: float
    bound: float
    per_level: tuple[float, ...]  # max oscillation at levels 1..m


def continuity_modulus(h: HarmonicFunction, m: int) -> ContinuityReport:
    """Maximum corner oscillation over all depth-m cells, with its a priori bound.

    The bound |Zeff| sqrt(2/Re Zeff) r^m sqrt(P[h]), r = |lam2|, comes from
    the per-level contraction of the dissipation form.
    """
    if not (0 <= m <= 8):
        raise ValueError(f"depth must be in [0, 8], got {m}")
    mat = h.matrices
    per_level = []
    for level in range(1, m + 1):
        worst = 0.0
        for w in words_at_level(level):
            vals = h.extend_to_cell(w)
            osc = max(
                abs(vals[0] - vals[1]), abs(vals[0] - vals[2]), abs(vals[1] - vals[2])
            )
            worst = max(worst, osc)
        per_level.append(worst)
    rep = spectral_report(mat)
    r = rep.contraction
    zeff = mat.zeff
    bound = (
        abs(zeff)
        * np.sqrt(2.0 / zeff.real)
        * r**m
        * np.sqrt(max(h.dissipation(), 0.0))
    )
    max_osc = per_level[-1] if per_level else _cell_oscillation(h, ())
    return ContinuityReport(m, max_osc, float(bound), tuple(per_level))


def _cell_oscillation(h: HarmonicFunction, word: Word) -> float:
    vals = h.extend_to_cell(word)
    return float(
        max(abs(vals[0] - vals[1]), abs(vals[0] - vals[2]), abs(vals[1] - vals[2]))
    )


# ---------------------------------------------------------------------------
# export helpers


def evaluation_table_csv(h: HarmonicFunction, words: Sequence[Word]) -> str:
    """CSV of cell-corner values: word, corner, re, im."""
    from .words import word_to_str

    lines = ["word,corner,re,im"]
    for w in words:
        vals = h.extend_to_cell(w)
        for k in (1, 2, 3):
            z = vals[k - 1]
            lines.append(f"{word_to_str(w)},{k},{z.real!r},{z.imag!r}")
    return "\n".join(lines) + "\n"
