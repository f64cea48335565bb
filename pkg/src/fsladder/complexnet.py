"""Complex-impedance networks: components, Kirchhoff solving, boundary reduction.

Everything here works in the frequency domain.  A network is an undirected
simple graph with a nonzero complex impedance on every edge and a marked,
ordered boundary.  The average power dissipated by a potential v is the
quadratic form

    P[v] = sum over edges {x,y} of  (1/2) * Re(Z_xy)/|Z_xy|^2 * |v(x)-v(y)|^2,

which vanishes on purely reactive edges (inductors, capacitors).

All types are immutable after construction and all operations are pure
functions, safe for concurrent use.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

logger = logging.getLogger(__name__)

#: relative tolerance for identity-style checks (row sums, power balance)
DEFAULT_IDENTITY_RTOL = 1e-9
#: relative tolerance for symmetry detection in equivalent_triangle
DEFAULT_SYMMETRY_RTOL = 1e-6


class NetworkError(ValueError):
    """Invalid network data."""


class SingularInteriorError(ArithmeticError):
    """The interior block of the admittance Laplacian is (numerically) singular."""

    def __init__(self, message: str, cond: float = float("inf")):
        super().__init__(message)
        self.cond = cond


class AsymmetricResponseError(ArithmeticError):
    """Boundary response is not S3-symmetric; no single equivalent triangle exists."""


# ---------------------------------------------------------------------------
# components


@dataclass(frozen=True)
class Inductor:
    L: float  # henries

    def __post_init__(self):
        if not (self.L > 0 and np.isfinite(self.L)):
            raise NetworkError(f"inductance must be positive and finite, got {self.L}")


@dataclass(frozen=True)
class Capacitor:
    C: float  # farads

    def __post_init__(self):
        if not (self.C > 0 and np.isfinite(self.C)):
            raise NetworkError(f"capacitance must be positive and finite, got {self.C}")


@dataclass(frozen=True)
class Resistor:
    R: float  # ohms

    def __post_init__(self):
        if not (self.R >= 0 and np.isfinite(self.R)):
            raise NetworkError(f"resistance must be >= 0 and finite, got {self.R}")


@dataclass(frozen=True)
class Fixed:
    z: complex  # ohms

    def __post_init__(self):
        if not np.isfinite(complex(self.z).real) or not np.isfinite(complex(self.z).imag):
            raise NetworkError(f"fixed impedance must be finite, got {self.z}")


@dataclass(frozen=True)
class Series:
    parts: tuple

    def __post_init__(self):
        if len(self.parts) == 0:
            raise NetworkError("a series chain needs at least one part")


ComponentKind = Inductor | Capacitor | Resistor | Fixed | Series


def impedance_of(kind: ComponentKind, omega: float) -> complex:
    """Frequency-domain impedance of a component at angular frequency omega."""
    if not (omega > 0 and np.isfinite(omega)):
        raise NetworkError(f"angular frequency must be positive, got {omega}")
    if isinstance(kind, Inductor):
        return 1j * omega * kind.L
    if isinstance(kind, Capacitor):
        return 1.0 / (1j * omega * kind.C)
    if isinstance(kind, Resistor):
        return complex(kind.R)
    if isinstance(kind, Fixed):
        return complex(kind.z)
    if isinstance(kind, Series):
        return sum(impedance_of(p, omega) for p in kind.parts)
    raise NetworkError(f"unknown component kind: {kind!r}")


# ---------------------------------------------------------------------------
# networks


def _check_finite_complex(z: complex, what: str) -> complex:
    z = complex(z)
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise NetworkError(f"{what} must be finite, got {z}")
    return z


@dataclass(frozen=True)
class Network:
    """Undirected simple graph with complex edge impedances and an ordered boundary.

    edges: tuple of (u, v, z) with node indices u != v and z != 0.
    """

    node_count: int
    boundary: tuple[int, ...]
    edges: tuple[tuple[int, int, complex], ...]

    def __post_init__(self):
        n = self.node_count
        if n <= 0:
            raise NetworkError("node_count must be positive")
        if not self.boundary:
            raise NetworkError("boundary must be non-empty")
        if len(set(self.boundary)) != len(self.boundary):
            raise NetworkError("boundary nodes must be distinct")
        if any(not (0 <= b < n) for b in self.boundary):
            raise NetworkError("boundary node index out of range")
        seen = set()
        adj = [[] for _ in range(n)]
        for u, v, z in self.edges:
            if not (0 <= u < n and 0 <= v < n):
                raise NetworkError(f"edge ({u},{v}) out of range")
            if u == v:
                raise NetworkError(f"self-loop at node {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise NetworkError(f"multiple edges between {key}")
            seen.add(key)
            z = _check_finite_complex(z, "edge impedance")
            if z == 0:
                raise NetworkError(f"zero impedance on edge {key}")
            adj[u].append(v)
            adj[v].append(u)
        # connectivity
        if n > 1:
            stack, visited = [0], {0}
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in visited:
                        visited.add(y)
                        stack.append(y)
            if len(visited) != n:
                raise NetworkError("network graph is not connected")

    @property
    def interior(self) -> tuple[int, ...]:
        bset = set(self.boundary)
        return tuple(i for i in range(self.node_count) if i not in bset)


def edge_power(vx: complex, vy: complex, z: complex) -> float:
    """Average power dissipated on one edge: (1/2) Re(z)/|z|^2 |vx-vy|^2."""
    z = _check_finite_complex(z, "edge impedance")
    if z == 0:
        raise NetworkError("zero impedance")
    dv = complex(vx) - complex(vy)
    return 0.5 * (z.real / abs(z) ** 2) * (dv.real**2 + dv.imag**2)


def network_power(net: Network, v: Sequence[complex]) -> float:
    """Total dissipated power of a potential; 0 for constant potentials."""
    v = np.asarray(v, dtype=complex)
    if v.shape != (net.node_count,):
        raise NetworkError(
            f"potential must have one value per node ({net.node_count}), got shape {v.shape}"
        )
    total = 0.0
    for u, w, z in net.edges:
        total += edge_power(v[u], v[w], z)
    return total


def admittance_laplacian(net: Network) -> np.ndarray:
    """Complex symmetric node-balance matrix: L[u,u] = sum 1/z, L[u,v] = -1/z_uv."""
    L = np.zeros((net.node_count, net.node_count), dtype=complex)
    for u, v, z in net.edges:
        y = 1.0 / z
        L[u, u] += y
        L[v, v] += y
        L[u, v] -= y
        L[v, u] -= y
    return L


def _interior_solve(Lii: np.ndarray, rhs: np.ndarray, scale: float) -> np.ndarray:
    """Dense LU solve of the interior block with a residual-based singularity guard."""
    if Lii.size == 0:
        return np.zeros_like(rhs)
    try:
        x = np.linalg.solve(Lii, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularInteriorError(
            f"interior block is singular (cond={np.linalg.cond(Lii):.3e})",
            cond=float(np.linalg.cond(Lii)),
        ) from exc
    resid = np.max(np.abs(Lii @ x - rhs)) if rhs.size else 0.0
    if not np.all(np.isfinite(x)) or resid > 1e-8 * max(1.0, scale):
        cond = float(np.linalg.cond(Lii))
        raise SingularInteriorError(
            f"interior block numerically singular: residual {resid:.3e}, cond={cond:.3e}",
            cond=cond,
        )
    return x


def kirchhoff_solve(net: Network, boundary_values: Sequence[complex]) -> np.ndarray:
    """Equilibrium potential with the given boundary values.

    Returns the full node-potential vector v with v = boundary_values on the
    boundary and zero net current at every interior node.
    """
    u = np.asarray(boundary_values, dtype=complex)
    if u.shape != (len(net.boundary),):
        raise NetworkError(
            f"expected {len(net.boundary)} boundary values, got shape {u.shape}"
        )
    L = admittance_laplacian(net)
    b = list(net.boundary)
    i = list(net.interior)
    v = np.zeros(net.node_count, dtype=complex)
    v[b] = u
    if i:
        rhs = -L[np.ix_(i, b)] @ u
        v[i] = _interior_solve(L[np.ix_(i, i)], rhs, float(np.max(np.abs(u))) or 1.0)
    return v


def partial_schur(L: np.ndarray, keep: Sequence[int]) -> np.ndarray:
    """Schur complement of a matrix onto the `keep` indices, eliminating the rest."""
    keep = list(keep)
    drop = [k for k in range(L.shape[0]) if k not in set(keep)]
    if not drop:
        return L[np.ix_(keep, keep)].copy()
    Lkk = L[np.ix_(keep, keep)]
    Lkd = L[np.ix_(keep, drop)]
    Ldk = L[np.ix_(drop, keep)]
    Ldd = L[np.ix_(drop, drop)]
    X = _interior_solve(Ldd, Ldk, float(np.max(np.abs(L))) or 1.0)
    return Lkk - Lkd @ X


def schur_trace(net: Network) -> np.ndarray:
    """Boundary response matrix: the admittance Laplacian with interior eliminated.

    For any boundary data u, u^H S u equals v^H L v at the Kirchhoff solution,
    so S is the Laplacian of the electrically equivalent boundary network.
    """
    L = admittance_laplacian(net)
    return partial_schur(L, list(net.boundary))


def equivalent_triangle(
    schur: np.ndarray, tol: float = DEFAULT_SYMMETRY_RTOL
) -> complex:
    """Edge impedance of the triangle realizing a symmetric 3x3 boundary response.

    Raises AsymmetricResponseError when the off-diagonal entries disagree by
    more than `tol` relative, i.e. the response is not S3-symmetric.
    """
    S = np.asarray(schur, dtype=complex)
    if S.shape != (3, 3):
        raise NetworkError(f"expected a 3x3 response matrix, got {S.shape}")
    off = np.array([S[0, 1], S[0, 2], S[1, 2]])
    mean = off.mean()
    if mean == 0:
        raise AsymmetricResponseError("off-diagonal response vanishes")
    spread = float(np.max(np.abs(off - mean)) / abs(mean))
    if spread > tol:
        raise AsymmetricResponseError(
            f"off-diagonal spread {spread:.3e} exceeds tolerance {tol:.1e}"
        )
    return complex(-1.0 / mean)


def min_dissipation_extension(
    net: Network, boundary_values: Sequence[complex]
) -> tuple[np.ndarray, float]:
    """Potential of least dissipated power among all extensions of the boundary data.

    Requires Re(z) > 0 on every edge (the dissipation form must be coercive).
    Minimizing the real quadratic form solves the Laplacian weighted by
    Re(z)/|z|^2, separately for real and imaginary parts.  For purely
    resistive networks this coincides with the Kirchhoff solution.
    """
    u = np.asarray(boundary_values, dtype=complex)
    if u.shape != (len(net.boundary),):
        raise NetworkError(
            f"expected {len(net.boundary)} boundary values, got shape {u.shape}"
        )
    W = np.zeros((net.node_count, net.node_count))
    for a, b, z in net.edges:
        z = complex(z)
        if not z.real > 0:
            raise NetworkError(
                f"minimum-dissipation extension needs Re(z) > 0 on every edge, "
                f"edge ({a},{b}) has z={z}"
            )
        w = z.real / abs(z) ** 2
        W[a, a] += w
        W[b, b] += w
        W[a, b] -= w
        W[b, a] -= w
    bidx = list(net.boundary)
    iidx = list(net.interior)
    v = np.zeros(net.node_count, dtype=complex)
    v[bidx] = u
    if iidx:
        Wii = W[np.ix_(iidx, iidx)]
        rhs = -W[np.ix_(iidx, bidx)] @ np.column_stack([u.real, u.imag])
        sol = _interior_solve(Wii, rhs, float(np.max(np.abs(u))) or 1.0)
        v[iidx] = sol[:, 0] + 1j * sol[:, 1]
    return v, network_power(net, v)
