"""The power-dissipation measure on cells of the node dust, and its reference.

For a harmonic potential h, the measure of the cell addressed by the word
w = w1...wm is

    nu_h(T_w) = ||D0 A_{wm} ... A_{w1} u||^2,

equivalently c times the sum of squared corner differences of h on the cell
boundary, c = Re(Zeff)/(2 |Zeff|^2).  nu_h is finitely and sigma-additive on
cells, atomless, and comparable to the squared oscillation with constants
[c, 3c].  The uniform Bernoulli measure mu(T_w) = 3^{-|w|} is the reference
measure on the same cells.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .harmonic import HarmonicFunction
from .words import (
    Word,
    cells_are_disjoint,
    validate_word,
    word_to_str,
    words_at_level,
)

logger = logging.getLogger(__name__)


class MeasureAxiomError(ArithmeticError):
    """A finite-level measure identity failed beyond tolerance."""


class CellMeasure:
    """nu_h on cells, with cached values per word."""

    def __init__(self, h: HarmonicFunction):
        self.h = h
        self._cache: dict[Word, float] = {}

    @property
    def total(self) -> float:
        """nu of the whole space: the dissipated power of h."""
        return self.h.dissipation()

    def nu(self, word: Sequence[int]) -> float:
        w = validate_word(word)
        if w not in self._cache:
            vals = self.h.extend_to_cell(w)
            self._cache[w] = self.h.matrices.seminorm_sq(vals)
        return self._cache[w]

    def nu_from_boundary_pairs(self, word: Sequence[int]) -> float:
        """Same value via the corner-difference sum; independent evaluation route."""
        vals = self.h.extend_to_cell(validate_word(word))
        c = self.h.matrices.c
        return c * (
            abs(vals[0] - vals[1]) ** 2
            + abs(vals[0] - vals[2]) ** 2
            + abs(vals[1] - vals[2]) ** 2
        )

    def oscillation(self, word: Sequence[int]) -> float:
        """Max corner difference on the cell boundary (where extrema live)."""
        vals = self.h.extend_to_cell(validate_word(word))
        return float(
            max(abs(vals[0] - vals[1]), abs(vals[0] - vals[2]), abs(vals[1] - vals[2]))
        )

    def union(self, cells: Sequence[Sequence[int]]) -> float:
        """nu of a finite union of pairwise disjoint cells.

        Values are summed cellwise; inter-cell connecting edges contribute
        nothing here because their finite-level terms vanish in the defining
        double limit.  Disjoint cells of this hierarchy admit no direct
        connecting edge at any level, so the dropped-term magnitude is
        exactly zero; it is logged for transparency anyway.
        """
        ws = [validate_word(w) for w in cells]
        for a in range(len(ws)):
            for b in range(a + 1, len(ws)):
                if not cells_are_disjoint(ws[a], ws[b]):
                    raise MeasureAxiomError(
                        f"cells {word_to_str(ws[a])!r} and {word_to_str(ws[b])!r} "
                        "are not disjoint"
                    )
        logger.debug(
            "union over %d disjoint cells: dropped connecting-edge mass = 0.0", len(ws)
        )
        return float(sum(self.nu(w) for w in ws))


@dataclass(frozen=True)
class BernoulliMeasure:
    """Self-similar probability with uniform branch weights."""

    weights: tuple[float, float, float] = (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)

    def __post_init__(self):
        if len(self.weights) != 3 or any(not w > 0 for w in self.weights):
            raise ValueError("weights must be three positive numbers")
        if abs(sum(self.weights) - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")

    def mu(self, word: Sequence[int]) -> float:
        w = validate_word(word)
        out = 1.0
        for letter in w:
            out *= self.weights[letter - 1]
        return out


# ---------------------------------------------------------------------------
# finite-level verification reports


@dataclass(frozen=True)
class AdditivityReport:
    n: int
    total: float
    expected_total: float
    total_rel_err: float
    max_refinement_rel_err: float


def additivity_check(
    cm: CellMeasure,
    n: int,
    total_rtol: float = 1e-8,
    refine_rtol: float = 1e-9,
) -> AdditivityReport:
    """Partition and refinement identities of nu at levels <= n.

    Asserts that the level-n cell values sum to the total dissipation and
    that every cell's value equals the sum over its three children.
    """
    if not (0 <= n <= 8):
        raise ValueError(f"level must be in [0, 8], got {n}")
    expected = cm.total
    scale = expected if expected > 0 else 1.0
    total = math.fsum(cm.nu(w) for w in words_at_level(n))
    total_err = abs(total - expected) / scale
    worst = 0.0
    for level in range(n):
        for w in words_at_level(level):
            parent = cm.nu(w)
            children = math.fsum(cm.nu(w + (j,)) for j in (1, 2, 3))
            worst = max(worst, abs(parent - children) / scale)
    if total_err > total_rtol:
        raise MeasureAxiomError(
            f"level-{n} total deviates from dissipation: rel err {total_err:.3e}"
        )
    if worst > refine_rtol:
        raise MeasureAxiomError(f"refinement identity violated: rel err {worst:.3e}")
    return AdditivityReport(n, total, expected, total_err, worst)


def atom_check(
    cm: CellMeasure, prefix: Sequence[int], depth: int
) -> tuple[float, ...]:
    """nu along the nested prefix cells T_{w<=k}, k = 0..depth.

    The sequence is nonnegative, bounded by 3c * osc^2 per cell, and decays
    geometrically, so single points carry no mass.
    """
    if not (0 <= depth <= 60):
        raise ValueError(f"depth must be in [0, 60], got {depth}")
    w = validate_word(prefix)
    if len(w) < depth:
        raise ValueError(f"prefix length {len(w)} is shorter than depth {depth}")
    vals = []
    c = cm.h.matrices.c
    for k in range(depth + 1):
        v = cm.nu(w[:k])
        osc = cm.oscillation(w[:k])
        if v < -1e-15 or v > 3.0 * c * osc * osc * (1.0 + 1e-9) + 1e-15:
            raise MeasureAxiomError(
                f"cell value outside [0, 3c osc^2] at depth {k}: nu={v}, osc={osc}"
            )
        vals.append(v)
    return tuple(vals)


@dataclass(frozen=True)
class OscComparison:
    word: Word
    nu: float
    osc: float
    ratio: float | None  # nu / osc^2, None when osc == 0 (exact-zero case)
    lower: float  # c
    upper: float  # 3c


def osc_comparability(cm: CellMeasure, word: Sequence[int]) -> OscComparison:
    """Bracket nu(T_w) between c and 3c times the squared boundary oscillation."""
    w = validate_word(word)
    nu = cm.nu(w)
    osc = cm.oscillation(w)
    c = cm.h.matrices.c
    if osc == 0.0:
        if nu > 1e-30:
            raise MeasureAxiomError(f"constant-on-cell but nu={nu}")
        return OscComparison(w, nu, osc, None, c, 3.0 * c)
    ratio = nu / (osc * osc)
    if not (c - 1e-9 <= ratio <= 3.0 * c + 1e-9):
        raise MeasureAxiomError(
            f"oscillation bracket violated on {word_to_str(w)!r}: "
            f"ratio={ratio}, bracket=[{c}, {3 * c}]"
        )
    return OscComparison(w, nu, osc, ratio, c, 3.0 * c)


def hausdorff_dimension(alpha: float) -> float:
    """Similarity dimension of the node dust: three maps of ratio alpha/2."""
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    return math.log(3.0) / math.log(2.0 / alpha)


# ---------------------------------------------------------------------------
# tables


MEASURE_COLUMNS = ("word", "nu", "mu", "ratio_nu_over_mu", "osc")


def measure_table(
    cm: CellMeasure, bm: BernoulliMeasure, n: int
) -> list[tuple[str, float, float, float, float]]:
    """Per-cell rows (word, nu, mu, nu/mu, osc) at level n, in word order."""
    rows = []
    for w in words_at_level(n):
        nu = cm.nu(w)
        mu = bm.mu(w)
        rows.append((word_to_str(w), nu, mu, nu / mu, cm.oscillation(w)))
    return rows


def measure_table_csv(rows: Iterable[tuple[str, float, float, float, float]]) -> str:
    lines = [",".join(MEASURE_COLUMNS)]
    for word, nu, mu, ratio, osc in rows:
        lines.append(f"{word},{nu!r},{mu!r},{ratio!r},{osc!r}")
    return "\n".join(lines) + "\n"


def measure_table_json(rows: Iterable[tuple[str, float, float, float, float]]) -> str:
    recs = [
        {"word": word, "nu": nu, "mu": mu, "ratio_nu_over_mu": ratio, "osc": osc}
        for word, nu, mu, ratio, osc in rows
    ]
    return json.dumps(recs, indent=2, sort_keys=True) + "\n"
