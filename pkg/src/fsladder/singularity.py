"""Singularity of the dissipation measure against the uniform Bernoulli measure.

Along a uniformly random letter stream w1 w2 ... the cell ratios satisfy

    nu_h(T_{w1..wn}) / mu(T_{w1..wn}) = 3^n ||D0 A_{wn} ... A_{w1} u||^2,

and the top Lyapunov exponent of the random seminorm product lies strictly
below -log(3)/2, so the ratio tends to zero almost surely: the two measures
are mutually singular.  This module estimates the exponent by Monte Carlo,
evaluates the exact level-m log-averages (the beta bound), and checks the
non-constancy hypothesis exhaustively.

Randomness is counter-based and splittable: sample k of a run with seed s
draws its letters from numpy's Philox generator keyed by s and advanced by
k * 2^20 blocks, so results are reproducible regardless of scheduling.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .harmonic import ConstantBoundaryError, ExtensionMatrices, HarmonicFunction
from .words import Word, validate_word, words_at_level

logger = logging.getLogger(__name__)

#: the singularity threshold for the Lyapunov exponent of the seminorm product
LOG3_HALF = 0.5 * math.log(3.0)

#: per-sample stride in Philox counter blocks
_SAMPLE_STRIDE = 1 << 20


class WordSampler:
    """Reproducible i.i.d. uniform letters over {1, 2, 3}.

    Streams for distinct sample indices are disjoint counter ranges of the
    same keyed generator, hence independent and order-insensitive.
    """

    def __init__(self, seed: int):
        self.seed = int(seed)

    def generator(self, sample_index: int = 0) -> np.random.Generator:
        bitgen = np.random.Philox(key=self.seed)
        bitgen.advance(sample_index * _SAMPLE_STRIDE)
        return np.random.Generator(bitgen)

    def letters(self, n: int, sample_index: int = 0) -> np.ndarray:
        """n letters in {1, 2, 3} for the given sample index."""
        if n < 0:
            raise ValueError("letter count must be >= 0")
        return self.generator(sample_index).integers(1, 4, size=n)


def _unit_boundary(h: HarmonicFunction) -> np.ndarray:
    m = h.matrices
    norm = m.seminorm(h.boundary)
    if norm == 0.0:
        raise ConstantBoundaryError(
            "constant boundary data has zero seminorm; the ratio analysis "
            "needs a non-constant harmonic potential"
        )
    u = np.asarray(h.boundary, dtype=complex) - np.mean(h.boundary)
    return u / norm


def _norms_over_words(
    m: ExtensionMatrices, u: np.ndarray, depth: int
) -> np.ndarray:
    """||D0 A_w u|| for every word of length `depth` (lexicographic order)."""
    out = np.empty(3**depth)
    for pos, w in enumerate(words_at_level(depth)):
        v = u
        for letter in w:
            v = m.A[letter - 1] @ v
        out[pos] = m.seminorm(v)
    return out


def nonconstancy_check(h: HarmonicFunction, m: int) -> tuple[bool, float]:
    """Whether w -> ||D0 A_w u|| varies over words of length m, and its spread.

    Exhaustive over 3^m words; the spread is (max - min)/max.  Constant
    boundary data is rejected.
    """
    if not (1 <= m <= 8):
        raise ValueError(f"word length must be in [1, 8], got {m}")
    u = _unit_boundary(h)
    norms = _norms_over_words(h.matrices, u, m)
    hi = float(norms.max())
    spread = float((norms.max() - norms.min()) / hi) if hi > 0 else 0.0
    return spread > 1e-9, spread


@dataclass(frozen=True)
class BetaEstimate:
    m: int
    value: float  # max observed exact mu-average of log ||D0 A_w u||
    bound: float  # -(m/2) log 3
    n_random: int
    grid: int

    @property
    def margin(self) -> float:
        return self.bound - self.value


def _d0_orthonormal_basis(m: ExtensionMatrices) -> tuple[np.ndarray, np.ndarray]:
    """Seminorm-orthonormal basis of the mean-zero (non-constant) plane."""
    b1 = np.array([2.0, -1.0, -1.0], dtype=complex)
    b2 = np.array([0.0, 1.0, -1.0], dtype=complex)
    b1 /= m.seminorm(b1)
    # the two are orthogonal w.r.t. <.,.> on mean-zero vectors already
    b2 /= m.seminorm(b2)
    return b1, b2


def exact_log_average(m: ExtensionMatrices, u: Sequence[complex], depth: int) -> float:
    """Exact uniform average of log ||D0 A_w u|| over all words of length `depth`."""
    norms = _norms_over_words(m, np.asarray(u, dtype=complex), depth)
    if np.any(norms <= 0.0):
        raise ConstantBoundaryError("seminorm vanished along a word")
    return float(np.mean(np.log(norms)))


def beta_estimate(
    matrices: ExtensionMatrices,
    m: int,
    n_random_h: int = 32,
    seed: int = 0,
    grid: int = 24,
) -> BetaEstimate:
    """Estimate of the supremum over unit-seminorm data of the exact log-average.

    Combines `n_random_h` random unit-seminorm boundary data with a
    deterministic midpoint grid over the projective non-constant plane.  The
    estimate is one-sided: under-sampling can only loosen the margin to the
    -(m/2) log 3 bound, never fake a violation.
    """
    if not (1 <= m <= 7):
        raise ValueError(f"word length must be in [1, 7], got {m}")
    if n_random_h < 1:
        raise ValueError("need at least one random sample")
    b1, b2 = _d0_orthonormal_basis(matrices)
    best = -math.inf
    rng = WordSampler(seed).generator()
    for _ in range(n_random_h):
        coeff = rng.normal(size=4)
        u = (coeff[0] + 1j * coeff[1]) * b1 + (coeff[2] + 1j * coeff[3]) * b2
        u /= matrices.seminorm(u)
        best = max(best, exact_log_average(matrices, u, m))
    for a in range(grid):
        theta = (a + 0.5) * (math.pi / 2.0) / grid
        for b in range(grid):
            phi = (b + 0.5) * (2.0 * math.pi) / grid
            u = math.cos(theta) * b1 + math.sin(theta) * np.exp(1j * phi) * b2
            u /= matrices.seminorm(u)
            best = max(best, exact_log_average(matrices, u, m))
    return BetaEstimate(m, best, -(m / 2.0) * math.log(3.0), n_random_h, grid)


@dataclass(frozen=True)
class LyapunovEstimate:
    n_steps: int
    n_samples: int
    seed: int
    mean: float
    std_error: float
    per_sample: tuple[float, ...]

    @property
    def bound(self) -> float:
        return -LOG3_HALF

    @property
    def passes(self) -> bool:
        """Strict certificate: mean + 3 SE below -log(3)/2."""
        return self.mean + 3.0 * self.std_error < -LOG3_HALF


def lyapunov_exponent(
    h: HarmonicFunction,
    n_steps: int = 10_000,
    n_samples: int = 100,
    seed: int = 0,
) -> LyapunovEstimate:
    """Monte Carlo top Lyapunov exponent of the random seminorm product.

    Each sample draws an i.i.d. letter stream, applies the matching
    extension matrices to the running vector, and accumulates the log of the
    seminorm with per-step renormalization (mean removal plus unit seminorm)
    to avoid under/overflow.  Deterministic in (inputs, seed).
    """
    if n_steps < 100:
        raise ValueError(f"need at least 100 steps, got {n_steps}")
    if n_samples < 1:
        raise ValueError("need at least one sample")
    mats = h.matrices
    u0 = _unit_boundary(h)
    sampler = WordSampler(seed)
    scale = math.sqrt(3.0 * mats.c)
    per_sample = []
    for s in range(n_samples):
        letters = sampler.letters(n_steps, sample_index=s)
        v = u0.copy()
        acc = 0.0
        for letter in letters:
            v = mats.A[letter - 1] @ v
            v = v - v.mean()
            nrm = scale * math.sqrt(abs(np.vdot(v, v).real))
            if not (1e-300 < nrm < 1e300):
                raise ArithmeticError(
                    f"seminorm left the safe range despite renormalization: {nrm}"
                )
            acc += math.log(nrm)
            v = v / nrm  # keep unit seminorm so each log is one step's ratio
        per_sample.append(acc / n_steps)
    arr = np.array(per_sample)
    mean = float(arr.mean())
    se = float(arr.std(ddof=1) / math.sqrt(n_samples)) if n_samples > 1 else 0.0
    return LyapunovEstimate(n_steps, n_samples, int(seed), mean, se, tuple(per_sample))


@dataclass(frozen=True)
class RatioTrace:
    word_source: str  # "seed:<k>" or "explicit"
    log_ratios: tuple[float, ...]  # log( nu(T_{w<=n}) / mu(T_{w<=n}) ), n = 1..n_max

    @property
    def slope(self) -> float:
        """Least-squares slope of the log-ratio trace."""
        n = len(self.log_ratios)
        xs = np.arange(1, n + 1, dtype=float)
        return float(np.polyfit(xs, np.array(self.log_ratios), 1)[0])


def ratio_decay(
    h: HarmonicFunction,
    n_max: int = 50,
    seed: int | None = None,
    word: Sequence[int] | None = None,
) -> RatioTrace:
    """Log of the cell ratio nu/mu along one letter stream, computed in log space.

    log ratio at depth n is n log 3 + 2 log ||D0 A_{wn} ... A_{w1} u||; for a
    random stream it trends to -infinity with slope about log 3 plus twice
    the Lyapunov exponent.
    """
    if not (1 <= n_max <= 60):
        raise ValueError(f"depth must be in [1, 60], got {n_max}")
    if (seed is None) == (word is None):
        raise ValueError("provide exactly one of seed or word")
    if word is not None:
        letters = validate_word(word)
        if len(letters) < n_max:
            raise ValueError("explicit word shorter than n_max")
        source = "explicit"
    else:
        letters = tuple(int(a) for a in WordSampler(seed).letters(n_max))
        source = f"seed:{seed}"
    mats = h.matrices
    norm0 = mats.seminorm(h.boundary)
    if norm0 == 0.0:
        raise ConstantBoundaryError("constant boundary data rejected")
    v = (np.asarray(h.boundary, dtype=complex) - np.mean(h.boundary)) / norm0
    log_norm = math.log(norm0)
    scale = math.sqrt(3.0 * mats.c)
    out = []
    for n in range(1, n_max + 1):
        v = mats.A[letters[n - 1] - 1] @ v
        v = v - v.mean()
        nrm = scale * math.sqrt(abs(np.vdot(v, v).real))
        log_norm += math.log(nrm)
        v = v / nrm
        out.append(n * math.log(3.0) + 2.0 * log_norm)
    return RatioTrace(source, tuple(out))
