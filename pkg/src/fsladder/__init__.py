"""Power dissipation on the Feynman-Sierpinski ladder.

A numerical library for the self-similar LC circuit built from nested
triangles: approximating networks and their Kirchhoff equilibria, the
effective impedance and its filter band, harmonic potentials generated by
the extension matrices, the power-dissipation measure on the dust of nodes,
and Monte Carlo certificates of its singularity against the uniform
Bernoulli measure.
"""

from .complexnet import (
    AsymmetricResponseError,
    Capacitor,
    Fixed,
    Inductor,
    Network,
    NetworkError,
    Resistor,
    Series,
    SingularInteriorError,
    admittance_laplacian,
    edge_power,
    equivalent_triangle,
    impedance_of,
    kirchhoff_solve,
    min_dissipation_extension,
    network_power,
    partial_schur,
    schur_trace,
)
from .geometry import IfsParams, Segment, apply_G, edge_segments, vertex_coordinates
from .harmonic import (
    ConstantBoundaryError,
    ExtensionMatrices,
    HarmonicFunction,
    SpectralError,
    compute_extension_matrices,
    continuity_modulus,
    level_invariance_report,
    spectral_report,
)
from .ladder import (
    ConvergenceError,
    EffectiveImpedance,
    FILTER_BAND_LOWER,
    FILTER_BAND_UPPER,
    LadderGraph,
    OutOfBandError,
    Renormalized,
    Truncated,
    assign_impedances,
    build_graph,
    decimation_map,
    effective_impedance,
    effective_impedance_eps,
    filter_condition,
    frequency_sweep,
    omega_from_t,
    regularized_effective_impedance,
)
from .measure import (
    BernoulliMeasure,
    CellMeasure,
    MeasureAxiomError,
    additivity_check,
    atom_check,
    hausdorff_dimension,
    osc_comparability,
)
from .singularity import (
    BetaEstimate,
    LyapunovEstimate,
    WordSampler,
    beta_estimate,
    lyapunov_exponent,
    nonconstancy_check,
    ratio_decay,
)
from .words import VertexId, canonical_vertex, word_from_str, word_to_str, words_at_level

__version__ = "0.1.0"
