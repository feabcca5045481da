"""Bootstrap percolation on power-law Chung-Lu random graphs.

Weight sequences and kernels live in :mod:`bootperc.weights`, samplers in
:mod:`bootperc.graphgen`, the percolation engine in :mod:`bootperc.percolation`,
closed-form thresholds in :mod:`bootperc.thresholds` and the Monte Carlo
harness in :mod:`bootperc.experiments`.
"""

__version__ = "0.1.0"

from ._errors import ValidationError
from .graph import Graph, induced_subgraph
from .graphgen import (
    clamped_pair_count,
    edge_probability,
    sample_chung_lu,
    sample_chung_lu_dense,
    sample_coupled_kernel,
    sample_gnp,
)
from .percolation import (
    PercolationTrace,
    SeedSpec,
    brute_force_bootstrap,
    count_neighbors_in_set,
    run_bootstrap,
    select_seeds,
)
from .rng import RngStream
from .thresholds import (
    ErThresholds,
    Regime,
    ThresholdReport,
    classify_regime,
    critical_a,
    critical_a_plus,
    er_thresholds,
    f_choice,
    first_moment_bound,
    p_inf,
    phi,
    phi1,
    supercritical_witness,
    threshold_report,
)
from .weights import (
    BandDecomposition,
    WeightSequence,
    alt_weights_chung_lu,
    band_decomposition,
    build_weights,
    kernel,
    moment_sum,
    tail,
    total_weight,
)
