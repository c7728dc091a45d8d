"""Information-theoretic link scheduling (ITLinQ) for D2D networks."""
from .channel import (
    GainTable,
    Itu1411,
    LinkBudget,
    PathLoss,
    RayleighPathLoss,
    SnrTable,
    compute_gain_table,
    compute_snr_table,
    noise_power_dbm,
)
from .config import PRESETS, ExperimentConfig, build_config
from .harness import ExperimentResult, run_experiment
from .itis import (
    ConflictGraph,
    CoverResult,
    build_conflict_graph,
    exact_chromatic,
    exact_itis_cover,
    gamma_constant,
    greedy_coloring,
    greedy_itis_cover,
    is_itis,
    is_itis_sufficient,
    theoretical_fraction,
    threshold_distance,
)
from .rates import empirical_cdf, fraction_from_cover, link_rates, sinr, time_sharing_rate
from .scheduling import (
    FairItlinqParams,
    ItlinqParams,
    PriorityOrder,
    Schedule,
    all_on_schedule,
    fair_itlinq_schedule,
    flashlinq_schedule,
    itlinq_schedule,
    random_priority,
    tdma_schedule,
)
from .seeding import make_rng
from .topology import (
    LinkTopology,
    gen_closest_source_topology,
    gen_disk_topology,
    gen_square_topology,
    pairwise_source_distances,
)

__version__ = "0.1.0"
