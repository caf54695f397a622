"""One-sided bipartite crossing minimisation: heuristics, local search, exact
small-instance solver, rank-sum statistics and a benchmark harness."""

from .classic import barycenter, median, sifting
from .crossings import (
    CrossTable,
    build_cross_table,
    count_crossings_direct,
    crossings_of,
    delta_adjacent_swap,
    delta_exchange,
    delta_jump,
    jump_delta_scan,
    pairwise_lower_bound,
)
from .errors import FormatError, ParameterError, SizeError
from .evolutionary import (
    MutationConfig,
    RunTrace,
    StopRule,
    mutate,
    run_scanning_rls,
    run_search,
    sample_strength,
)
from .exact import brute_force, exact_dp
from .instance import (
    BipartiteInstance,
    Ordering,
    generate_random,
    random_ordering,
    read_instance,
    write_instance,
)
from .stats import TestResult, wilcoxon_rank_sum

__version__ = "0.1.0"
