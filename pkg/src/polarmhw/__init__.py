"""Polar-code minimum-weight analysis: counting, enumeration, FER estimates."""

__version__ = "0.1.0"

from polarmhw.bitops import (
    binary_expansion,
    digit_one_indices,
    encode,
    generator_row,
    generator_row_weight,
    min_distance,
    positions_of,
    row_prefix,
    zero_digit_prefix_sum,
)
from polarmhw.bound import (
    BoundReport,
    Decomposition,
    Part,
    TriggerTerm,
    bound_count,
    decompose,
    per_subset_bound,
    subtree_input_llr,
    zero_capacity_set,
)
from polarmhw.channel import (
    ChannelConfig,
    FerEstimate,
    FerPoint,
    fer_estimate,
    q_function,
    read_fer_csv,
    render_fer_csv,
    simulate_fer,
    sweep_fer,
    wilson_interval,
    write_fer_csv,
)
from polarmhw.construction import (
    CodeSpec,
    ReliabilityOrder,
    SpecFormatError,
    construct_ga,
    construct_pw,
    design_sigma,
    gaussian_approx_order,
    load_spec,
    polarization_weight_order,
    save_spec,
)
from polarmhw.listdec import (
    DecodePath,
    SearchDiagnostics,
    constrained_scl,
    scl_decode,
    scl_decode_batch,
)
from polarmhw.mhw import (
    EXHAUSTIVE_CAP,
    EnumFormatError,
    ExhaustiveCapError,
    MhwResult,
    enumerate_subset_scl,
    enumerate_zero_split,
    exhaustive_mhw,
    read_enumeration,
    scl_global_search,
    search_subset,
    write_enumeration,
    zero_split_subset,
)
from polarmhw.sctree import (
    ScOutcome,
    beta_combine,
    f_combine,
    g_combine,
    hard_decision,
    sc_decode,
    sc_replay,
    sc_retrace,
)
