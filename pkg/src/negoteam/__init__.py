"""Simulation engine for bilateral negotiations between a team and an opponent.

The package models multi-issue alternating-offers negotiation where one
party is a team of agents with private linear additive utilities. Four
intra-team strategies (representative, plurality voting, Borda voting, and
a mediated full-unanimity build) are run against a time-conceding opponent
across configurable environments, with a reproducible experiment harness
on top.
"""

from .agents import (
    MemberState,
    OpponentResponse,
    OpponentState,
    ResponseKind,
    handover_set,
    member_accept_opponent,
    member_partial_accept,
    member_propose,
    member_value_bid,
    member_vote_binary,
    member_vote_borda,
    opponent_respond,
    partial_utility,
)
from .concession import (
    BetaClass,
    ConcessionParams,
    DeadlineClass,
    aspiration,
    sample_beta,
    sample_deadline,
)
from .domain import (
    AttributeSpec,
    Domain,
    Offer,
    Orientation,
    UtilityProfile,
    denormalize,
    evaluate,
    group_booking_domain,
    ideal_offer,
    load_scenario,
    normalize,
    opponent_best_values,
    reverse_profile,
    save_scenario,
    team_profile,
)
from .experiment import (
    CSV_COLUMNS,
    CellSummary,
    ExperimentCell,
    GridSpec,
    ResultRow,
    TTestResult,
    load_grid,
    metric_avg,
    metric_min,
    read_rows_csv,
    run_cell,
    run_grid,
    run_single,
    summaries_to_csv_text,
    summaries_to_tables,
    summarize,
    welch_t_test,
    write_rows_csv,
)
from .isosearch import iso_offer, iso_offer_dual, similarity
from .population import (
    ProfilePool,
    TeamClass,
    TeamClassStats,
    TeamGenerationError,
    classify_and_sample_teams,
    dissimilarity_matrix,
    draw_reservation,
    generate_pool,
    load_pool,
    pair_dissimilarity,
    save_pool,
    team_dissimilarity,
)
from .strategies import (
    Agenda,
    NegotiationConfig,
    NegotiationOutcome,
    NegotiationStatus,
    Strategy,
    build_agenda,
    fum_build_offer,
    re_build_offer,
    run_negotiation,
    sbv_select,
    ssv_accept,
    ssv_select,
    strategy_accept,
    trace_to_jsonl,
    unanimity_accept,
)

__version__ = "0.1.0"
